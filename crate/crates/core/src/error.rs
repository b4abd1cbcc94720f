use crate::trajectory_db::JunctionId;

/// Errors surfaced by the planning toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("empty database")]
    EmptyDatabase,

    #[error("duplicate vehicle id '{id}' at line {line}")]
    DuplicateVehicle { id: String, line: usize },

    #[error("empty junction sequence")]
    EmptySequence,

    #[error("empty pattern set")]
    EmptyPatternSet,

    #[error("no transversals to select from")]
    NoTransversals,

    #[error("budget k={k} out of range 1..={n}")]
    KOutOfRange { k: usize, n: usize },

    #[error("sequence has zero support; benefit is undefined")]
    ZeroSupport,

    #[error("sequence is not contained in the trajectory")]
    NotContained,

    #[error("no sequence reached the benefit threshold; nothing to place")]
    EmptyMip,

    #[error("unknown junction {0}")]
    UnknownJunction(JunctionId),

    #[error("distance matrix mismatch: {0}")]
    DimensionMismatch(String),

    #[error("score weights must be non-negative and not all zero")]
    InvalidScoreWeights,

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
