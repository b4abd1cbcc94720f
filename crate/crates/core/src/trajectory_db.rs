//! Ordered trajectory data: loading, validation, the ordered-subsequence
//! relation and support counting that the mining and placement layers
//! build on.
//!
//! The database is immutable after load; every query here is pure, so
//! concurrent readers need no synchronization.

use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Identifier of a road junction. Stable within a dataset.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct JunctionId(pub u32);

impl fmt::Display for JunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j{}", self.0)
    }
}

/// An ordered, non-empty list of junctions. Order is significant and a
/// junction may appear more than once (a vehicle can revisit it).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JunctionSequence(Vec<JunctionId>);

impl JunctionSequence {
    pub fn new(junctions: Vec<JunctionId>) -> Result<Self> {
        if junctions.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self(junctions))
    }

    /// Convenience constructor from raw ids.
    pub fn from_ids(ids: &[u32]) -> Result<Self> {
        Self::new(ids.iter().map(|&i| JunctionId(i)).collect())
    }

    pub fn junctions(&self) -> &[JunctionId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, j: JunctionId) -> bool {
        self.0.contains(&j)
    }

    /// The distinct junctions of the sequence, order dropped.
    pub fn junction_set(&self) -> BTreeSet<JunctionId> {
        self.0.iter().copied().collect()
    }
}

impl fmt::Display for JunctionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for j in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", j.0)?;
            first = false;
        }
        Ok(())
    }
}

/// One vehicle's recorded path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub vehicle_id: String,
    pub path: JunctionSequence,
}

/// Exact support of a sequence: how many trajectories contain it, out of
/// how many. Kept as integers so threshold tests never hit float ties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportValue {
    pub count: usize,
    pub total: usize,
}

impl SupportValue {
    pub fn fraction(&self) -> f64 {
        self.count as f64 / self.total as f64
    }
}

impl fmt::Display for SupportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.count, self.total)
    }
}

/// True iff the elements of `s` appear in `t` in the same relative order,
/// not necessarily contiguously. Greedy two-pointer scan.
pub fn is_ordered_subsequence(s: &JunctionSequence, t: &JunctionSequence) -> bool {
    subsequence_of(s.junctions(), t.junctions())
}

pub(crate) fn subsequence_of(s: &[JunctionId], t: &[JunctionId]) -> bool {
    let mut si = 0;
    for &j in t {
        if si == s.len() {
            break;
        }
        if s[si] == j {
            si += 1;
        }
    }
    si == s.len()
}

/// An ordered collection of trajectories plus the set of junctions they
/// visit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequentialDatabase {
    trajectories: Vec<Trajectory>,
    junction_universe: BTreeSet<JunctionId>,
}

impl SequentialDatabase {
    pub fn from_trajectories(trajectories: Vec<Trajectory>) -> Result<Self> {
        if trajectories.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        let mut seen = BTreeSet::new();
        for t in &trajectories {
            if !seen.insert(t.vehicle_id.as_str()) {
                return Err(Error::DuplicateVehicle {
                    id: t.vehicle_id.clone(),
                    line: 0,
                });
            }
        }
        let junction_universe = trajectories
            .iter()
            .flat_map(|t| t.path.junctions().iter().copied())
            .collect();
        Ok(Self {
            trajectories,
            junction_universe,
        })
    }

    /// Parse the trajectory text format: one `<vehicle_id>:<ids>` record
    /// per line, `#` starts a comment, blank lines are skipped.
    pub fn load(reader: impl BufRead) -> Result<Self> {
        let mut trajectories: Vec<Trajectory> = Vec::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (id, rest) = line.split_once(':').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected '<vehicle_id>:<junction ids>'".into(),
            })?;
            let id = id.trim();
            if id.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "missing vehicle id".into(),
                });
            }
            if !seen.insert(id.to_string()) {
                return Err(Error::DuplicateVehicle {
                    id: id.to_string(),
                    line: line_no,
                });
            }
            let mut junctions = Vec::new();
            for tok in rest.split_whitespace() {
                let n: u32 = tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid junction id '{tok}'"),
                })?;
                junctions.push(JunctionId(n));
            }
            if junctions.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "trajectory has no junctions".into(),
                });
            }
            trajectories.push(Trajectory {
                vehicle_id: id.to_string(),
                path: JunctionSequence(junctions),
            });
        }
        if trajectories.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        let junction_universe = trajectories
            .iter()
            .flat_map(|t| t.path.junctions().iter().copied())
            .collect();
        Ok(Self {
            trajectories,
            junction_universe,
        })
    }

    pub fn load_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::load(std::io::BufReader::new(file))
    }

    /// Render back to the trajectory text format. `load(to_text())`
    /// reproduces the same trajectory list.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.trajectories {
            out.push_str(&t.vehicle_id);
            out.push_str(": ");
            out.push_str(&t.path.to_string());
            out.push('\n');
        }
        out
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    pub fn universe(&self) -> &BTreeSet<JunctionId> {
        &self.junction_universe
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    /// Support of `s`: the number of trajectories containing `s` as an
    /// ordered subsequence. A trajectory counts once however many
    /// embeddings it admits.
    pub fn support(&self, s: &JunctionSequence) -> SupportValue {
        SupportValue {
            count: self.support_count(s.junctions()),
            total: self.trajectories.len(),
        }
    }

    pub(crate) fn support_count(&self, s: &[JunctionId]) -> usize {
        self.trajectories
            .iter()
            .filter(|t| subsequence_of(s, t.path.junctions()))
            .count()
    }

    /// Number of trajectories whose path visits `j` at least once.
    pub fn crossing_count(&self, j: JunctionId) -> usize {
        self.trajectories
            .iter()
            .filter(|t| t.path.contains(j))
            .count()
    }
}
