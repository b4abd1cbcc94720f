//! Frequent/rare sequence mining: the PrefixSpan specialization for
//! single-junction items, maximal-frequent and minimal-rare extraction,
//! and the representative pattern set with its pruning steps.
//!
//! Mining reads an immutable database; per-prefix work is independent and
//! results are merged through a canonical sort, so output never depends on
//! evaluation order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::trajectory_db::{
    subsequence_of, JunctionId, JunctionSequence, SequentialDatabase, SupportValue,
};
use crate::Result;

/// User support threshold, kept as an exact fraction of the database size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinSup {
    num: u32,
    den: u32,
}

impl MinSup {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidParameter(format!(
                "minsup must satisfy 0 < {num}/{den} <= 1"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn numerator(&self) -> u32 {
        self.num
    }

    pub fn denominator(&self) -> u32 {
        self.den
    }

    /// Threshold test on cross-multiplied integers; no float ties.
    pub fn is_met_by(&self, support: &SupportValue) -> bool {
        support.count as u64 * self.den as u64 >= self.num as u64 * support.total as u64
    }
}

impl fmt::Display for MinSup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for MinSup {
    type Err = Error;

    /// Accepts `a/b` or a decimal in (0,1]; fractions are stored exactly.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse minsup '{s}'"));
        if let Some((a, b)) = s.split_once('/') {
            let num: u32 = a.trim().parse().map_err(|_| bad())?;
            let den: u32 = b.trim().parse().map_err(|_| bad())?;
            return MinSup::new(num, den);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let int: u32 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let den = 10u32.pow(frac.len() as u32);
            let num = int
                .checked_mul(den)
                .and_then(|n| n.checked_add(frac.parse::<u32>().map_err(|_| bad()).ok()?))
                .ok_or_else(bad)?;
            return MinSup::new(num, den);
        }
        let int: u32 = s.trim().parse().map_err(|_| bad())?;
        MinSup::new(int, 1)
    }
}

/// Which pattern collection a set represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternKind {
    /// All frequent sequences.
    Fs,
    /// Maximal frequent sequences.
    Mfs,
    /// Rare sequences produced by the boundary miner.
    Rs,
    /// Minimal rare sequences.
    Mrs,
    /// Representative set: maximal frequent plus pruned minimal rare.
    Ap,
}

/// A mined sequence together with its support in the source database.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub sequence: JunctionSequence,
    pub support: SupportValue,
}

/// A canonically ordered collection of patterns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSet {
    pub kind: PatternKind,
    pub patterns: Vec<Pattern>,
}

impl PatternSet {
    fn new(kind: PatternKind, mut patterns: Vec<Pattern>) -> Self {
        canonical_sort(&mut patterns);
        Self { kind, patterns }
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn sequences(&self) -> impl Iterator<Item = &JunctionSequence> {
        self.patterns.iter().map(|p| &p.sequence)
    }

    pub fn contains_sequence(&self, s: &JunctionSequence) -> bool {
        self.patterns.iter().any(|p| &p.sequence == s)
    }

    /// One pattern per line: `<junction ids> <count>/<total>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.patterns {
            out.push_str(&format!("{} {}\n", p.sequence, p.support));
        }
        out
    }
}

/// Deterministic order: length first, then lexicographic on junction ids.
fn canonical_sort(patterns: &mut [Pattern]) {
    patterns.sort_by(|a, b| {
        (a.sequence.len(), a.sequence.junctions())
            .cmp(&(b.sequence.len(), b.sequence.junctions()))
    });
}

/// Longest trajectory length; the default depth bound for rare mining.
pub fn default_max_len(db: &SequentialDatabase) -> usize {
    db.trajectories()
        .iter()
        .map(|t| t.path.len())
        .max()
        .unwrap_or(0)
}

/// All sequences over the junction universe with support >= minsup,
/// each exactly once, canonically sorted.
///
/// PrefixSpan with pseudo-projection: a projected database is a list of
/// (trajectory, resume position) pairs under the leftmost embedding of the
/// prefix, which is support-exact for subsequence counting.
pub fn mine_frequent(db: &SequentialDatabase, minsup: &MinSup) -> PatternSet {
    let projection: Vec<(usize, usize)> = (0..db.len()).map(|i| (i, 0)).collect();
    let mut prefix: Vec<JunctionId> = Vec::new();
    let mut out: Vec<Pattern> = Vec::new();
    grow_prefix(db, minsup, &projection, &mut prefix, &mut out);
    PatternSet::new(PatternKind::Fs, out)
}

fn grow_prefix(
    db: &SequentialDatabase,
    minsup: &MinSup,
    projection: &[(usize, usize)],
    prefix: &mut Vec<JunctionId>,
    out: &mut Vec<Pattern>,
) {
    // For every junction occurring in the projection, the next projection
    // resumes right after its first occurrence.
    let mut extensions: BTreeMap<JunctionId, Vec<(usize, usize)>> = BTreeMap::new();
    for &(ti, start) in projection {
        let path = db.trajectories()[ti].path.junctions();
        let mut firsts: BTreeMap<JunctionId, usize> = BTreeMap::new();
        for (pos, &j) in path.iter().enumerate().skip(start) {
            firsts.entry(j).or_insert(pos);
        }
        for (j, pos) in firsts {
            extensions.entry(j).or_default().push((ti, pos + 1));
        }
    }
    for (j, next) in extensions {
        let support = SupportValue {
            count: next.len(),
            total: db.len(),
        };
        if !minsup.is_met_by(&support) {
            continue;
        }
        prefix.push(j);
        out.push(Pattern {
            sequence: JunctionSequence::new(prefix.clone()).expect("prefix is non-empty"),
            support,
        });
        grow_prefix(db, minsup, &next, prefix, out);
        prefix.pop();
    }
}

/// Keep only the patterns not strictly contained in another member.
///
/// Walks the set in ascending length order, dropping previously kept
/// subsequences of each new element before inserting it.
pub fn maximal_frequent(fs: &PatternSet) -> PatternSet {
    let mut sorted = fs.patterns.clone();
    canonical_sort(&mut sorted);
    let mut maximal: Vec<Pattern> = Vec::new();
    for p in sorted {
        maximal.retain(|m| {
            !subsequence_of(m.sequence.junctions(), p.sequence.junctions())
        });
        maximal.push(p);
    }
    PatternSet::new(PatternKind::Mfs, maximal)
}

/// Level-wise rare miner over the frequent boundary.
///
/// Level k candidates extend frequent (k-1)-sequences by one universe
/// junction and must have every drop-one subsequence frequent; a rare
/// candidate is emitted and never expanded, so supersets of rare
/// sequences are never generated. Zero-support candidates do appear at
/// the boundary (the pruning stage removes them later).
pub fn mine_rare(db: &SequentialDatabase, minsup: &MinSup, max_len: usize) -> PatternSet {
    let universe: Vec<JunctionId> = db.universe().iter().copied().collect();
    let total = db.len();
    let mut rare: Vec<Pattern> = Vec::new();

    let mut frequent_prev: BTreeSet<Vec<JunctionId>> = BTreeSet::new();
    for &j in &universe {
        let support = SupportValue {
            count: db.support_count(&[j]),
            total,
        };
        if minsup.is_met_by(&support) {
            frequent_prev.insert(vec![j]);
        } else if max_len >= 1 {
            rare.push(Pattern {
                sequence: JunctionSequence::new(vec![j]).expect("singleton"),
                support,
            });
        }
    }

    let mut len = 2;
    while len <= max_len && !frequent_prev.is_empty() {
        let mut frequent_next: BTreeSet<Vec<JunctionId>> = BTreeSet::new();
        for parent in &frequent_prev {
            for &j in &universe {
                let mut candidate = parent.clone();
                candidate.push(j);
                if !all_drop_one_frequent(&candidate, &frequent_prev) {
                    continue;
                }
                let support = SupportValue {
                    count: db.support_count(&candidate),
                    total,
                };
                if minsup.is_met_by(&support) {
                    frequent_next.insert(candidate);
                } else {
                    rare.push(Pattern {
                        sequence: JunctionSequence::new(candidate).expect("non-empty"),
                        support,
                    });
                }
            }
        }
        frequent_prev = frequent_next;
        len += 1;
    }
    PatternSet::new(PatternKind::Rs, rare)
}

fn all_drop_one_frequent(
    candidate: &[JunctionId],
    frequent_prev: &BTreeSet<Vec<JunctionId>>,
) -> bool {
    let mut sub = Vec::with_capacity(candidate.len() - 1);
    for drop in 0..candidate.len() {
        sub.clear();
        sub.extend(
            candidate
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, &j)| j),
        );
        if !frequent_prev.contains(&sub) {
            return false;
        }
    }
    true
}

/// Rare sequences with no rare strict subsequence. Input is walked in
/// ascending length order; an element is kept only if no kept element is
/// an ordered subsequence of it.
pub fn minimal_rare(rs: &PatternSet) -> PatternSet {
    let mut sorted = rs.patterns.clone();
    canonical_sort(&mut sorted);
    let mut minimal: Vec<Pattern> = Vec::new();
    for p in sorted {
        let dominated = minimal
            .iter()
            .any(|m| subsequence_of(m.sequence.junctions(), p.sequence.junctions()));
        if !dominated {
            minimal.push(p);
        }
    }
    PatternSet::new(PatternKind::Mrs, minimal)
}

/// Drop zero-support sequences and 1-sequences from a minimal-rare set.
pub fn prune_amp(mrs: &PatternSet) -> PatternSet {
    let kept = mrs
        .patterns
        .iter()
        .filter(|p| p.support.count > 0 && p.sequence.len() >= 2)
        .cloned()
        .collect();
    PatternSet::new(PatternKind::Mrs, kept)
}

/// The representative pattern set: maximal frequent united with the
/// pruned minimal rare set, duplicates removed.
pub fn amp(db: &SequentialDatabase, minsup: &MinSup, max_len: usize) -> PatternSet {
    let mfs = maximal_frequent(&mine_frequent(db, minsup));
    let pruned = prune_amp(&minimal_rare(&mine_rare(db, minsup, max_len)));
    let mut union = mfs.patterns;
    for p in pruned.patterns {
        if !union.iter().any(|q| q.sequence == p.sequence) {
            union.push(p);
        }
    }
    PatternSet::new(PatternKind::Ap, union)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(ids: &[u32]) -> JunctionSequence {
        JunctionSequence::from_ids(ids).unwrap()
    }

    fn table_d() -> SequentialDatabase {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/d.txt");
        SequentialDatabase::load_path(path).unwrap()
    }

    fn sequences(set: &PatternSet) -> Vec<Vec<u32>> {
        set.patterns
            .iter()
            .map(|p| p.sequence.junctions().iter().map(|j| j.0).collect())
            .collect()
    }

    #[test]
    fn minsup_parses_fractions_and_decimals() {
        assert_eq!("2/8".parse::<MinSup>().unwrap(), MinSup::new(2, 8).unwrap());
        assert_eq!("0.25".parse::<MinSup>().unwrap(), MinSup::new(25, 100).unwrap());
        assert_eq!("1".parse::<MinSup>().unwrap(), MinSup::new(1, 1).unwrap());
        assert!(".5".parse::<MinSup>().is_ok());
        assert!("0/8".parse::<MinSup>().is_err());
        assert!("9/8".parse::<MinSup>().is_err());
        assert!("1.5".parse::<MinSup>().is_err());
        assert!("x".parse::<MinSup>().is_err());
    }

    #[test]
    fn minsup_threshold_is_exact_on_integers() {
        let m = MinSup::new(2, 8).unwrap();
        assert!(m.is_met_by(&SupportValue { count: 2, total: 8 }));
        assert!(!m.is_met_by(&SupportValue { count: 1, total: 8 }));
        // 3/12 == 2/8: met exactly, no float rounding involved.
        assert!(m.is_met_by(&SupportValue { count: 3, total: 12 }));
    }

    #[test]
    fn tiny_database_mines_exhaustively() {
        let db = SequentialDatabase::load("a: 1 2\n".as_bytes()).unwrap();
        let fs = mine_frequent(&db, &MinSup::new(1, 1).unwrap());
        assert_eq!(sequences(&fs), vec![vec![1], vec![2], vec![1, 2]]);
    }

    #[test]
    fn frequent_set_of_the_bundle_at_two_eighths() {
        let db = table_d();
        let fs = mine_frequent(&db, &MinSup::new(2, 8).unwrap());
        let want: Vec<Vec<u32>> = vec![
            vec![2],
            vec![3],
            vec![5],
            vec![6],
            vec![7],
            vec![2, 6],
            vec![2, 7],
            vec![3, 6],
            vec![3, 7],
            vec![5, 3],
            vec![5, 7],
            vec![6, 3],
            vec![6, 5],
            vec![6, 7],
            vec![2, 6, 7],
            vec![5, 3, 7],
        ];
        assert_eq!(sequences(&fs), want);
        // Spot-check supports against the definition's example.
        let p = fs
            .patterns
            .iter()
            .find(|p| p.sequence == seq(&[6, 7]))
            .unwrap();
        assert_eq!((p.support.count, p.support.total), (3, 8));
    }

    #[test]
    fn maximal_frequent_keeps_the_five_undominated_sequences() {
        let db = table_d();
        let fs = mine_frequent(&db, &MinSup::new(2, 8).unwrap());
        let mfs = maximal_frequent(&fs);
        let want: Vec<Vec<u32>> = vec![
            vec![3, 6],
            vec![6, 3],
            vec![6, 5],
            vec![2, 6, 7],
            vec![5, 3, 7],
        ];
        assert_eq!(sequences(&mfs), want);
    }

    #[test]
    fn maximal_of_a_singleton_set_is_itself() {
        let db = SequentialDatabase::load("a: 4\n".as_bytes()).unwrap();
        let fs = mine_frequent(&db, &MinSup::new(1, 1).unwrap());
        let mfs = maximal_frequent(&fs);
        assert_eq!(sequences(&mfs), vec![vec![4]]);
    }

    #[test]
    fn rare_miner_emits_the_boundary() {
        let db = table_d();
        let minsup = MinSup::new(2, 8).unwrap();
        let rs = mine_rare(&db, &minsup, default_max_len(&db));
        // Contains the rare triple from the definitions...
        assert!(rs.contains_sequence(&seq(&[6, 5, 7])));
        let p = rs
            .patterns
            .iter()
            .find(|p| p.sequence == seq(&[6, 5, 7]))
            .unwrap();
        assert_eq!((p.support.count, p.support.total), (1, 8));
        // ...and the rare singletons.
        assert!(rs.contains_sequence(&seq(&[1])));
        assert!(rs.contains_sequence(&seq(&[4])));
        // Supersets of rare sequences are never expanded.
        assert!(!rs.contains_sequence(&seq(&[6, 5, 7, 1])));
    }

    #[test]
    fn minimal_rare_of_the_bundle() {
        let db = table_d();
        let minsup = MinSup::new(2, 8).unwrap();
        let mrs = minimal_rare(&mine_rare(&db, &minsup, default_max_len(&db)));
        // Every rare boundary candidate is already minimal here: the two
        // rare singletons, every ordered pair of frequent junctions that
        // never co-occurs in that order (including immediate repeats),
        // and four rare triples over the frequent pairs.
        let want: Vec<Vec<u32>> = vec![
            vec![1],
            vec![4],
            vec![2, 2],
            vec![2, 3],
            vec![2, 5],
            vec![3, 2],
            vec![3, 3],
            vec![3, 5],
            vec![5, 2],
            vec![5, 5],
            vec![5, 6],
            vec![6, 2],
            vec![6, 6],
            vec![7, 2],
            vec![7, 3],
            vec![7, 5],
            vec![7, 6],
            vec![7, 7],
            vec![3, 6, 7],
            vec![6, 3, 7],
            vec![6, 5, 3],
            vec![6, 5, 7],
        ];
        assert_eq!(sequences(&mrs), want);
        // The triple from the worked example is minimal: its strict
        // subsequences (6 3), (6 7), (3 7) are all frequent.
        assert!(mrs.contains_sequence(&seq(&[6, 3, 7])));
    }

    #[test]
    fn pruning_drops_nulls_and_singletons() {
        let db = table_d();
        let minsup = MinSup::new(2, 8).unwrap();
        let mrs = minimal_rare(&mine_rare(&db, &minsup, default_max_len(&db)));
        let pruned = prune_amp(&mrs);
        let want: Vec<Vec<u32>> = vec![vec![6, 3, 7], vec![6, 5, 3], vec![6, 5, 7]];
        assert_eq!(sequences(&pruned), want);
    }

    #[test]
    fn pruning_a_set_of_singletons_yields_empty() {
        let db = table_d();
        let singles = PatternSet::new(
            PatternKind::Mrs,
            vec![Pattern {
                sequence: seq(&[1]),
                support: db.support(&seq(&[1])),
            }],
        );
        assert!(prune_amp(&singles).is_empty());
    }

    #[test]
    fn pruning_drops_zero_support_members() {
        let set = PatternSet::new(
            PatternKind::Mrs,
            vec![
                Pattern {
                    sequence: seq(&[3, 2]),
                    support: SupportValue { count: 0, total: 8 },
                },
                Pattern {
                    sequence: seq(&[6, 5, 7]),
                    support: SupportValue { count: 1, total: 8 },
                },
            ],
        );
        assert_eq!(sequences(&prune_amp(&set)), vec![vec![6, 5, 7]]);
    }

    #[test]
    fn representative_set_unites_maximal_and_pruned_rare() {
        let db = table_d();
        let ap = amp(&db, &MinSup::new(2, 8).unwrap(), default_max_len(&db));
        let want: Vec<Vec<u32>> = vec![
            vec![3, 6],
            vec![6, 3],
            vec![6, 5],
            vec![2, 6, 7],
            vec![5, 3, 7],
            vec![6, 3, 7],
            vec![6, 5, 3],
            vec![6, 5, 7],
        ];
        assert_eq!(sequences(&ap), want);
    }

    #[test]
    fn amp_reduces_to_mfs_when_nothing_rare_survives_pruning() {
        // One trajectory at minsup 1/1: every subsequence is frequent and
        // every boundary candidate is null, so AP == MFS.
        let db = SequentialDatabase::load("a: 1 2\n".as_bytes()).unwrap();
        let minsup = MinSup::new(1, 1).unwrap();
        let ap = amp(&db, &minsup, default_max_len(&db));
        let mfs = maximal_frequent(&mine_frequent(&db, &minsup));
        assert_eq!(sequences(&ap), sequences(&mfs));
    }

    #[test]
    fn pattern_set_text_format() {
        let db = table_d();
        let set = PatternSet::new(
            PatternKind::Fs,
            vec![Pattern {
                sequence: seq(&[2, 6, 7]),
                support: db.support(&seq(&[2, 6, 7])),
            }],
        );
        assert_eq!(set.to_text(), "2 6 7 2/8\n");
    }
}
