//! Six-relation interval algebra over closed calendar intervals.
//!
//! Two intervals stand in exactly one of BEFORE, AFTER, INCLUDES,
//! INCLUDED_BY, SIMULTANEOUS, or OVERLAP. Relations compose transitively
//! through a 6x6 table: when a pair of hops does not force a unique
//! relation, composition yields UNDETERMINED. The table is generated by
//! enumerating interval triples over a small integer window and ships as a
//! golden text file; the generator and the file are checked against each
//! other in tests.

use std::fmt;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chronon::TimeInterval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// The generated composition table broke one of its own invariants.
    #[error("composition oracle inconsistency: {0}")]
    OracleInconsistency(String),
    /// A golden table file failed to parse.
    #[error("malformed composition table line {line}: {text:?}")]
    MalformedTable { line: usize, text: String },
}

/// The relation vocabulary, in the fixed export order.
///
/// `Undetermined` is an inference outcome only; it is never stored as a
/// graph edge label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TemporalRelation {
    Before,
    After,
    Includes,
    IncludedBy,
    Simultaneous,
    Overlap,
    Undetermined,
}

/// The six storable relations in vocabulary order (excludes `Undetermined`).
pub const RELATION_VOCABULARY: [TemporalRelation; 6] = [
    TemporalRelation::Before,
    TemporalRelation::After,
    TemporalRelation::Includes,
    TemporalRelation::IncludedBy,
    TemporalRelation::Simultaneous,
    TemporalRelation::Overlap,
];

impl TemporalRelation {
    /// The relation seen from the other endpoint's perspective.
    pub fn inverse(self) -> Self {
        match self {
            TemporalRelation::Before => TemporalRelation::After,
            TemporalRelation::After => TemporalRelation::Before,
            TemporalRelation::Includes => TemporalRelation::IncludedBy,
            TemporalRelation::IncludedBy => TemporalRelation::Includes,
            TemporalRelation::Simultaneous => TemporalRelation::Simultaneous,
            TemporalRelation::Overlap => TemporalRelation::Overlap,
            TemporalRelation::Undetermined => TemporalRelation::Undetermined,
        }
    }

    /// Index into the fixed vocabulary; `None` for `Undetermined`.
    pub fn vocabulary_index(self) -> Option<usize> {
        RELATION_VOCABULARY.iter().position(|r| *r == self)
    }

    pub fn is_storable(self) -> bool {
        self != TemporalRelation::Undetermined
    }

    /// Upper-case wire name, as used in annotation files and the golden
    /// composition table.
    pub fn name(self) -> &'static str {
        match self {
            TemporalRelation::Before => "BEFORE",
            TemporalRelation::After => "AFTER",
            TemporalRelation::Includes => "INCLUDES",
            TemporalRelation::IncludedBy => "INCLUDED_BY",
            TemporalRelation::Simultaneous => "SIMULTANEOUS",
            TemporalRelation::Overlap => "OVERLAP",
            TemporalRelation::Undetermined => "UNDETERMINED",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "BEFORE" => Some(TemporalRelation::Before),
            "AFTER" => Some(TemporalRelation::After),
            "INCLUDES" => Some(TemporalRelation::Includes),
            "INCLUDED_BY" => Some(TemporalRelation::IncludedBy),
            "SIMULTANEOUS" => Some(TemporalRelation::Simultaneous),
            "OVERLAP" => Some(TemporalRelation::Overlap),
            "UNDETERMINED" => Some(TemporalRelation::Undetermined),
            _ => None,
        }
    }

    /// Lower-case marker label with internal spaces ("included by").
    pub fn marker_label(self) -> &'static str {
        match self {
            TemporalRelation::Before => "before",
            TemporalRelation::After => "after",
            TemporalRelation::Includes => "includes",
            TemporalRelation::IncludedBy => "included by",
            TemporalRelation::Simultaneous => "simultaneous",
            TemporalRelation::Overlap => "overlap",
            TemporalRelation::Undetermined => "undetermined",
        }
    }

    /// Collapses the six relations onto {BEFORE, AFTER, OVERLAP}.
    pub fn merge3(self) -> Self {
        match self {
            TemporalRelation::Before | TemporalRelation::After | TemporalRelation::Undetermined => {
                self
            }
            _ => TemporalRelation::Overlap,
        }
    }
}

impl fmt::Display for TemporalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Relates two closed intervals at day granularity.
///
/// Exactly one relation holds for any pair: SIMULTANEOUS for identical
/// endpoints; BEFORE/AFTER for disjoint order; INCLUDES/INCLUDED_BY for
/// strict containment (shared endpoints allowed); OVERLAP for intersecting
/// intervals where neither contains the other. Unbounded endpoints compare
/// as minus/plus infinity.
pub fn relate(a: &TimeInterval, b: &TimeInterval) -> TemporalRelation {
    if a.start() == b.start() && a.end() == b.end() {
        TemporalRelation::Simultaneous
    } else if a.end() < b.start() {
        TemporalRelation::Before
    } else if a.start() > b.end() {
        TemporalRelation::After
    } else if a.start() <= b.start() && b.end() <= a.end() {
        TemporalRelation::Includes
    } else if b.start() <= a.start() && a.end() <= b.end() {
        TemporalRelation::IncludedBy
    } else {
        TemporalRelation::Overlap
    }
}

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

/// 6x6 transitivity table: (first hop, second hop) -> composed relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionTable {
    cells: [[TemporalRelation; 6]; 6],
}

impl CompositionTable {
    pub fn get(&self, r1: TemporalRelation, r2: TemporalRelation) -> TemporalRelation {
        match (r1.vocabulary_index(), r2.vocabulary_index()) {
            (Some(i), Some(j)) => self.cells[i][j],
            _ => TemporalRelation::Undetermined,
        }
    }

    /// Serializes in the golden-file layout: 36 lines of "R1 R2 -> R3",
    /// row-major in vocabulary order.
    pub fn to_golden_string(&self) -> String {
        let mut out = String::new();
        for r1 in RELATION_VOCABULARY {
            for r2 in RELATION_VOCABULARY {
                out.push_str(&format!("{} {} -> {}\n", r1, r2, self.get(r1, r2)));
            }
        }
        out
    }

    pub fn from_golden_str(text: &str) -> Result<Self, AlgebraError> {
        let mut cells = [[TemporalRelation::Undetermined; 6]; 6];
        let mut seen = [[false; 6]; 6];
        for (ln, line) in text.lines().enumerate() {
            let bad = || AlgebraError::MalformedTable {
                line: ln + 1,
                text: line.to_string(),
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [r1, r2, arrow, r3] = toks.as_slice() else {
                return Err(bad());
            };
            if *arrow != "->" {
                return Err(bad());
            }
            let parse = |s: &str| TemporalRelation::from_name(s).ok_or_else(bad);
            let (r1, r2, r3) = (parse(r1)?, parse(r2)?, parse(r3)?);
            let (i, j) = match (r1.vocabulary_index(), r2.vocabulary_index()) {
                (Some(i), Some(j)) => (i, j),
                _ => return Err(bad()),
            };
            cells[i][j] = r3;
            seen[i][j] = true;
        }
        if seen.iter().flatten().any(|s| !s) {
            return Err(AlgebraError::MalformedTable {
                line: 0,
                text: "table is missing cells".into(),
            });
        }
        Ok(CompositionTable { cells })
    }

    fn check_invariants(&self) -> Result<(), AlgebraError> {
        for r in RELATION_VOCABULARY {
            if self.get(r, TemporalRelation::Simultaneous) != r
                || self.get(TemporalRelation::Simultaneous, r) != r
            {
                return Err(AlgebraError::OracleInconsistency(format!(
                    "SIMULTANEOUS is not an identity for {r}"
                )));
            }
        }
        for r in RELATION_VOCABULARY {
            for s in RELATION_VOCABULARY {
                let fwd = self.get(r, s);
                if fwd.is_storable() && self.get(s.inverse(), r.inverse()) != fwd.inverse() {
                    return Err(AlgebraError::OracleInconsistency(format!(
                        "inverse symmetry broken at ({r}, {s})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// All closed intervals with integer endpoints 0 <= s <= e < width, as
/// (start, end) day pairs.
fn window_intervals(width: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for s in 0..width {
        for e in s..width {
            out.push((s, e));
        }
    }
    out
}

/// Relates two integer-endpoint intervals with the same predicate order as
/// [`relate`]; used by the table generator so composition never depends on
/// calendar plumbing.
pub fn relate_days(a: (i64, i64), b: (i64, i64)) -> TemporalRelation {
    if a == b {
        TemporalRelation::Simultaneous
    } else if a.1 < b.0 {
        TemporalRelation::Before
    } else if a.0 > b.1 {
        TemporalRelation::After
    } else if a.0 <= b.0 && b.1 <= a.1 {
        TemporalRelation::Includes
    } else if b.0 <= a.0 && a.1 <= b.1 {
        TemporalRelation::IncludedBy
    } else {
        TemporalRelation::Overlap
    }
}

/// Generates the composition table by brute-force enumeration.
///
/// For each relation pair, every triple (A, B, C) of intervals with integer
/// endpoints in a window of width 8 is inspected; a cell is the single
/// outcome of relate(A, C) when unique, UNDETERMINED otherwise. A window
/// admitting 6 distinct endpoint values realizes every order type of three
/// intervals, including those with unbounded endpoints, so the enumeration
/// is exhaustive for the whole domain.
pub fn build_composition_table() -> Result<CompositionTable, AlgebraError> {
    const WIDTH: i64 = 8;
    let intervals = window_intervals(WIDTH);
    let mut outcome_sets = [[0u8; 6]; 6]; // bitmask of observed outcomes per cell
    for &a in &intervals {
        for &b in &intervals {
            let r1 = relate_days(a, b);
            let i = r1.vocabulary_index().expect("storable");
            for &c in &intervals {
                let r2 = relate_days(b, c);
                let j = r2.vocabulary_index().expect("storable");
                let out = relate_days(a, c).vocabulary_index().expect("storable");
                outcome_sets[i][j] |= 1 << out;
            }
        }
    }
    let mut cells = [[TemporalRelation::Undetermined; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mask = outcome_sets[i][j];
            if mask == 0 {
                return Err(AlgebraError::OracleInconsistency(format!(
                    "no witness triple for ({}, {})",
                    RELATION_VOCABULARY[i], RELATION_VOCABULARY[j]
                )));
            }
            if mask.count_ones() == 1 {
                cells[i][j] = RELATION_VOCABULARY[mask.trailing_zeros() as usize];
            }
        }
    }
    let table = CompositionTable { cells };
    table.check_invariants()?;
    Ok(table)
}

static COMPOSITION: Lazy<CompositionTable> =
    Lazy::new(|| build_composition_table().expect("composition table generation"));

/// Composes two hop relations transitively.
///
/// Returns UNDETERMINED when the pair does not force a unique relation, or
/// when either input is already UNDETERMINED.
pub fn compose(r1: TemporalRelation, r2: TemporalRelation) -> TemporalRelation {
    COMPOSITION.get(r1, r2)
}

/// The golden composition table shipped with the crate.
pub const GOLDEN_TABLE: &str = include_str!("../data/composition_table.txt");
