#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::{DatasetError, DatasetRow};
use alloc::string::String;

/// Empirical relation between two classes, read off co-occurrence counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(rename_all = "snake_case"))]
pub enum PairRelation {
    CompleteOverlap,
    AContainsB,
    BContainsA,
    MutualExclusion,
    PartialOverlap,
}

impl PairRelation {
    pub fn as_str(self) -> &'static str {
        match self {
            PairRelation::CompleteOverlap => "complete_overlap",
            PairRelation::AContainsB => "a_contains_b",
            PairRelation::BContainsA => "b_contains_a",
            PairRelation::MutualExclusion => "mutual_exclusion",
            PairRelation::PartialOverlap => "partial_overlap",
        }
    }
}

pub fn classify_pair_relation(rows: &[DatasetRow], a: &str, b: &str) -> Result<PairRelation, DatasetError> {
    let (mut both, mut a_only, mut b_only) = (0usize, 0usize, 0usize);
    for row in rows {
        match (row.has(a), row.has(b)) {
            (true, true) => both += 1,
            (true, false) => a_only += 1,
            (false, true) => b_only += 1,
            (false, false) => {}
        }
    }
    if both + a_only == 0 {
        return Err(DatasetError::ClassUnseen(String::from(a)));
    }
    if both + b_only == 0 {
        return Err(DatasetError::ClassUnseen(String::from(b)));
    }
    Ok(match (both, a_only, b_only) {
        (0, _, _) => PairRelation::MutualExclusion,
        (_, 0, 0) => PairRelation::CompleteOverlap,
        (_, _, 0) => PairRelation::AContainsB,
        (_, 0, _) => PairRelation::BContainsA,
        _ => PairRelation::PartialOverlap,
    })
}
