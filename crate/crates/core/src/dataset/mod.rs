//! Annotated rows and the operations that prepare them for training:
//! preprocessing rules, label repair, exclusion-class imputation, output
//! formats, sampling weights, pair relations and grouped splits.

mod clean;
mod prepare;
mod relation;
mod sampling;
mod split;
pub mod synthetic;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::taxonomy::{Dubt, PreprocessRule};

pub use clean::{clean_labels, impute_exclusions, CleaningReport};
pub use prepare::{emit_prepared, PreparedColumn, PreparedDataset, PreparedFormat};
pub use relation::{classify_pair_relation, PairRelation};
pub use sampling::{sampling_weights, SamplingMode};
pub use split::{grouped_split, Split};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DatasetRow {
    pub instance_id: String,
    /// Rows sharing a group always land in the same split.
    pub group_id: Option<String>,
    /// Opaque payload, typically a path.
    pub features: String,
    pub labels: BTreeSet<String>,
}

impl DatasetRow {
    pub fn new<I, S>(instance_id: impl Into<String>, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        DatasetRow {
            instance_id: instance_id.into(),
            group_id: None,
            features: String::new(),
            labels: labels.into_iter().map(Into::into).collect(),
        }
    }

    pub fn has(&self, class: &str) -> bool {
        self.labels.contains(class)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub enum DatasetError {
    #[error("row `{instance_id}` has label `{class}` that the taxonomy does not define")]
    UnknownClass { instance_id: String, class: String },
    #[error("`{0}` is not an exclusion class of the taxonomy")]
    NotAnExclusionClass(String),
    #[error("the dataset has no rows")]
    EmptyDataset,
    #[error("class `{0}` does not appear in any row")]
    ClassUnseen(String),
    #[error("unknown output format `{0}`")]
    InvalidFormat(String),
    #[error("invalid split fraction {0}")]
    InvalidFraction(f64),
}

/// A label no rule maps and the taxonomy does not know.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PreprocessWarning {
    pub instance_id: String,
    pub label: String,
}

/// Replaces every label that is the source of a rule by the rule's targets.
/// Labels untouched by the rules and unknown to `dubt` are kept and
/// reported.
pub fn apply_preprocessing(
    rows: &[DatasetRow],
    rules: &[PreprocessRule],
    dubt: &Dubt,
) -> (Vec<DatasetRow>, Vec<PreprocessWarning>) {
    let mut targets: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for rule in rules {
        targets.entry(rule.source.as_str()).or_default().extend(rule.targets.iter().map(String::as_str));
    }
    let mut warnings = Vec::new();
    let out = rows
        .iter()
        .map(|row| {
            let mut labels = BTreeSet::new();
            for label in &row.labels {
                match targets.get(label.as_str()) {
                    Some(mapped) => labels.extend(mapped.iter().map(|t| String::from(*t))),
                    None => {
                        if !dubt.contains(label) {
                            warnings
                                .push(PreprocessWarning { instance_id: row.instance_id.clone(), label: label.clone() });
                        }
                        labels.insert(label.clone());
                    }
                }
            }
            DatasetRow { labels, ..row.clone() }
        })
        .collect();
    (out, warnings)
}

/// `labels` plus all their ancestors.
pub fn expand_ancestors(labels: &BTreeSet<String>, dubt: &Dubt) -> Result<BTreeSet<String>, String> {
    let mut out = BTreeSet::new();
    for label in labels {
        let closure = dubt.ancestor_closure(label).map_err(|_| label.clone())?;
        out.extend(closure.into_iter().map(String::from));
    }
    Ok(out)
}

/// Labels with no labeled descendant in the same set.
pub fn leaf_most<'a>(labels: &'a BTreeSet<String>, dubt: &Dubt) -> Vec<&'a str> {
    labels
        .iter()
        .filter(|l| !labels.iter().any(|other| other != *l && dubt.is_ancestor_or_self(l, other)))
        .map(String::as_str)
        .collect()
}

/// Labels sorted by their position in `dubt`, unknown names last.
pub fn in_tree_order<'a, I>(labels: I, dubt: &Dubt) -> Vec<&'a str>
where
    I: IntoIterator<Item = &'a String>,
{
    let mut out: Vec<&str> = labels.into_iter().map(String::as_str).collect();
    out.sort_by_key(|l| (dubt.order_of(l).unwrap_or(usize::MAX), *l));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::transform::build_dubt;
    use alloc::vec;

    #[test]
    fn preprocessing_actions() {
        let forest = fixtures::doppler_ultrasound();
        let dubt = build_dubt(&forest).unwrap();
        let rows = vec![
            DatasetRow::new("1", ["us"]),
            DatasetRow::new("2", ["doppler_ultrasound"]),
            DatasetRow::new("3", ["roentgenogram", "x_ray"]),
            DatasetRow::new("4", ["ct", "sonar"]),
        ];
        let (out, warnings) = apply_preprocessing(&rows, &forest.preprocessing_rules, &dubt);
        let labels: Vec<Vec<&str>> = out.iter().map(|r| r.labels.iter().map(String::as_str).collect()).collect();
        assert_eq!(labels, vec![vec!["ultrasound"], vec!["doppler", "ultrasound"], vec!["x_ray"], vec!["ct", "sonar"]]);
        assert_eq!(warnings, vec![PreprocessWarning { instance_id: "4".into(), label: "sonar".into() }]);
    }

    #[test]
    fn leaf_most_labels() {
        let dubt = build_dubt(&fixtures::multicare()).unwrap();
        let labels: BTreeSet<String> =
            ["radiology", "ultrasound", "echocardiogram", "angiography"].map(String::from).into();
        assert_eq!(leaf_most(&labels, &dubt), vec!["angiography", "echocardiogram"]);
        assert_eq!(in_tree_order(&labels, &dubt), vec!["radiology", "ultrasound", "echocardiogram", "angiography"]);
    }
}
