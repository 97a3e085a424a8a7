use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::{expand_ancestors, DatasetError, DatasetRow};
use crate::name::ROOT;
use crate::taxonomy::Dubt;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CleaningReport {
    pub rows_total: usize,
    /// Rows that lost at least one label.
    pub rows_affected: usize,
    /// `(instance_id, class)` for every label dropped, implied ones included.
    pub removed_labels: Vec<(String, String)>,
    /// `(instance_id, class)` for ancestors that were only implied and survived.
    pub retained_ancestors: Vec<(String, String)>,
    /// Rows left without any label.
    pub emptied: Vec<String>,
}

impl CleaningReport {
    pub fn affected_rate(&self) -> f64 {
        if self.rows_total == 0 {
            0.0
        } else {
            self.rows_affected as f64 / self.rows_total as f64
        }
    }

    /// Folds another partition's report into this one.
    pub fn merge(&mut self, other: CleaningReport) {
        self.rows_total += other.rows_total;
        self.rows_affected += other.rows_affected;
        self.removed_labels.extend(other.removed_labels);
        self.retained_ancestors.extend(other.retained_ancestors);
        self.emptied.extend(other.emptied);
    }
}

/// Makes every row consistent: labels are expanded to their ancestors, then
/// any disjoint-union group holding two or more labels loses all of them
/// together with their subtrees, until no such group is left.
pub fn clean_labels(rows: &[DatasetRow], dubt: &Dubt) -> Result<(Vec<DatasetRow>, CleaningReport), DatasetError> {
    let mut report = CleaningReport { rows_total: rows.len(), ..Default::default() };
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut labels = expand_ancestors(&row.labels, dubt)
            .map_err(|class| DatasetError::UnknownClass { instance_id: row.instance_id.clone(), class })?;
        let expanded = labels.clone();
        loop {
            let doomed = conflicting(&labels, dubt);
            if doomed.is_empty() {
                break;
            }
            labels.retain(|l| !doomed.iter().any(|d| dubt.is_ancestor_or_self(d, l)));
        }
        let removed: Vec<&String> = expanded.difference(&labels).collect();
        if !removed.is_empty() {
            report.rows_affected += 1;
            report.removed_labels.extend(removed.into_iter().map(|l| (row.instance_id.clone(), l.clone())));
        }
        for label in labels.difference(&row.labels) {
            report.retained_ancestors.push((row.instance_id.clone(), label.clone()));
        }
        if labels.is_empty() {
            report.emptied.push(row.instance_id.clone());
        }
        out.push(DatasetRow { labels, ..row.clone() });
    }
    Ok((out, report))
}

/// Labels sharing a disjoint-union group with another label of the set.
fn conflicting(labels: &BTreeSet<String>, dubt: &Dubt) -> Vec<String> {
    let mut doomed = Vec::new();
    for group in dubt.groups() {
        let present: Vec<&String> = group.members.iter().filter(|m| labels.contains(*m)).collect();
        if present.len() > 1 {
            doomed.extend(present.into_iter().cloned());
        }
    }
    doomed
}

/// For each listed exclusion class `e` with parent `p` and group `G`: every
/// row labeled `p` (or any row, when `p` is the root) that has no label of
/// `G` gains `e`.
pub fn impute_exclusions(
    rows: &[DatasetRow],
    dubt: &Dubt,
    exclusion_classes: &[&str],
) -> Result<Vec<DatasetRow>, DatasetError> {
    let mut targets = Vec::with_capacity(exclusion_classes.len());
    for name in exclusion_classes {
        let node = dubt.node(name).filter(|n| n.kind.is_exclusion());
        let node = node.ok_or_else(|| DatasetError::NotAnExclusionClass(String::from(*name)))?;
        let group = dubt.group(&node.group).expect("node group exists");
        targets.push((dubt.order_of(name).unwrap_or(usize::MAX), node, group));
    }
    // Parents before children, so an imputed class can enable a deeper one.
    targets.sort_by_key(|t| t.0);
    let mut out = rows.to_vec();
    for row in &mut out {
        for (_, node, group) in &targets {
            let reached = node.parent == ROOT || row.labels.iter().any(|l| dubt.is_ancestor_or_self(&node.parent, l));
            if reached && !group.members.iter().any(|m| row.labels.contains(m)) {
                row.labels.insert(node.name.clone());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::transform::build_dubt;
    use alloc::vec;

    fn set(labels: &[&str]) -> BTreeSet<String> {
        labels.iter().map(|s| String::from(*s)).collect()
    }

    fn clean_one(labels: &[&str]) -> BTreeSet<String> {
        let dubt = build_dubt(&fixtures::multicare()).unwrap();
        let (rows, _) = clean_labels(&[DatasetRow::new("r", labels.iter().copied())], &dubt).unwrap();
        rows[0].labels.clone()
    }

    #[test]
    fn radiology_cleaning_examples() {
        assert_eq!(clean_one(&["radiology", "ultrasound", "x_ray"]), set(&["radiology"]));
        assert_eq!(clean_one(&["ct", "mri"]), set(&["radiology"]));
        assert_eq!(clean_one(&["ct", "angiography"]), set(&["radiology", "ct", "angiography"]));
        assert_eq!(clean_one(&["echocardiogram", "x_ray", "angiography"]), set(&["radiology", "angiography"]));
        assert_eq!(clean_one(&["gram", "ct"]), set(&[]));
    }

    #[test]
    fn report_contents() {
        let dubt = build_dubt(&fixtures::multicare()).unwrap();
        let rows = vec![
            DatasetRow::new("a", ["ct", "mri"]),
            DatasetRow::new("b", ["ct"]),
            DatasetRow::new("c", ["gram", "ct"]),
        ];
        let (_, report) = clean_labels(&rows, &dubt).unwrap();
        assert_eq!(report.rows_total, 3);
        assert_eq!(report.rows_affected, 2);
        assert_eq!(report.emptied, vec!["c"]);
        assert!(report.removed_labels.contains(&("a".into(), "mri".into())));
        assert!(report.retained_ancestors.contains(&("a".into(), "radiology".into())));
        assert!(report.retained_ancestors.contains(&("b".into(), "radiology".into())));
        let err = clean_labels(&[DatasetRow::new("z", ["sonar"])], &dubt).unwrap_err();
        assert_eq!(err, DatasetError::UnknownClass { instance_id: "z".into(), class: "sonar".into() });
    }

    #[test]
    fn imputation() {
        let dubt = build_dubt(&fixtures::image_modality()).unwrap();
        let rows = vec![
            DatasetRow::new("1", ["ultrasound", "echocardiogram"]),
            DatasetRow::new("2", ["x_ray"]),
            DatasetRow::new("3", ["ultrasound", "doppler"]),
        ];
        let out = impute_exclusions(&rows, &dubt, &["no_doppler"]).unwrap();
        assert_eq!(out[0].labels, set(&["ultrasound", "echocardiogram", "no_doppler"]));
        assert_eq!(out[1], rows[1]);
        assert_eq!(out[2], rows[2]);
        assert_eq!(impute_exclusions(&out, &dubt, &["no_doppler"]).unwrap(), out);
        assert_eq!(
            impute_exclusions(&rows, &dubt, &["doppler"]),
            Err(DatasetError::NotAnExclusionClass("doppler".into()))
        );
    }
}
