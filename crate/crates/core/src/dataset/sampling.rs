use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::{leaf_most, DatasetError, DatasetRow};
use crate::taxonomy::Dubt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(rename_all = "snake_case"))]
pub enum SamplingMode {
    /// Every row once per epoch.
    #[default]
    Normal,
    /// Inverse frequency of the row's leaf-most labels.
    Optimized,
}

/// Per-row sampling weights.
///
/// In optimized mode each leaf-most class `c` weighs `N / (K * count(c))`,
/// where `N` is the row count and `K` the number of distinct leaf-most
/// classes; a row takes the mean weight of its leaf-most labels (1 when it
/// has none) and the result is rescaled so the weights sum to `N`.
pub fn sampling_weights(
    rows: &[DatasetRow],
    dubt: &Dubt,
    mode: SamplingMode,
) -> Result<BTreeMap<String, f64>, DatasetError> {
    if rows.is_empty() {
        return Err(DatasetError::EmptyDataset);
    }
    if mode == SamplingMode::Normal {
        return Ok(rows.iter().map(|r| (r.instance_id.clone(), 1.0)).collect());
    }
    let leaves: Vec<Vec<&str>> = rows.iter().map(|r| leaf_most(&r.labels, dubt)).collect();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for row in &leaves {
        for class in row {
            *counts.entry(class).or_default() += 1;
        }
    }
    let n = rows.len() as f64;
    let k = counts.len().max(1) as f64;
    let raw: Vec<f64> = leaves
        .iter()
        .map(|row| {
            if row.is_empty() {
                1.0
            } else {
                row.iter().map(|c| n / (k * counts[c] as f64)).sum::<f64>() / row.len() as f64
            }
        })
        .collect();
    let scale = n / raw.iter().sum::<f64>();
    Ok(rows.iter().zip(raw).map(|(r, w)| (r.instance_id.clone(), w * scale)).collect())
}
