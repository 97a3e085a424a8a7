use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::{DatasetError, DatasetRow};

/// Row indices of each side of a split.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Shuffles whole groups (rows without `group_id` form their own group) and
/// moves them to the test side until it holds at least
/// `test_fraction` of the rows.
pub fn grouped_split(rows: &[DatasetRow], test_fraction: f64, seed: u64) -> Result<Split, DatasetError> {
    if !(0.0..=1.0).contains(&test_fraction) {
        return Err(DatasetError::InvalidFraction(test_fraction));
    }
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        let key = row.group_id.as_deref().unwrap_or(&row.instance_id);
        groups.entry(key).or_default().push(i);
    }
    let mut order: Vec<Vec<usize>> = groups.into_values().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let exact = test_fraction * rows.len() as f64;
    let mut wanted = exact as usize;
    if (wanted as f64) < exact {
        wanted += 1;
    }
    let mut split = Split::default();
    for members in order {
        if split.test.len() < wanted {
            split.test.extend(members);
        } else {
            split.train.extend(members);
        }
    }
    split.train.sort_unstable();
    split.test.sort_unstable();
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn groups_stay_together() {
        let rows: Vec<DatasetRow> = (0..100)
            .map(|i| DatasetRow { group_id: Some(format!("case{}", i / 4)), ..DatasetRow::new(format!("{i}"), ["x"]) })
            .collect();
        let split = grouped_split(&rows, 0.2, 7).unwrap();
        assert_eq!(split.test.len(), 20);
        assert_eq!(split.train.len() + split.test.len(), 100);
        for i in &split.test {
            for j in &split.train {
                assert_ne!(rows[*i].group_id, rows[*j].group_id);
            }
        }
        assert_eq!(grouped_split(&rows, 0.2, 7).unwrap(), split);
        assert_ne!(grouped_split(&rows, 0.2, 8).unwrap(), split);
        assert!(grouped_split(&rows, 1.5, 7).is_err());
    }
}
