use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::{in_tree_order, DatasetError, DatasetRow};
use crate::taxonomy::{Dubt, ModelPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(rename_all = "snake_case"))]
pub enum PreparedFormat {
    /// One column per submodel of the ensemble.
    Multiplex,
    /// One column per BCT.
    MultiplexWithoutMerging,
    /// A single `label_list` column.
    Multilabel,
}

impl PreparedFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            PreparedFormat::Multiplex => "multiplex",
            PreparedFormat::MultiplexWithoutMerging => "multiplex_without_merging",
            PreparedFormat::Multilabel => "multilabel",
        }
    }
}

impl fmt::Display for PreparedFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PreparedFormat {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "multiplex" => Ok(PreparedFormat::Multiplex),
            "multiplex_without_merging" => Ok(PreparedFormat::MultiplexWithoutMerging),
            "multilabel" => Ok(PreparedFormat::Multilabel),
            other => Err(DatasetError::InvalidFormat(String::from(other))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PreparedColumn {
    pub id: String,
    /// One list of labels per row.
    pub cells: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PreparedDataset {
    pub format: PreparedFormat,
    pub instance_ids: Vec<String>,
    pub columns: Vec<PreparedColumn>,
}

/// Lays the rows out in one of the three training formats. Cells of
/// multitask submodels carry one label per task, in task order.
pub fn emit_prepared(
    rows: &[DatasetRow],
    dubt: &Dubt,
    plan: &ModelPlan,
    format: PreparedFormat,
) -> Result<PreparedDataset, DatasetError> {
    for row in rows {
        if let Some(class) = row.labels.iter().find(|l| !dubt.contains(l)) {
            return Err(DatasetError::UnknownClass { instance_id: row.instance_id.clone(), class: class.clone() });
        }
    }
    let task_cell = |row: &DatasetRow, bct: &str| -> Option<String> {
        dubt.group(bct)?.members.iter().find(|m| row.labels.contains(*m)).cloned()
    };
    let columns = match format {
        PreparedFormat::Multiplex => plan
            .submodels
            .iter()
            .map(|model| PreparedColumn {
                id: model.id.clone(),
                cells: rows.iter().map(|row| model.bct_ids().filter_map(|b| task_cell(row, b)).collect()).collect(),
            })
            .collect(),
        PreparedFormat::MultiplexWithoutMerging => plan
            .submodels
            .iter()
            .flat_map(|model| model.bct_ids())
            .map(|bct| PreparedColumn {
                id: String::from(bct),
                cells: rows.iter().map(|row| task_cell(row, bct).into_iter().collect()).collect(),
            })
            .collect(),
        PreparedFormat::Multilabel => alloc::vec![PreparedColumn {
            id: String::from("label_list"),
            cells: rows
                .iter()
                .map(|row| in_tree_order(&row.labels, dubt).into_iter().map(String::from).collect())
                .collect(),
        }],
    };
    Ok(PreparedDataset { format, instance_ids: rows.iter().map(|r| r.instance_id.clone()).collect(), columns })
}
