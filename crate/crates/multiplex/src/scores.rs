//! File-backed classifier reading precomputed confidences.
//!
//! The CSV has the columns `instance_id, submodel_id, bct_id, class,
//! confidence`; one row per scored class.

use std::collections::BTreeMap;

use multiplex_core::ensemble::{Classifier, ClassifierError, Instance, TaskScores};
use multiplex_core::taxonomy::Submodel;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
struct ScoreRow {
    instance_id: String,
    submodel_id: String,
    bct_id: String,
    class: String,
    confidence: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum ScoresError {
    #[error("scores file: {0}")]
    Csv(#[from] csv::Error),
    #[error("scores file row {row}: `{class}` scored twice")]
    Duplicate { row: usize, class: String },
}

#[derive(Debug, Clone, Default)]
pub struct ScoresFileClassifier {
    scores: BTreeMap<(String, String), TaskScores>,
}

impl ScoresFileClassifier {
    pub fn parse(text: &str) -> Result<Self, ScoresError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut scores: BTreeMap<(String, String), TaskScores> = BTreeMap::new();
        for (row, record) in reader.deserialize::<ScoreRow>().enumerate() {
            let r = record?;
            let task = scores.entry((r.instance_id, r.submodel_id)).or_default().entry(r.bct_id).or_default();
            if task.insert(r.class.clone(), r.confidence).is_some() {
                return Err(ScoresError::Duplicate { row, class: r.class });
            }
        }
        Ok(ScoresFileClassifier { scores })
    }
}

impl Classifier for ScoresFileClassifier {
    fn predict(&self, instance: &Instance, submodel: &Submodel) -> Result<TaskScores, ClassifierError> {
        let key = (instance.id.clone(), submodel.id.clone());
        self.scores
            .get(&key)
            .cloned()
            .ok_or_else(|| ClassifierError(format!("no scores for `{}` in `{}`", instance.id, submodel.id)))
    }
}
