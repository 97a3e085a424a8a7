//! Cascaded inference over pluggable classifiers, compound reintroduction
//! and the confidence-ordered postprocessor for flat multi-label output.

mod cascade;
mod classifiers;
mod resolve;

use alloc::collections::BTreeMap;
use alloc::string::String;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::taxonomy::Submodel;

pub use cascade::{cascade_infer, flat_infer, flat_submodel, PredictionStep, PredictionTrace};
pub use classifiers::{NoisyLabelOracle, NoisyOracle, OracleClassifier, PriorClassifier, Truth};
pub use resolve::{reintroduce_compounds, resolve_constraints};

/// Per BCT id, the confidence in `[0, 1]` of each of its classes.
pub type TaskScores = BTreeMap<String, BTreeMap<String, f64>>;

/// What a classifier sees of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Instance {
    pub id: String,
    /// Opaque payload, for instance an image path.
    pub features: String,
}

impl Instance {
    pub fn new(id: impl Into<String>) -> Self {
        Instance { id: id.into(), features: String::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ClassifierError(pub String);

/// A scorer for the submodels of an ensemble.
///
/// Implementations return a score for every class of every task of
/// `submodel`, must be deterministic for a given instance and submodel, and
/// must be safe to call from several threads at once.
pub trait Classifier {
    fn predict(&self, instance: &Instance, submodel: &Submodel) -> Result<TaskScores, ClassifierError>;
}

impl<C: Classifier + ?Sized> Classifier for &C {
    fn predict(&self, instance: &Instance, submodel: &Submodel) -> Result<TaskScores, ClassifierError> {
        (**self).predict(instance, submodel)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InferenceError {
    #[error("classifier failed on `{submodel}`: {source}")]
    ClassifierFailure { submodel: String, source: ClassifierError },
    #[error("scores of `{submodel}` for BCT `{bct}`: {reason}")]
    InconsistentScores { submodel: String, bct: String, reason: String },
    #[error("the model plan has no entry model")]
    EmptyPlan,
}
