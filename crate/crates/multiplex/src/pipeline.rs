//! Steps shared by the subcommands: compiling a taxonomy and turning raw
//! annotations into reference label sets.

use multiplex_core::dataset::{
    apply_preprocessing, clean_labels, CleaningReport, DatasetError, DatasetRow, PreprocessWarning,
};
use multiplex_core::taxonomy::{
    compute_model_plan, validate_rainforest, DecisionRainforest, Dubt, ModelPlan, ValidationError,
};
use multiplex_core::transform::{build_dubt, insert_exclusion_classes};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("taxonomy has {} validation error(s)", .0.len())]
    Invalid(Vec<ValidationError>),
    #[error(transparent)]
    Transform(#[from] multiplex_core::transform::TransformError),
    #[error(transparent)]
    Plan(#[from] multiplex_core::taxonomy::PlanError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

/// A validated taxonomy with exclusion classes in place, its compiled tree
/// and its submodel plan.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub forest: DecisionRainforest,
    pub dubt: Dubt,
    pub plan: ModelPlan,
}

pub fn compile(forest: &DecisionRainforest) -> Result<Compiled, PipelineError> {
    let errors = validate_rainforest(forest);
    if !errors.is_empty() {
        return Err(PipelineError::Invalid(errors));
    }
    let forest = insert_exclusion_classes(forest);
    let dubt = build_dubt(&forest)?;
    let plan = compute_model_plan(&forest)?;
    Ok(Compiled { forest, dubt, plan })
}

#[derive(Debug, Clone)]
pub struct Reference {
    pub rows: Vec<DatasetRow>,
    /// Labels neither mapped by a rule nor known to the taxonomy; dropped.
    pub warnings: Vec<PreprocessWarning>,
    pub report: CleaningReport,
}

/// Preprocessing, removal of unknown labels, then cleaning.
pub fn reference_labels(rows: &[DatasetRow], compiled: &Compiled) -> Result<Reference, PipelineError> {
    let (mut rows, warnings) = apply_preprocessing(rows, &compiled.forest.preprocessing_rules, &compiled.dubt);
    for row in &mut rows {
        row.labels.retain(|l| compiled.dubt.contains(l));
    }
    let (rows, report) = clean_labels(&rows, &compiled.dubt)?;
    Ok(Reference { rows, warnings, report })
}
