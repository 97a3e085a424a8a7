use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::{reintroduce_compounds, resolve_constraints, Classifier, InferenceError, Instance, TaskScores};
use crate::name::ROOT;
use crate::taxonomy::{Dubt, ModelPlan, Submodel, Task};

/// One submodel evaluation: the winning class of each of its tasks.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PredictionStep {
    pub submodel: String,
    /// `(bct id, class)` in task order.
    pub chosen: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PredictionTrace {
    pub instance_id: String,
    pub steps: Vec<PredictionStep>,
    /// Chosen classes, their ancestors and reintroduced compound classes.
    pub final_labels: BTreeSet<String>,
}

/// Runs the ensemble from the entry model down: each task keeps its argmax
/// class (ties go to the lexicographically smaller name) and every model
/// conditioned by a chosen class runs next. Branches that were not chosen
/// are never evaluated.
pub fn cascade_infer<C: Classifier + ?Sized>(
    instance: &Instance,
    plan: &ModelPlan,
    classifier: &C,
    dubt: &Dubt,
) -> Result<PredictionTrace, InferenceError> {
    let entry = plan.entry().ok_or(InferenceError::EmptyPlan)?;
    let mut queue: VecDeque<&Submodel> = VecDeque::from([entry]);
    let mut visited: BTreeSet<&str> = BTreeSet::from([entry.id.as_str()]);
    let mut steps = Vec::new();
    let mut labels = BTreeSet::new();
    while let Some(model) = queue.pop_front() {
        let scores = classifier
            .predict(instance, model)
            .map_err(|source| InferenceError::ClassifierFailure { submodel: model.id.clone(), source })?;
        let mut chosen = Vec::with_capacity(model.tasks.len());
        for task in &model.tasks {
            let class = argmax(&model.id, task, &scores)?;
            for next in plan.downstream(class) {
                if let Some(next) = plan.submodel(next) {
                    if visited.insert(next.id.as_str()) {
                        queue.push_back(next);
                    }
                }
            }
            if let Ok(closure) = dubt.ancestor_closure(class) {
                labels.extend(closure.into_iter().map(String::from));
            }
            chosen.push((task.bct.clone(), String::from(class)));
        }
        steps.push(PredictionStep { submodel: model.id.clone(), chosen });
    }
    let final_labels = reintroduce_compounds(&labels, &dubt.compound_rules());
    Ok(PredictionTrace { instance_id: instance.id.clone(), steps, final_labels })
}

fn argmax<'a>(model: &str, task: &'a Task, scores: &TaskScores) -> Result<&'a str, InferenceError> {
    let fail = |reason: String| InferenceError::InconsistentScores {
        submodel: String::from(model),
        bct: task.bct.clone(),
        reason,
    };
    let row = scores.get(&task.bct).ok_or_else(|| fail(String::from("no scores for this task")))?;
    if let Some(extra) = row.keys().find(|k| !task.classes.contains(k)) {
        return Err(fail(format!("unexpected class `{extra}`")));
    }
    let mut best: Option<(&str, f64)> = None;
    for class in &task.classes {
        let score = *row.get(class).ok_or_else(|| fail(format!("missing class `{class}`")))?;
        if !(0.0..=1.0).contains(&score) {
            return Err(fail(format!("score {score} of `{class}` is outside [0, 1]")));
        }
        best = match best {
            Some((b, s)) if s > score || (s == score && b < class.as_str()) => Some((b, s)),
            _ => Some((class.as_str(), score)),
        };
    }
    best.map(|(c, _)| c).ok_or_else(|| fail(String::from("task has no classes")))
}

/// A single model holding every task of `plan`, the shape of a
/// conventional flat multi-label classifier.
pub fn flat_submodel(plan: &ModelPlan) -> Submodel {
    Submodel {
        id: String::from("model_flat"),
        conditioning: String::from(ROOT),
        tasks: plan.submodels.iter().flat_map(|m| m.tasks.iter().cloned()).collect(),
    }
}

/// Scores every class at once with `flat` and repairs the result with
/// [`resolve_constraints`], then reintroduces compound classes.
pub fn flat_infer<C: Classifier + ?Sized>(
    instance: &Instance,
    flat: &Submodel,
    classifier: &C,
    dubt: &Dubt,
) -> Result<BTreeSet<String>, InferenceError> {
    let scores = classifier
        .predict(instance, flat)
        .map_err(|source| InferenceError::ClassifierFailure { submodel: flat.id.clone(), source })?;
    let mut scored = Vec::new();
    for task in &flat.tasks {
        argmax(&flat.id, task, &scores)?;
        scored.extend(task.classes.iter().map(|c| (c.clone(), scores[&task.bct][c])));
    }
    let labels = resolve_constraints(&scored, dubt).map_err(|e| InferenceError::InconsistentScores {
        submodel: flat.id.clone(),
        bct: String::new(),
        reason: format!("{e}"),
    })?;
    Ok(reintroduce_compounds(&labels, &dubt.compound_rules()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{ClassifierError, OracleClassifier};
    use crate::fixtures;
    use crate::taxonomy::compute_model_plan;
    use crate::transform::build_dubt;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    /// Fixed winners per task, uniform low scores elsewhere.
    struct Scripted(Vec<&'static str>);

    impl Classifier for Scripted {
        fn predict(&self, _: &Instance, submodel: &Submodel) -> Result<TaskScores, ClassifierError> {
            Ok(submodel
                .tasks
                .iter()
                .map(|t| {
                    let row = t
                        .classes
                        .iter()
                        .map(|c| (c.clone(), if self.0.contains(&c.as_str()) { 0.9 } else { 0.05 }))
                        .collect();
                    (t.bct.clone(), row)
                })
                .collect())
        }
    }

    fn set(labels: &[&str]) -> BTreeSet<String> {
        labels.iter().map(|s| String::from(*s)).collect()
    }

    #[test]
    fn stops_at_leaf() {
        let forest = fixtures::image_modality();
        let (plan, dubt) = (compute_model_plan(&forest).unwrap(), build_dubt(&forest).unwrap());
        let trace = cascade_infer(&Instance::new("i"), &plan, &Scripted(vec!["x_ray"]), &dubt).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.final_labels, set(&["x_ray"]));
    }

    #[test]
    fn diverges_into_multitask_model() {
        let forest = fixtures::image_modality();
        let (plan, dubt) = (compute_model_plan(&forest).unwrap(), build_dubt(&forest).unwrap());
        let classifier = Scripted(vec!["ultrasound", "echocardiogram", "doppler"]);
        let trace = cascade_infer(&Instance::new("i"), &plan, &classifier, &dubt).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[1].submodel, "model_ultrasound");
        assert_eq!(trace.steps[1].chosen.len(), 2);
        assert_eq!(trace.final_labels, set(&["ultrasound", "echocardiogram", "doppler"]));
    }

    #[test]
    fn compounds_come_back() {
        let forest = fixtures::doppler_ultrasound();
        let (plan, dubt) = (compute_model_plan(&forest).unwrap(), build_dubt(&forest).unwrap());
        let trace = cascade_infer(&Instance::new("i"), &plan, &Scripted(vec!["ultrasound", "doppler"]), &dubt).unwrap();
        assert_eq!(trace.final_labels, set(&["ultrasound", "doppler", "doppler_ultrasound"]));
    }

    #[test]
    fn bad_scores_are_reported() {
        struct Partial;
        impl Classifier for Partial {
            fn predict(&self, _: &Instance, submodel: &Submodel) -> Result<TaskScores, ClassifierError> {
                let task = &submodel.tasks[0];
                Ok(BTreeMap::from([(task.bct.clone(), BTreeMap::from([(task.classes[0].clone(), 1.0)]))]))
            }
        }
        let forest = fixtures::image_modality();
        let (plan, dubt) = (compute_model_plan(&forest).unwrap(), build_dubt(&forest).unwrap());
        let err = cascade_infer(&Instance::new("i"), &plan, &Partial, &dubt).unwrap_err();
        assert!(matches!(err, InferenceError::InconsistentScores { .. }));
        let oracle = OracleClassifier::new(BTreeMap::new());
        let err = cascade_infer(&Instance::new("i"), &plan, &oracle, &dubt).unwrap_err();
        assert!(matches!(err, InferenceError::ClassifierFailure { .. }));
    }

    #[test]
    fn ties_pick_smaller_name() {
        let forest = fixtures::image_modality();
        let (plan, dubt) = (compute_model_plan(&forest).unwrap(), build_dubt(&forest).unwrap());
        let trace = cascade_infer(&Instance::new("i"), &plan, &Scripted(vec!["mri", "ct_scan"]), &dubt).unwrap();
        assert_eq!(trace.final_labels, set(&["ct_scan"]));
    }

    #[test]
    fn flat_resolution() {
        let forest = fixtures::image_modality();
        let (plan, dubt) = (compute_model_plan(&forest).unwrap(), build_dubt(&forest).unwrap());
        let flat = flat_submodel(&plan);
        assert_eq!(flat.tasks.len(), 3);
        let labels = flat_infer(&Instance::new("i"), &flat, &Scripted(vec!["ultrasound", "doppler"]), &dubt).unwrap();
        assert!(labels.contains("ultrasound") && labels.contains("doppler"));
        assert!(dubt.find_conflict(labels.iter().map(String::as_str)).is_none());
    }
}
