use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::forest::DecisionRainforest;
use super::validate::{validate_rainforest, ValidationError};

/// One classification task handled by a submodel.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Task {
    pub bct: String,
    pub classes: Vec<String>,
}

/// A model of the ensemble: every BCT sharing one conditioning class.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Submodel {
    pub id: String,
    /// Conditioning class, `root_class` for the entry model.
    pub conditioning: String,
    pub tasks: Vec<Task>,
}

impl Submodel {
    pub fn is_multitask(&self) -> bool {
        self.tasks.len() > 1
    }

    pub fn bct_ids(&self) -> impl Iterator<Item = &str> {
        self.tasks.iter().map(|t| t.bct.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ModelPlan {
    pub submodels: Vec<Submodel>,
    /// Predicted class -> models that run when it is predicted.
    pub topology: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("rainforest is invalid ({} errors)", .0.len())]
    InvalidForest(Vec<ValidationError>),
}

/// Id of the submodel conditioned by `class`.
pub fn model_id(class: &str) -> String {
    let mut id = String::from("model_");
    id.push_str(class);
    id
}

impl ModelPlan {
    pub fn submodel(&self, id: &str) -> Option<&Submodel> {
        self.submodels.iter().find(|m| m.id == id)
    }

    pub fn entry(&self) -> Option<&Submodel> {
        self.submodels.first()
    }

    pub fn downstream(&self, class: &str) -> &[String] {
        self.topology.get(class).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn submodel_of_bct(&self, bct: &str) -> Option<&Submodel> {
        self.submodels.iter().find(|m| m.tasks.iter().any(|t| t.bct == bct))
    }
}

/// Groups BCTs by conditioning class into submodels. The entry model
/// (conditioned by the root) comes first, then models in the order their
/// conditioning classes appear in the rainforest.
pub fn compute_model_plan(forest: &DecisionRainforest) -> Result<ModelPlan, PlanError> {
    let errors = validate_rainforest(forest);
    if !errors.is_empty() {
        return Err(PlanError::InvalidForest(errors));
    }
    let bcts = forest.bcts();
    let mut order: Vec<&str> = Vec::new();
    let mut grouped: BTreeMap<&str, Vec<Task>> = BTreeMap::new();
    for b in &bcts {
        if !grouped.contains_key(b.conditioning) {
            order.push(b.conditioning);
        }
        grouped
            .entry(b.conditioning)
            .or_default()
            .push(Task { bct: b.bct.id.clone(), classes: b.bct.classes.iter().map(|c| c.name.clone()).collect() });
    }
    // Entry model first, then conditioning classes in class declaration order.
    let class_pos: BTreeMap<&str, usize> =
        forest.classes().iter().enumerate().map(|(i, (c, _))| (c.name.as_str(), i)).collect();
    order.sort_by_key(|c| class_pos.get(c).map_or(0, |p| p + 1));

    let mut submodels = Vec::with_capacity(order.len());
    let mut topology = BTreeMap::new();
    for cond in order {
        let id = model_id(cond);
        let tasks = grouped.remove(cond).unwrap_or_default();
        if class_pos.contains_key(cond) {
            topology.insert(String::from(cond), alloc::vec![id.clone()]);
        }
        submodels.push(Submodel { id, conditioning: String::from(cond), tasks });
    }
    Ok(ModelPlan { submodels, topology })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::taxonomy::forest::{Bct, Tree, TreeRole};
    use alloc::vec;

    #[test]
    fn multicare_has_one_multitask_model() {
        let plan = compute_model_plan(&fixtures::multicare()).unwrap();
        assert_eq!(plan.submodels.len(), 6);
        let multi: Vec<_> = plan.submodels.iter().filter(|m| m.is_multitask()).collect();
        assert_eq!(multi.len(), 1);
        assert_eq!(multi[0].conditioning, "radiology");
        assert_eq!(multi[0].tasks.len(), 2);
        assert_eq!(plan.entry().unwrap().id, "model_root_class");
        assert_eq!(plan.downstream("radiology"), [String::from("model_radiology")]);
        assert!(plan.downstream("ct").is_empty());
    }

    #[test]
    fn hyperkvasir_all_single_task() {
        let plan = compute_model_plan(&fixtures::hyperkvasir()).unwrap();
        assert_eq!(plan.submodels.len(), 6);
        assert!(plan.submodels.iter().all(|m| !m.is_multitask()));
        let mut sizes: Vec<usize> = plan.submodels.iter().map(|m| m.tasks[0].classes.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn single_bct_forest() {
        let forest = DecisionRainforest {
            trees: vec![Tree::new("spam", Bct::of("spam", ["spam", "nonspam"]), TreeRole::Main)],
            ..Default::default()
        };
        // tree and class share a name here, which the validator rejects
        assert!(compute_model_plan(&forest).is_err());
        let forest = DecisionRainforest {
            trees: vec![Tree::new("mail", Bct::of("mail", ["spam", "nonspam"]), TreeRole::Main)],
            ..Default::default()
        };
        let plan = compute_model_plan(&forest).unwrap();
        assert_eq!(plan.submodels.len(), 1);
        assert!(plan.topology.is_empty());
    }

    #[test]
    fn every_bct_in_exactly_one_model() {
        for forest in
            [fixtures::multicare(), fixtures::hyperkvasir(), fixtures::pneumonia(), fixtures::image_modality()]
        {
            let plan = compute_model_plan(&forest).unwrap();
            let mut planned: Vec<&str> = plan.submodels.iter().flat_map(|m| m.bct_ids()).collect();
            let mut declared: Vec<&str> = forest.bcts().iter().map(|b| b.bct.id.as_str()).collect();
            planned.sort();
            declared.sort();
            assert_eq!(planned, declared);
            let mut conds: Vec<&str> = forest.bcts().iter().map(|b| b.conditioning).collect();
            conds.sort();
            conds.dedup();
            assert_eq!(plan.submodels.len(), conds.len());
        }
    }
}
