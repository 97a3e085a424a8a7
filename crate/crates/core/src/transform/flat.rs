use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::builder::{binary_bct, ForestBuilder};
use super::{Naming, TransformError};
use crate::name::normalize;
use crate::taxonomy::{Bct, ClassKind, DecisionRainforest, Tree, TreeRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(rename_all = "snake_case"))]
pub enum FlatKind {
    Binary,
    Multiclass,
    Multilabel,
}

/// Binary, multiclass or multi-label problem over a flat class list.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FlatProblem {
    pub kind: FlatKind,
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HmcClass {
    pub class: String,
    /// `None` attaches the class to the root.
    #[cfg_attr(feature = "serde", serde(default))]
    pub parent: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HmcLevel {
    pub name: String,
    pub classes: Vec<HmcClass>,
}

/// Hierarchical multi-label problem, levels ordered top-down.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HmcProblem {
    pub levels: Vec<HmcLevel>,
}

const SINGLE_TREE: &str = "classification";

fn normalized_unique(classes: &[String]) -> Result<Vec<String>, TransformError> {
    let mut out: Vec<String> = Vec::with_capacity(classes.len());
    for raw in classes {
        let name = normalize(raw);
        if name.is_empty() {
            return Err(TransformError::InvalidProblem(format!("class `{raw}` normalizes to an empty name")));
        }
        if out.contains(&name) {
            return Err(TransformError::InvalidProblem(format!("class `{name}` is listed twice")));
        }
        out.push(name);
    }
    Ok(out)
}

/// Binary and multiclass problems become one BCT; multi-label problems one
/// binary `{label, no_label}` BCT per label (binary relevance), the first in
/// the main tree and the rest in subsidiary trees conditioned by the root.
pub fn transform_flat(problem: &FlatProblem) -> Result<DecisionRainforest, TransformError> {
    let classes = normalized_unique(&problem.classes)?;
    let (ok, expected) = match problem.kind {
        FlatKind::Binary => (classes.len() == 2, "exactly 2"),
        FlatKind::Multiclass => (classes.len() >= 3, "at least 3"),
        FlatKind::Multilabel => (classes.len() >= 2, "at least 2"),
    };
    if classes.is_empty() {
        return Err(TransformError::EmptyInput);
    }
    if !ok {
        return Err(TransformError::InvalidProblem(format!(
            "{:?} problem needs {expected} classes, got {}",
            problem.kind,
            classes.len()
        )));
    }
    match problem.kind {
        FlatKind::Binary | FlatKind::Multiclass => Ok(DecisionRainforest {
            trees: alloc::vec![Tree::new(SINGLE_TREE, Bct::of(SINGLE_TREE, classes), TreeRole::Main)],
            ..Default::default()
        }),
        FlatKind::Multilabel => {
            let naming = Naming::default();
            let mut builder = ForestBuilder::default();
            for class in &classes {
                builder.attach(None, binary_bct(class, ClassKind::Regular, &naming), false);
            }
            Ok(builder.finish())
        }
    }
}

/// Every class becomes a binary BCT conditioned by its parent. The first
/// child BCT of a parent stays in the parent's tree; siblings declared after
/// it open subsidiary trees.
pub fn transform_hierarchical(problem: &HmcProblem) -> Result<DecisionRainforest, TransformError> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut order: Vec<(String, Option<String>)> = Vec::new();
    for (depth, level) in problem.levels.iter().enumerate() {
        for entry in &level.classes {
            let class = normalize(&entry.class);
            if class.is_empty() {
                return Err(TransformError::InvalidProblem(format!("empty class name in level `{}`", level.name)));
            }
            if seen.contains_key(&class) {
                return Err(TransformError::InvalidProblem(format!("class `{class}` has more than one parent")));
            }
            let parent = match &entry.parent {
                None => None,
                Some(raw) if normalize(raw) == crate::name::ROOT => None,
                Some(raw) => {
                    let parent = normalize(raw);
                    match seen.get(&parent) {
                        Some(&d) if d < depth => Some(parent),
                        Some(_) => {
                            return Err(TransformError::InvalidProblem(format!(
                                "parent `{parent}` of `{class}` is not on an upper level"
                            )))
                        }
                        None => {
                            return Err(TransformError::InvalidProblem(format!(
                                "parent `{parent}` of `{class}` is not declared"
                            )))
                        }
                    }
                }
            };
            seen.insert(class.clone(), depth);
            order.push((class, parent));
        }
    }
    if order.is_empty() {
        return Err(TransformError::EmptyInput);
    }
    let naming = Naming::default();
    let mut builder = ForestBuilder::default();
    for (class, parent) in &order {
        builder.attach(parent.as_deref(), binary_bct(class, ClassKind::Regular, &naming), false);
    }
    Ok(builder.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::validate_rainforest;
    use alloc::vec;

    fn strings(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| String::from(*s)).collect()
    }

    #[test]
    fn multilabel_is_binary_relevance() {
        let forest = transform_flat(&FlatProblem {
            kind: FlatKind::Multilabel,
            classes: strings(&["doppler", "contrast", "metal_implant"]),
        })
        .unwrap();
        assert!(validate_rainforest(&forest).is_empty());
        let bcts = forest.bcts();
        assert_eq!(bcts.len(), 3);
        assert!(bcts.iter().all(|b| b.bct.classes.len() == 2 && b.conditioning == "root_class"));
        assert_eq!(forest.classes().len(), 6);
        assert!(forest.has_class("no_metal_implant"));
        assert_eq!(forest.trees[0].role, TreeRole::Main);
        assert_eq!(forest.subsidiary_relations.len(), 2);
    }

    #[test]
    fn binary_and_multiclass_are_single_bcts() {
        let forest =
            transform_flat(&FlatProblem { kind: FlatKind::Binary, classes: strings(&["spam", "nonspam"]) }).unwrap();
        assert_eq!(forest.bcts().len(), 1);
        assert_eq!(forest.trees[0].top_bct.class_names().collect::<Vec<_>>(), vec!["spam", "nonspam"]);

        let digits: Vec<String> = (0..10).map(|d| format!("digit_{d}")).collect();
        let forest = transform_flat(&FlatProblem { kind: FlatKind::Multiclass, classes: digits }).unwrap();
        assert_eq!(forest.bcts().len(), 1);
        assert_eq!(forest.bcts()[0].bct.classes.len(), 10);
    }

    #[test]
    fn flat_rejects_bad_arity() {
        let bad = FlatProblem { kind: FlatKind::Binary, classes: strings(&["a", "b", "c"]) };
        assert!(matches!(transform_flat(&bad), Err(TransformError::InvalidProblem(_))));
        let bad = FlatProblem { kind: FlatKind::Multiclass, classes: strings(&["a", "b"]) };
        assert!(matches!(transform_flat(&bad), Err(TransformError::InvalidProblem(_))));
        let dup = FlatProblem { kind: FlatKind::Multilabel, classes: strings(&["A", "a"]) };
        assert!(matches!(transform_flat(&dup), Err(TransformError::InvalidProblem(_))));
    }

    #[test]
    fn hmc_first_child_hierarchical_rest_subsidiary() {
        let problem = HmcProblem {
            levels: vec![
                HmcLevel {
                    name: "chapter".into(),
                    classes: vec![HmcClass { class: "resp_disease".into(), parent: None }],
                },
                HmcLevel {
                    name: "disease".into(),
                    classes: vec![
                        HmcClass { class: "asthma".into(), parent: Some("resp_disease".into()) },
                        HmcClass { class: "copd".into(), parent: Some("resp_disease".into()) },
                    ],
                },
            ],
        };
        let forest = transform_hierarchical(&problem).unwrap();
        assert!(validate_rainforest(&forest).is_empty());
        assert_eq!(forest.bcts().len(), 3);
        let resp = forest.class("resp_disease").unwrap();
        assert_eq!(resp.hierarchical_child.as_ref().unwrap().id, "attribute_asthma");
        assert_eq!(forest.subsidiary_trees_of("resp_disease").collect::<Vec<_>>(), vec!["attribute_copd"]);
    }

    #[test]
    fn single_level_hmc_equals_multilabel() {
        let labels = strings(&["doppler", "contrast", "metal_implant"]);
        let hmc = HmcProblem {
            levels: vec![HmcLevel {
                name: "labels".into(),
                classes: labels.iter().map(|c| HmcClass { class: c.clone(), parent: None }).collect(),
            }],
        };
        let flat = FlatProblem { kind: FlatKind::Multilabel, classes: labels };
        assert_eq!(transform_hierarchical(&hmc).unwrap(), transform_flat(&flat).unwrap());
    }

    #[test]
    fn hmc_rejects_forward_parent() {
        let problem = HmcProblem {
            levels: vec![HmcLevel {
                name: "l0".into(),
                classes: vec![
                    HmcClass { class: "a".into(), parent: None },
                    HmcClass { class: "b".into(), parent: Some("a".into()) },
                ],
            }],
        };
        assert!(matches!(transform_hierarchical(&problem), Err(TransformError::InvalidProblem(_))));
    }
}
