//! Structural checks over a decision rainforest.
//!
//! Five checks mirror the error classes a taxonomy author is expected to
//! hit: repeated names, empty trees, single-class BCTs, classes with more
//! than one parent and classes that are their own ancestor. The remaining
//! variants guard the integrity of references inside the document.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::Serialize;

use super::forest::{ClassKind, DecisionRainforest, TreeRole};
use crate::name::{is_identifier, NEGATIVE_PREFIX, RESIDUAL_PREFIX, ROOT};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, thiserror::Error)]
#[cfg_attr(feature = "serde", derive(Serialize), serde(tag = "kind", rename_all = "snake_case"))]
pub enum ValidationError {
    #[error("class name `{name}` is declared more than once")]
    RepeatedClassName { name: String },
    #[error("class tree `{tree}` is empty")]
    EmptyClassTree { tree: String },
    #[error("BCT `{bct}` has fewer than two classes")]
    SingleChildBct { bct: String },
    #[error("classes of tree `{tree}` have several parents: {parents:?}")]
    MultipleParents { tree: String, parents: Vec<String> },
    #[error("class `{class}` is its own ancestor through subsidiary relations")]
    RecursiveRelation { class: String },
    #[error("BCT id `{bct}` is used more than once")]
    RepeatedBctId { bct: String },
    #[error("tree `{tree}` is not attached to the main tree")]
    DetachedTree { tree: String },
    #[error("the rainforest has no main tree")]
    MissingMainTree,
    #[error("{referrer} references unknown `{name}`")]
    DanglingReference { referrer: String, name: String },
    #[error("rule for `{name}`: {reason}")]
    RuleConflict { name: String, reason: &'static str },
    #[error("`{name}` is not a valid identifier")]
    InvalidIdentifier { name: String },
    #[error("exclusion class `{class}` does not follow the no_/other_ naming convention")]
    InvalidExclusionName { class: String },
}

/// Discriminant of [`ValidationError`], handy for assertions and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValidationKind {
    RepeatedClassName,
    EmptyClassTree,
    SingleChildBct,
    MultipleParents,
    RecursiveRelation,
    RepeatedBctId,
    DetachedTree,
    MissingMainTree,
    DanglingReference,
    RuleConflict,
    InvalidIdentifier,
    InvalidExclusionName,
}

impl ValidationError {
    pub fn kind(&self) -> ValidationKind {
        match self {
            ValidationError::RepeatedClassName { .. } => ValidationKind::RepeatedClassName,
            ValidationError::EmptyClassTree { .. } => ValidationKind::EmptyClassTree,
            ValidationError::SingleChildBct { .. } => ValidationKind::SingleChildBct,
            ValidationError::MultipleParents { .. } => ValidationKind::MultipleParents,
            ValidationError::RecursiveRelation { .. } => ValidationKind::RecursiveRelation,
            ValidationError::RepeatedBctId { .. } => ValidationKind::RepeatedBctId,
            ValidationError::DetachedTree { .. } => ValidationKind::DetachedTree,
            ValidationError::MissingMainTree => ValidationKind::MissingMainTree,
            ValidationError::DanglingReference { .. } => ValidationKind::DanglingReference,
            ValidationError::RuleConflict { .. } => ValidationKind::RuleConflict,
            ValidationError::InvalidIdentifier { .. } => ValidationKind::InvalidIdentifier,
            ValidationError::InvalidExclusionName { .. } => ValidationKind::InvalidExclusionName,
        }
    }
}

/// Returns every violation found in `forest`, sorted. Empty means valid.
pub fn validate_rainforest(forest: &DecisionRainforest) -> Vec<ValidationError> {
    let mut errors = BTreeSet::new();

    if forest.trees.is_empty() {
        errors.insert(ValidationError::EmptyClassTree { tree: "taxonomy".to_string() });
        return errors.into_iter().collect();
    }

    // Class names and tree names share one namespace.
    let mut name_counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut bct_counts: BTreeMap<&str, usize> = BTreeMap::new();
    // class -> tree holding it (first occurrence)
    let mut class_tree: BTreeMap<&str, &str> = BTreeMap::new();
    for tree in &forest.trees {
        *name_counts.entry(tree.name.as_str()).or_default() += 1;
        if !is_identifier(&tree.name) {
            errors.insert(ValidationError::InvalidIdentifier { name: tree.name.clone() });
        }
        if tree.is_empty() {
            errors.insert(ValidationError::EmptyClassTree { tree: tree.name.clone() });
        }
        tree.top_bct.walk(&mut |bct| {
            *bct_counts.entry(bct.id.as_str()).or_default() += 1;
            if !is_identifier(&bct.id) {
                errors.insert(ValidationError::InvalidIdentifier { name: bct.id.clone() });
            }
            let is_empty_top = core::ptr::eq(bct, &tree.top_bct) && bct.classes.is_empty();
            if bct.classes.len() < 2 && !is_empty_top {
                errors.insert(ValidationError::SingleChildBct { bct: bct.id.clone() });
            }
            for class in &bct.classes {
                *name_counts.entry(class.name.as_str()).or_default() += 1;
                class_tree.entry(class.name.as_str()).or_insert(tree.name.as_str());
                if !is_identifier(&class.name) {
                    errors.insert(ValidationError::InvalidIdentifier { name: class.name.clone() });
                }
                let well_named = match class.kind {
                    ClassKind::ExclusionNegative => {
                        class.name.starts_with(NEGATIVE_PREFIX) || class.name.starts_with('-')
                    }
                    ClassKind::ExclusionResidual => class.name.starts_with(RESIDUAL_PREFIX),
                    _ => true,
                };
                if !well_named {
                    errors.insert(ValidationError::InvalidExclusionName { class: class.name.clone() });
                }
            }
        });
    }
    for (name, count) in &name_counts {
        if *count > 1 {
            errors.insert(ValidationError::RepeatedClassName { name: name.to_string() });
        }
    }
    for (id, count) in &bct_counts {
        if *count > 1 {
            errors.insert(ValidationError::RepeatedBctId { bct: id.to_string() });
        }
    }

    let tree_names: BTreeSet<&str> = forest.trees.iter().map(|t| t.name.as_str()).collect();
    let known_class = |name: &str| class_tree.contains_key(name);

    // Relations: targets and sources must exist.
    let mut parents_of_tree: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for rel in &forest.subsidiary_relations {
        if !tree_names.contains(rel.tree.as_str()) {
            errors.insert(ValidationError::DanglingReference {
                referrer: "subsidiary relation".to_string(),
                name: rel.tree.clone(),
            });
            continue;
        }
        if rel.class != ROOT && !known_class(&rel.class) {
            errors.insert(ValidationError::DanglingReference {
                referrer: "subsidiary relation".to_string(),
                name: rel.class.clone(),
            });
            continue;
        }
        parents_of_tree.entry(rel.tree.as_str()).or_default().push(rel.class.as_str());
    }

    let mut mains = 0usize;
    for tree in &forest.trees {
        let parents = parents_of_tree.get(tree.name.as_str()).cloned().unwrap_or_default();
        match tree.role {
            TreeRole::Main => {
                mains += 1;
                if mains > 1 {
                    errors.insert(ValidationError::DetachedTree { tree: tree.name.clone() });
                }
                if !parents.is_empty() {
                    let mut all: Vec<String> = parents.iter().map(|p| p.to_string()).collect();
                    all.push(ROOT.to_string());
                    all.sort();
                    errors.insert(ValidationError::MultipleParents { tree: tree.name.clone(), parents: all });
                }
            }
            TreeRole::Subsidiary => match parents.len() {
                0 => {
                    errors.insert(ValidationError::DetachedTree { tree: tree.name.clone() });
                }
                1 => {}
                _ => {
                    let mut all: Vec<String> = parents.iter().map(|p| p.to_string()).collect();
                    all.sort();
                    errors.insert(ValidationError::MultipleParents { tree: tree.name.clone(), parents: all });
                }
            },
        }
    }
    if mains == 0 {
        errors.insert(ValidationError::MissingMainTree);
    }

    // Recursion: tree graph edge holder_tree -> subsidiary_tree.
    for cycle in tree_cycles(forest, &class_tree) {
        errors.insert(ValidationError::RecursiveRelation { class: cycle });
    }

    // Rules.
    for rule in &forest.preprocessing_rules {
        if rule.targets.is_empty() {
            errors.insert(ValidationError::RuleConflict {
                name: rule.source.clone(),
                reason: "preprocessing rule without targets",
            });
        }
        for target in &rule.targets {
            if !known_class(target) {
                errors.insert(ValidationError::DanglingReference {
                    referrer: alloc::format!("preprocessing of `{}`", rule.source),
                    name: target.clone(),
                });
            }
        }
        if known_class(&rule.source) && !rule.targets.contains(&rule.source) {
            errors.insert(ValidationError::RuleConflict {
                name: rule.source.clone(),
                reason: "preprocessing source is itself a taxonomy class",
            });
        }
    }
    for rule in &forest.compound_rules {
        if rule.components.len() < 2 {
            errors.insert(ValidationError::RuleConflict {
                name: rule.compound.clone(),
                reason: "compound class needs at least two components",
            });
        }
        if known_class(&rule.compound) {
            errors.insert(ValidationError::RuleConflict {
                name: rule.compound.clone(),
                reason: "compound class is also a taxonomy class",
            });
        }
        for component in &rule.components {
            if !known_class(component) {
                errors.insert(ValidationError::DanglingReference {
                    referrer: alloc::format!("compound `{}`", rule.compound),
                    name: component.clone(),
                });
            }
        }
    }

    errors.into_iter().collect()
}

/// One representative class per cycle in the tree-conditioning graph: the
/// smallest relation class taking part in the cycle.
fn tree_cycles(forest: &DecisionRainforest, class_tree: &BTreeMap<&str, &str>) -> Vec<String> {
    // edges: parent tree -> (child tree, relation class)
    let mut edges: BTreeMap<&str, Vec<(&str, &str)>> = BTreeMap::new();
    for rel in &forest.subsidiary_relations {
        if let Some(holder) = class_tree.get(rel.class.as_str()) {
            edges.entry(holder).or_default().push((rel.tree.as_str(), rel.class.as_str()));
        }
    }
    let nodes: Vec<&str> = forest.trees.iter().map(|t| t.name.as_str()).collect();
    let reach = |from: &str, to: &str| -> bool {
        let mut stack = alloc::vec![from];
        let mut seen = BTreeSet::new();
        while let Some(n) = stack.pop() {
            for (next, _) in edges.get(n).map(Vec::as_slice).unwrap_or(&[]) {
                if *next == to {
                    return true;
                }
                if seen.insert(*next) {
                    stack.push(next);
                }
            }
        }
        false
    };
    // Group trees into strongly connected components that contain a cycle.
    let mut assigned: BTreeSet<&str> = BTreeSet::new();
    let mut out = Vec::new();
    for &start in &nodes {
        if assigned.contains(start) || !reach(start, start) {
            continue;
        }
        let component: BTreeSet<&str> =
            nodes.iter().copied().filter(|&n| n == start || (reach(start, n) && reach(n, start))).collect();
        let mut classes: Vec<&str> = Vec::new();
        for &n in &component {
            for (child, class) in edges.get(n).map(Vec::as_slice).unwrap_or(&[]) {
                if component.contains(child) {
                    classes.push(class);
                }
            }
        }
        classes.sort_unstable();
        if let Some(first) = classes.first() {
            out.push(first.to_string());
        }
        assigned.extend(component);
    }
    out
}
