#![allow(dead_code)]

use std::path::PathBuf;

use multiplex_core::name::ROOT;
use multiplex_core::taxonomy::{
    validate_rainforest, Bct, ClassKind, ClassNode, CompoundRule, DecisionRainforest, ExclusionStyle, PreprocessRule,
    SubsidiaryRelation, Tree, TreeRole,
};
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

struct Names {
    next: usize,
}

impl Names {
    fn take(&mut self, prefix: &str) -> String {
        self.next += 1;
        format!("{prefix}{}", self.next)
    }
}

fn random_bct<R: Rng>(rng: &mut R, names: &mut Names, depth: usize, classes: &mut Vec<String>) -> Bct {
    let n = rng.random_range(2..=4);
    let mut members = Vec::with_capacity(n);
    for i in 0..n {
        let roll = rng.random_range(0..10);
        let node = if i == n - 1 && roll == 0 {
            ClassNode::new(names.take("other_c"), ClassKind::ExclusionResidual)
        } else if roll < 3 {
            ClassNode::new(names.take("g"), ClassKind::AuxiliarySuperclass)
        } else {
            ClassNode::regular(names.take("c"))
        };
        classes.push(node.name.clone());
        let node = if depth < 3 && rng.random_bool(0.3) {
            let child = random_bct(rng, names, depth + 1, classes);
            node.with_child(child)
        } else {
            node
        };
        members.push(node);
    }
    let bct = Bct::new(names.take("b"), members);
    if rng.random_bool(0.2) {
        let style = *[ExclusionStyle::Auto, ExclusionStyle::Negative, ExclusionStyle::Residual].choose(rng).unwrap();
        bct.non_exhaustive(style)
    } else {
        bct
    }
}

/// A random valid rainforest: one main tree, up to three subsidiary trees
/// hanging off earlier classes or the root, and a few rules.
pub fn random_forest<R: Rng>(rng: &mut R) -> DecisionRainforest {
    let mut names = Names { next: 0 };
    let mut classes = Vec::new();
    let mut forest = DecisionRainforest::default();
    let main = random_bct(rng, &mut names, 0, &mut classes);
    forest.trees.push(Tree::new(names.take("t"), main, TreeRole::Main));
    for _ in 0..rng.random_range(0..=3) {
        let anchor = if rng.random_bool(0.2) { ROOT.to_string() } else { classes.choose(rng).unwrap().clone() };
        let top = random_bct(rng, &mut names, 1, &mut classes);
        let tree = names.take("t");
        forest.subsidiary_relations.push(SubsidiaryRelation::new(anchor, tree.clone()));
        forest.trees.push(Tree::new(tree, top, TreeRole::Subsidiary));
    }
    for _ in 0..rng.random_range(0..=3) {
        let k = rng.random_range(1..=2);
        let targets: Vec<String> = classes.choose_multiple(rng, k).cloned().collect();
        forest.preprocessing_rules.push(PreprocessRule::new(names.take("raw"), targets));
    }
    for _ in 0..rng.random_range(0..=2) {
        let components: Vec<String> = classes.choose_multiple(rng, 2).cloned().collect();
        forest.compound_rules.push(CompoundRule::new(names.take("compound"), components));
    }
    let errors = validate_rainforest(&forest);
    assert!(errors.is_empty(), "generator produced an invalid forest: {errors:?}");
    forest
}
