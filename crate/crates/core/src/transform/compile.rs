use alloc::string::String;
use alloc::vec::Vec;

use super::TransformError;
use crate::name::ROOT;
use crate::taxonomy::{validate_rainforest, Bct, DecisionRainforest, DisjointUnionGroup, Dubt, DubtNode, Tree};

/// Compiles a valid, fully exhaustive rainforest into a disjoint-union-based
/// tree. Hierarchical and subsidiary relations both become parent-child
/// edges and every BCT becomes one disjoint-union group of its conditioning
/// class.
pub fn build_dubt(forest: &DecisionRainforest) -> Result<Dubt, TransformError> {
    let errors = validate_rainforest(forest);
    if !errors.is_empty() {
        return Err(TransformError::InvalidForest(errors));
    }
    for b in forest.bcts() {
        if !b.bct.exhaustive {
            return Err(TransformError::NonExhaustiveBct(b.bct.id.clone()));
        }
    }

    let mut out = Compiler { forest, nodes: Vec::new(), groups: Vec::new() };
    let main = forest.main_tree().expect("validated forest has a main tree");
    out.emit_tree(main, ROOT, ROOT);
    for tree in forest.subsidiary_trees_of(ROOT) {
        let tree = forest.tree(tree).expect("validated relation target");
        out.emit_tree(tree, ROOT, ROOT);
    }

    let Compiler { mut nodes, groups, .. } = out;
    for node in &mut nodes {
        for rule in &forest.compound_rules {
            if rule.components.contains(&node.name) && !node.associated_compound_classes.contains(&rule.compound) {
                node.associated_compound_classes.push(rule.compound.clone());
            }
        }
        for rule in &forest.preprocessing_rules {
            if rule.targets.contains(&node.name) && !node.preprocessed_from.contains(&rule.source) {
                node.preprocessed_from.push(rule.source.clone());
            }
        }
    }
    Ok(Dubt::from_parts(nodes, groups))
}

struct Compiler<'a> {
    forest: &'a DecisionRainforest,
    nodes: Vec<DubtNode>,
    groups: Vec<DisjointUnionGroup>,
}

impl<'a> Compiler<'a> {
    fn emit_tree(&mut self, tree: &'a Tree, parent: &str, parent_path: &str) {
        self.emit_bct(&tree.top_bct, &tree.name, parent, parent_path);
    }

    fn emit_bct(&mut self, bct: &'a Bct, tree_name: &str, parent: &str, parent_path: &str) {
        self.groups.push(DisjointUnionGroup {
            id: bct.id.clone(),
            parent: String::from(parent),
            members: bct.classes.iter().map(|c| c.name.clone()).collect(),
        });
        for class in &bct.classes {
            let mut path = String::from(parent_path);
            path.push('/');
            path.push_str(tree_name);
            path.push(':');
            path.push_str(&class.name);
            self.nodes.push(DubtNode {
                name: class.name.clone(),
                kind: class.kind,
                parent: String::from(parent),
                group: bct.id.clone(),
                tree_name: String::from(tree_name),
                class_path: path.clone(),
                associated_compound_classes: Vec::new(),
                preprocessed_from: Vec::new(),
            });
            if let Some(child) = &class.hierarchical_child {
                self.emit_bct(child, tree_name, &class.name, &path);
            }
            let forest = self.forest;
            for sub in forest.subsidiary_trees_of(&class.name) {
                let tree = forest.tree(sub).expect("validated relation target");
                self.emit_tree(tree, &class.name, &path);
            }
        }
    }
}
