use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::name::ROOT;
use crate::taxonomy::{Bct, ClassKind, ClassNode, DecisionRainforest, SubsidiaryRelation, Tree, TreeRole};

use super::Naming;

/// Arena that places BCTs one at a time: the first BCT conditioned by a
/// class stays in that class's tree, later ones open subsidiary trees named
/// after the BCT.
#[derive(Debug, Default)]
pub(crate) struct ForestBuilder {
    bcts: Vec<Option<Bct>>,
    hierarchical: BTreeMap<String, usize>,
    trees: Vec<(String, usize, TreeRole)>,
    relations: Vec<SubsidiaryRelation>,
}

impl ForestBuilder {
    /// Attaches `bct` under `conditioning` (`None` for the root).
    pub fn attach(&mut self, conditioning: Option<&str>, bct: Bct, force_subsidiary: bool) {
        let idx = self.bcts.len();
        let tree_name = bct.id.clone();
        self.bcts.push(Some(bct));
        match conditioning {
            None => {
                let has_main = self.trees.iter().any(|t| t.2 == TreeRole::Main);
                if has_main || force_subsidiary {
                    self.trees.push((tree_name.clone(), idx, TreeRole::Subsidiary));
                    self.relations.push(SubsidiaryRelation::new(ROOT, tree_name));
                } else {
                    self.trees.push((tree_name, idx, TreeRole::Main));
                }
            }
            Some(class) => {
                if !force_subsidiary && !self.hierarchical.contains_key(class) {
                    self.hierarchical.insert(String::from(class), idx);
                } else {
                    self.trees.push((tree_name.clone(), idx, TreeRole::Subsidiary));
                    self.relations.push(SubsidiaryRelation::new(class, tree_name));
                }
            }
        }
    }

    pub fn finish(mut self) -> DecisionRainforest {
        let tree_specs = core::mem::take(&mut self.trees);
        let mut trees = Vec::with_capacity(tree_specs.len());
        for (name, idx, role) in tree_specs {
            let top = self.assemble(idx);
            trees.push(Tree::new(name, top, role));
        }
        DecisionRainforest {
            trees,
            subsidiary_relations: self.relations,
            preprocessing_rules: Vec::new(),
            compound_rules: Vec::new(),
        }
    }

    fn assemble(&mut self, idx: usize) -> Bct {
        let mut bct = self.bcts[idx].take().expect("BCT assembled twice");
        for i in 0..bct.classes.len() {
            if let Some(&child) = self.hierarchical.get(&bct.classes[i].name) {
                let child = self.assemble(child);
                let name = bct.classes[i].name.clone();
                bct.set_child(&name, child);
            }
        }
        bct
    }
}

/// Binary BCT `{class, negative}` identified as `attribute_<class>`.
pub(crate) fn binary_bct(class: &str, kind: ClassKind, naming: &Naming) -> Bct {
    let mut id = String::from("attribute_");
    id.push_str(class);
    Bct::new(
        id,
        alloc::vec![ClassNode::new(class, kind), ClassNode::new(naming.negative(class), ClassKind::ExclusionNegative)],
    )
}
