use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::name::ROOT;

/// Role a class plays in the taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(rename_all = "snake_case"))]
pub enum ClassKind {
    #[default]
    Regular,
    /// Structuring class introduced by a BCT split or a DAG repair.
    AuxiliarySuperclass,
    /// `no_<class>` member of a binary BCT.
    ExclusionNegative,
    /// `other_<parent>` member of a multiclass BCT.
    ExclusionResidual,
}

impl ClassKind {
    pub fn is_exclusion(self) -> bool {
        matches!(self, ClassKind::ExclusionNegative | ClassKind::ExclusionResidual)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassKind::Regular => "regular",
            ClassKind::AuxiliarySuperclass => "auxiliary_superclass",
            ClassKind::ExclusionNegative => "exclusion_negative",
            ClassKind::ExclusionResidual => "exclusion_residual",
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which exclusion class a non-exhaustive BCT should receive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(rename_all = "snake_case"))]
pub enum ExclusionStyle {
    /// `no_<class>` for a single-class BCT, `other_<parent>` otherwise.
    #[default]
    Auto,
    Negative,
    Residual,
}

/// A class inside a BCT.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClassNode {
    pub name: String,
    pub kind: ClassKind,
    /// The single conditional BCT kept in the same tree (hierarchical relation).
    pub hierarchical_child: Option<Box<Bct>>,
}

impl ClassNode {
    pub fn new(name: impl Into<String>, kind: ClassKind) -> Self {
        ClassNode { name: name.into(), kind, hierarchical_child: None }
    }

    pub fn regular(name: impl Into<String>) -> Self {
        Self::new(name, ClassKind::Regular)
    }

    /// Attaches `bct` as this class's hierarchical child and records the
    /// conditioning class on it.
    pub fn with_child(mut self, mut bct: Bct) -> Self {
        bct.conditioning_class = Some(self.name.clone());
        self.hierarchical_child = Some(Box::new(bct));
        self
    }
}

/// Basic classification task: a mutually exclusive set of classes.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Bct {
    pub id: String,
    /// Set for hierarchical children only. Top BCTs of trees have `None`; a
    /// subsidiary tree's conditioning class lives on its relation.
    pub conditioning_class: Option<String>,
    pub classes: Vec<ClassNode>,
    /// User-asserted collective exhaustiveness.
    pub exhaustive: bool,
    pub exclusion_style: ExclusionStyle,
}

impl Bct {
    pub fn new(id: impl Into<String>, classes: Vec<ClassNode>) -> Self {
        Bct {
            id: id.into(),
            conditioning_class: None,
            classes,
            exhaustive: true,
            exclusion_style: ExclusionStyle::Auto,
        }
    }

    /// Builds an exhaustive BCT of regular classes.
    pub fn of<I, S>(id: impl Into<String>, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(id, names.into_iter().map(ClassNode::regular).collect())
    }

    pub fn non_exhaustive(mut self, style: ExclusionStyle) -> Self {
        self.exhaustive = false;
        self.exclusion_style = style;
        self
    }

    pub fn class_names(&self) -> impl Iterator<Item = &str> {
        self.classes.iter().map(|c| c.name.as_str())
    }

    /// Replaces the hierarchical child of the class `name`, returning whether
    /// the class was found among this BCT's direct members.
    pub fn set_child(&mut self, name: &str, bct: Bct) -> bool {
        match self.classes.iter_mut().find(|c| c.name == name) {
            Some(class) => {
                let mut bct = bct;
                bct.conditioning_class = Some(class.name.clone());
                class.hierarchical_child = Some(Box::new(bct));
                true
            }
            None => false,
        }
    }

    /// Pre-order walk over this BCT and every BCT nested below it.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a Bct)) {
        visit(self);
        for class in &self.classes {
            if let Some(child) = &class.hierarchical_child {
                child.walk(visit);
            }
        }
    }

    pub fn walk_mut(&mut self, visit: &mut dyn FnMut(&mut Bct)) {
        visit(self);
        for class in &mut self.classes {
            if let Some(child) = &mut class.hierarchical_child {
                child.walk_mut(visit);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(rename_all = "snake_case"))]
pub enum TreeRole {
    Main,
    Subsidiary,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Tree {
    pub name: String,
    pub top_bct: Bct,
    pub role: TreeRole,
}

impl Tree {
    pub fn new(name: impl Into<String>, top_bct: Bct, role: TreeRole) -> Self {
        Tree { name: name.into(), top_bct, role }
    }

    pub fn is_empty(&self) -> bool {
        self.top_bct.classes.is_empty()
    }
}

/// Link from a class (or [`ROOT`]) to a subsidiary tree.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SubsidiaryRelation {
    pub class: String,
    pub tree: String,
}

impl SubsidiaryRelation {
    pub fn new(class: impl Into<String>, tree: impl Into<String>) -> Self {
        SubsidiaryRelation { class: class.into(), tree: tree.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize), serde(rename_all = "snake_case"))]
pub enum PreprocessAction {
    Rename,
    Merge,
    Split,
}

/// Maps a label from the original annotation vocabulary onto taxonomy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PreprocessRule {
    pub source: String,
    pub targets: Vec<String>,
}

impl PreprocessRule {
    pub fn new<I, S>(source: impl Into<String>, targets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        PreprocessRule { source: source.into(), targets: targets.into_iter().map(Into::into).collect() }
    }
}

/// A class that is reintroduced whenever all of its components are present.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CompoundRule {
    pub compound: String,
    pub components: Vec<String>,
}

impl CompoundRule {
    pub fn new<I, S>(compound: impl Into<String>, components: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        CompoundRule { compound: compound.into(), components: components.into_iter().map(Into::into).collect() }
    }
}

/// Trees of BCTs connected by subsidiary relations, plus the
/// preprocessing and compound-class rules that travel with them.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DecisionRainforest {
    pub trees: Vec<Tree>,
    pub subsidiary_relations: Vec<SubsidiaryRelation>,
    pub preprocessing_rules: Vec<PreprocessRule>,
    pub compound_rules: Vec<CompoundRule>,
}

/// A BCT together with the class conditioning it and the tree holding it.
#[derive(Debug, Clone, Copy)]
pub struct BctRef<'a> {
    pub bct: &'a Bct,
    pub tree: &'a Tree,
    /// Conditioning class, [`ROOT`] for unconditional BCTs.
    pub conditioning: &'a str,
    pub depth: usize,
}

impl DecisionRainforest {
    pub fn tree(&self, name: &str) -> Option<&Tree> {
        self.trees.iter().find(|t| t.name == name)
    }

    pub fn main_tree(&self) -> Option<&Tree> {
        self.trees.iter().find(|t| t.role == TreeRole::Main)
    }

    /// Class conditioning the top BCT of `tree`: [`ROOT`] for the main tree,
    /// the relation's class for subsidiary trees.
    pub fn tree_conditioning(&self, tree: &Tree) -> Option<&str> {
        match tree.role {
            TreeRole::Main => Some(ROOT),
            TreeRole::Subsidiary => {
                self.subsidiary_relations.iter().find(|r| r.tree == tree.name).map(|r| r.class.as_str())
            }
        }
    }

    /// Subsidiary trees hanging off `class`, in relation order.
    pub fn subsidiary_trees_of<'a>(&'a self, class: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.subsidiary_relations.iter().filter(move |r| r.class == class).map(|r| r.tree.as_str())
    }

    /// Every BCT in tree order, pre-order within each tree. Subsidiary trees
    /// without a relation report [`ROOT`] as their conditioning class.
    pub fn bcts(&self) -> Vec<BctRef<'_>> {
        let mut out = Vec::new();
        for tree in &self.trees {
            let top_cond = self.tree_conditioning(tree).unwrap_or(ROOT);
            collect_bcts(&tree.top_bct, tree, top_cond, 0, &mut out);
        }
        out
    }

    pub fn find_bct(&self, id: &str) -> Option<BctRef<'_>> {
        self.bcts().into_iter().find(|b| b.bct.id == id)
    }

    /// Every class node with the tree that holds it, in declaration order.
    pub fn classes(&self) -> Vec<(&ClassNode, &Tree)> {
        let mut out = Vec::new();
        for tree in &self.trees {
            tree.top_bct.walk(&mut |bct| {
                for c in &bct.classes {
                    out.push((c, tree));
                }
            });
        }
        out
    }

    pub fn class(&self, name: &str) -> Option<&ClassNode> {
        self.classes().into_iter().map(|(c, _)| c).find(|c| c.name == name)
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.class(name).is_some()
    }

    pub fn bct_mut(&mut self, id: &str) -> Option<&mut Bct> {
        fn find<'a>(bct: &'a mut Bct, id: &str) -> Option<&'a mut Bct> {
            if bct.id == id {
                return Some(bct);
            }
            for class in &mut bct.classes {
                if let Some(child) = &mut class.hierarchical_child {
                    if let Some(found) = find(child, id) {
                        return Some(found);
                    }
                }
            }
            None
        }
        self.trees.iter_mut().find_map(|t| find(&mut t.top_bct, id))
    }

    /// Preprocessing rules grouped into actions. Sources sharing one single
    /// target form one merge; a source with several targets is a split;
    /// anything else is a rename.
    pub fn preprocessing_actions(&self) -> Vec<(PreprocessAction, Vec<&PreprocessRule>)> {
        let mut out: Vec<(PreprocessAction, Vec<&PreprocessRule>)> = Vec::new();
        let mut merged_targets: Vec<&str> = Vec::new();
        for rule in &self.preprocessing_rules {
            if rule.targets.len() > 1 {
                out.push((PreprocessAction::Split, alloc::vec![rule]));
                continue;
            }
            let Some(target) = rule.targets.first() else { continue };
            if merged_targets.contains(&target.as_str()) {
                continue;
            }
            let sharing: Vec<&PreprocessRule> =
                self.preprocessing_rules.iter().filter(|r| r.targets.len() == 1 && r.targets[0] == *target).collect();
            if sharing.len() > 1 {
                merged_targets.push(target);
                out.push((PreprocessAction::Merge, sharing));
            } else {
                out.push((PreprocessAction::Rename, sharing));
            }
        }
        out
    }

    pub fn action_of(&self, rule: &PreprocessRule) -> PreprocessAction {
        if rule.targets.len() > 1 {
            return PreprocessAction::Split;
        }
        let shared =
            self.preprocessing_rules.iter().filter(|r| r.targets.len() == 1 && r.targets == rule.targets).count();
        if shared > 1 {
            PreprocessAction::Merge
        } else {
            PreprocessAction::Rename
        }
    }
}

fn collect_bcts<'a>(bct: &'a Bct, tree: &'a Tree, conditioning: &'a str, depth: usize, out: &mut Vec<BctRef<'a>>) {
    out.push(BctRef { bct, tree, conditioning, depth });
    for class in &bct.classes {
        if let Some(child) = &class.hierarchical_child {
            collect_bcts(child, tree, &class.name, depth + 1, out);
        }
    }
}
