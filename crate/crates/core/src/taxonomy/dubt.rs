use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::forest::{ClassKind, CompoundRule};
use crate::name::ROOT;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DubtError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
}

/// A class of the compiled tree with the properties carried over from the
/// rainforest.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DubtNode {
    pub name: String,
    pub kind: ClassKind,
    pub parent: String,
    /// Id of the disjoint-union group (the originating BCT).
    pub group: String,
    pub tree_name: String,
    /// `root_class/<tree>:<class>/...` ending with this node's own segment.
    pub class_path: String,
    pub associated_compound_classes: Vec<String>,
    pub preprocessed_from: Vec<String>,
}

/// Members of one BCT, a disjoint union of its parent class.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DisjointUnionGroup {
    pub id: String,
    pub parent: String,
    pub members: Vec<String>,
}

/// Disjoint-union-based tree: single root, every other class has one parent
/// and belongs to exactly one disjoint-union group under it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Dubt {
    pub root_name: String,
    /// Pre-order: a parent always precedes its children.
    nodes: Vec<DubtNode>,
    groups: Vec<DisjointUnionGroup>,
    #[cfg_attr(feature = "serde", serde(skip))]
    index: BTreeMap<String, usize>,
    #[cfg_attr(feature = "serde", serde(skip))]
    group_index: BTreeMap<String, usize>,
}

impl Dubt {
    /// Assembles a tree from nodes in pre-order and their groups. Callers
    /// are expected to have checked the structure (see `build_dubt`).
    pub(crate) fn from_parts(nodes: Vec<DubtNode>, groups: Vec<DisjointUnionGroup>) -> Self {
        let index = nodes.iter().enumerate().map(|(i, n)| (n.name.clone(), i)).collect();
        let group_index = groups.iter().enumerate().map(|(i, g)| (g.id.clone(), i)).collect();
        Dubt { root_name: String::from(ROOT), nodes, groups, index, group_index }
    }

    pub fn nodes(&self) -> &[DubtNode] {
        &self.nodes
    }

    pub fn groups(&self) -> &[DisjointUnionGroup] {
        &self.groups
    }

    pub fn node(&self, name: &str) -> Option<&DubtNode> {
        self.index.get(name).map(|&i| &self.nodes[i])
    }

    pub fn group(&self, id: &str) -> Option<&DisjointUnionGroup> {
        self.group_index.get(id).map(|&i| &self.groups[i])
    }

    /// Group containing `class`.
    pub fn group_of(&self, class: &str) -> Option<&DisjointUnionGroup> {
        self.node(class).and_then(|n| self.group(&n.group))
    }

    pub fn contains(&self, name: &str) -> bool {
        name == self.root_name || self.index.contains_key(name)
    }

    /// Position of `name` in pre-order (root first). Used to order label
    /// lists consistently.
    pub fn order_of(&self, name: &str) -> Option<usize> {
        if name == self.root_name {
            Some(0)
        } else {
            self.index.get(name).map(|i| i + 1)
        }
    }

    /// Groups whose parent is `class`, in declaration order.
    pub fn groups_under<'a>(&'a self, class: &'a str) -> impl Iterator<Item = &'a DisjointUnionGroup> + 'a {
        self.groups.iter().filter(move |g| g.parent == class)
    }

    pub fn children<'a>(&'a self, class: &'a str) -> impl Iterator<Item = &'a DubtNode> + 'a {
        self.nodes.iter().filter(move |n| n.parent == class)
    }

    /// `class` followed by its ancestors up to, excluding, the root.
    pub fn ancestor_closure(&self, class: &str) -> Result<Vec<&str>, DubtError> {
        if class == self.root_name {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut current = self.node(class).ok_or_else(|| DubtError::UnknownClass(class.into()))?;
        loop {
            out.push(current.name.as_str());
            match self.node(&current.parent) {
                Some(parent) => current = parent,
                None => break,
            }
        }
        Ok(out)
    }

    /// Whether `ancestor` is `class` itself or one of its ancestors.
    pub fn is_ancestor_or_self(&self, ancestor: &str, class: &str) -> bool {
        if ancestor == self.root_name {
            return self.contains(class);
        }
        self.ancestor_closure(class).map(|c| c.contains(&ancestor)).unwrap_or(false)
    }

    /// Two classes are incompatible when their ancestor closures contain two
    /// distinct members of the same disjoint-union group.
    pub fn incompatible(&self, a: &str, b: &str) -> Result<bool, DubtError> {
        let left = self.ancestor_closure(a)?;
        let right = self.ancestor_closure(b)?;
        for x in &left {
            let gx = &self.nodes[self.index[*x]].group;
            for y in &right {
                if x != y && *gx == self.nodes[self.index[*y]].group {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// First incompatible pair among `labels`, ignoring names the tree does
    /// not know (for instance reintroduced compound classes).
    pub fn find_conflict<'a, I>(&self, labels: I) -> Option<(String, String)>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let known: Vec<&str> = labels.into_iter().filter(|l| self.index.contains_key(*l)).collect();
        for (i, a) in known.iter().enumerate() {
            for b in &known[i + 1..] {
                if self.incompatible(a, b).unwrap_or(false) {
                    return Some((String::from(*a), String::from(*b)));
                }
            }
        }
        None
    }

    /// Every node below `class` (excluding `class`).
    pub fn descendants(&self, class: &str) -> Vec<&str> {
        self.nodes
            .iter()
            .filter(|n| n.name != class && self.is_ancestor_or_self(class, &n.name))
            .map(|n| n.name.as_str())
            .collect()
    }

    /// Compound rules recovered from the nodes' associated compound classes.
    pub fn compound_rules(&self) -> Vec<CompoundRule> {
        let mut rules: Vec<CompoundRule> = Vec::new();
        for node in &self.nodes {
            for compound in &node.associated_compound_classes {
                match rules.iter_mut().find(|r| &r.compound == compound) {
                    Some(rule) => rule.components.push(node.name.clone()),
                    None => rules.push(CompoundRule::new(compound.clone(), [node.name.clone()])),
                }
            }
        }
        rules
    }

    /// Rebuilds the lookup tables, needed after deserializing.
    pub fn reindex(&mut self) {
        self.index = self.nodes.iter().enumerate().map(|(i, n)| (n.name.clone(), i)).collect();
        self.group_index = self.groups.iter().enumerate().map(|(i, g)| (g.id.clone(), i)).collect();
    }
}
