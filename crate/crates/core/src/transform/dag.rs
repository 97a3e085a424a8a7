//! Repair of multi-parent classes.
//!
//! A class X with parents P1..Pk cannot live in a tree, so the repair adds
//! an auxiliary superclass meaning "belongs to at least one Pi", attached as
//! a binary BCT under the deepest class that every instance of any Pi must
//! also belong to, and moves X into a subsidiary tree under it.
//!
//! Under the DAG's label semantics (a class implies at least one of its
//! parents) a class D is implied by Pi exactly when every root-to-Pi path
//! passes through D, i.e. D dominates Pi. Plain ancestry is not enough once
//! Pi has several parents itself, so the attachment point is the deepest
//! common strict dominator of P1..Pk, or the root when there is none.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::builder::{binary_bct, ForestBuilder};
use super::{Naming, TransformError};
use crate::name::normalize;
use crate::taxonomy::{ClassKind, DecisionRainforest};

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DagProblem {
    pub nodes: Vec<String>,
    /// `(parent, child)` pairs.
    pub edges: Vec<(String, String)>,
}

/// Auxiliary superclass standing for the union of `members`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionClass {
    pub name: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DagTransform {
    pub forest: DecisionRainforest,
    pub unions: Vec<UnionClass>,
}

/// [`transform_dag_with`] using the default naming.
pub fn transform_dag(problem: &DagProblem) -> Result<DecisionRainforest, TransformError> {
    transform_dag_with(problem, &Naming::default()).map(|t| t.forest)
}

pub fn transform_dag_with(problem: &DagProblem, naming: &Naming) -> Result<DagTransform, TransformError> {
    let graph = Graph::new(problem)?;
    let order = graph.topological_order()?;
    let dominators = graph.strict_dominators();

    let mut builder = ForestBuilder::default();
    let mut unions: Vec<UnionClass> = Vec::new();
    let mut union_by_parents: BTreeMap<Vec<usize>, String> = BTreeMap::new();

    for &x in &order {
        let class = &graph.names[x];
        let bct = binary_bct(class, ClassKind::Regular, naming);
        let parents = &graph.parents[x];
        match parents.len() {
            0 => builder.attach(None, bct, false),
            1 => builder.attach(Some(&graph.names[parents[0]]), bct, false),
            _ => {
                let aux = match union_by_parents.get(parents) {
                    Some(name) => name.clone(),
                    None => {
                        let members: Vec<&str> = parents.iter().map(|&p| graph.names[p].as_str()).collect();
                        let name = naming.auxiliary(&members);
                        if graph.index.contains_key(&name) || unions.iter().any(|u| u.name == name) {
                            return Err(TransformError::InvalidProblem(format!(
                                "auxiliary superclass `{name}` collides with an existing class"
                            )));
                        }
                        let anchor = graph.deepest_common_dominator(parents, &dominators);
                        let aux_bct = binary_bct(&name, ClassKind::AuxiliarySuperclass, naming);
                        builder.attach(anchor.map(|a| graph.names[a].as_str()), aux_bct, false);
                        union_by_parents.insert(parents.clone(), name.clone());
                        unions.push(UnionClass {
                            name: name.clone(),
                            members: members.into_iter().map(String::from).collect(),
                        });
                        name
                    }
                };
                builder.attach(Some(&aux), bct, true);
            }
        }
    }
    Ok(DagTransform { forest: builder.finish(), unions })
}

struct Graph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    /// Parent indices, ascending (declaration order).
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Graph {
    fn new(problem: &DagProblem) -> Result<Self, TransformError> {
        if problem.nodes.is_empty() {
            return Err(TransformError::EmptyInput);
        }
        let mut names = Vec::with_capacity(problem.nodes.len());
        let mut index = BTreeMap::new();
        for raw in &problem.nodes {
            let name = normalize(raw);
            if name.is_empty() {
                return Err(TransformError::InvalidProblem(format!("node `{raw}` normalizes to an empty name")));
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(TransformError::InvalidProblem(format!("node `{name}` is declared twice")));
            }
            names.push(name);
        }
        let n = names.len();
        let mut parent_sets: Vec<BTreeSet<usize>> = alloc::vec![BTreeSet::new(); n];
        for (p, c) in &problem.edges {
            let lookup = |raw: &str| {
                let name = normalize(raw);
                index
                    .get(&name)
                    .copied()
                    .ok_or_else(|| TransformError::InvalidProblem(format!("edge references undeclared node `{name}`")))
            };
            let (p, c) = (lookup(p)?, lookup(c)?);
            if p == c {
                return Err(TransformError::CyclicInput(alloc::vec![names[p].clone()]));
            }
            parent_sets[c].insert(p);
        }
        let parents: Vec<Vec<usize>> = parent_sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let mut children = alloc::vec![Vec::new(); n];
        for (c, ps) in parents.iter().enumerate() {
            for &p in ps {
                children[p].push(c);
            }
        }
        Ok(Graph { names, index, parents, children })
    }

    /// Kahn's algorithm, always taking the earliest-declared ready node.
    fn topological_order(&self) -> Result<Vec<usize>, TransformError> {
        let n = self.names.len();
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(next) = ready.pop_first() {
            order.push(next);
            for &c in &self.children[next] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).filter(|i| indegree[*i] > 0).map(|i| self.names[i].clone()).collect();
            return Err(TransformError::CyclicInput(stuck));
        }
        Ok(order)
    }

    /// `dom[x]` = nodes other than x lying on every root-to-x path.
    fn strict_dominators(&self) -> Vec<BTreeSet<usize>> {
        let n = self.names.len();
        let roots: Vec<usize> = (0..n).filter(|&i| self.parents[i].is_empty()).collect();
        let mut dom = alloc::vec![BTreeSet::new(); n];
        for removed in 0..n {
            let mut seen = alloc::vec![false; n];
            let mut stack: Vec<usize> = roots.iter().copied().filter(|&r| r != removed).collect();
            for &r in &stack {
                seen[r] = true;
            }
            while let Some(v) = stack.pop() {
                for &c in &self.children[v] {
                    if c != removed && !seen[c] {
                        seen[c] = true;
                        stack.push(c);
                    }
                }
            }
            for x in 0..n {
                if x != removed && !seen[x] {
                    dom[x].insert(removed);
                }
            }
        }
        dom
    }

    fn deepest_common_dominator(&self, members: &[usize], dom: &[BTreeSet<usize>]) -> Option<usize> {
        let mut common: BTreeSet<usize> = dom[members[0]].clone();
        for &m in &members[1..] {
            common = common.intersection(&dom[m]).copied().collect();
        }
        // Dominators of a node form a chain; the deepest has the most
        // dominators of its own. Ties fall back to declaration order.
        common.into_iter().max_by(|a, b| dom[*a].len().cmp(&dom[*b].len()).then(b.cmp(a)))
    }
}
