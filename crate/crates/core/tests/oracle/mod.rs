//! Brute-force reference implementations. Nothing here calls the code
//! under test except to read the compiled tree's groups.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use multiplex_core::taxonomy::Dubt;

pub type LabelSet = BTreeSet<String>;

/// Every subset of `nodes` where each labeled class has at least one
/// labeled parent (roots are free).
pub fn dag_legal_sets(nodes: &[String], edges: &[(String, String)]) -> BTreeSet<LabelSet> {
    let mut parents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (p, c) in edges {
        parents.entry(c.as_str()).or_default().push(p.as_str());
    }
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << nodes.len()) {
        let chosen: Vec<&str> = (0..nodes.len()).filter(|i| mask & (1 << i) != 0).map(|i| nodes[i].as_str()).collect();
        let legal = chosen.iter().all(|c| match parents.get(c) {
            None => true,
            Some(ps) => ps.iter().any(|p| chosen.contains(p)),
        });
        if legal {
            out.insert(chosen.into_iter().map(String::from).collect());
        }
    }
    out
}

/// Every subset of a tree's classes closed under "class implies parent".
pub fn tree_legal_sets(nodes: &[String], parent: &BTreeMap<String, String>) -> BTreeSet<LabelSet> {
    let edges: Vec<(String, String)> = parent.iter().map(|(c, p)| (p.clone(), c.clone())).collect();
    dag_legal_sets(nodes, &edges)
}

/// Every complete consistent assignment of a compiled tree: exactly one
/// member of each group whose parent is labeled (or is the root), nothing
/// else.
pub fn dubt_assignments(dubt: &Dubt) -> Vec<LabelSet> {
    fn expand(dubt: &Dubt, pending: Vec<String>, current: LabelSet, out: &mut Vec<LabelSet>) {
        let Some((head, rest)) = pending.split_first() else {
            out.push(current);
            return;
        };
        let group = dubt.groups().iter().find(|g| &g.id == head).unwrap();
        for member in &group.members {
            let mut next = current.clone();
            next.insert(member.clone());
            let mut todo: Vec<String> = rest.to_vec();
            todo.extend(dubt.groups().iter().filter(|g| &g.parent == member).map(|g| g.id.clone()));
            expand(dubt, todo, next, out);
        }
    }
    let roots: Vec<String> =
        dubt.groups().iter().filter(|g| g.parent == dubt.root_name).map(|g| g.id.clone()).collect();
    let mut out = Vec::new();
    expand(dubt, roots, LabelSet::new(), &mut out);
    out
}

/// Whether some complete assignment contains both classes.
pub fn coexist(assignments: &[LabelSet], a: &str, b: &str) -> bool {
    assignments.iter().any(|s| s.contains(a) && s.contains(b))
}

/// Direct consistency check of a label set against the group structure:
/// at most one member per group and every label's parent present.
pub fn consistent(labels: &LabelSet, dubt: &Dubt) -> bool {
    for group in dubt.groups() {
        let present = group.members.iter().filter(|m| labels.contains(*m)).count();
        if present > 1 {
            return false;
        }
        if present == 1 && group.parent != dubt.root_name && !labels.contains(&group.parent) {
            return false;
        }
    }
    true
}

/// Confusion counts by walking instance by instance, class by class.
pub fn confusion(
    predictions: &BTreeMap<String, LabelSet>,
    truth: &BTreeMap<String, LabelSet>,
    class: &str,
) -> (usize, usize, usize) {
    let mut tp = 0;
    let mut fp = 0;
    let mut fn_ = 0;
    for id in truth.keys() {
        let p = predictions[id].iter().any(|c| c == class);
        let t = truth[id].iter().any(|c| c == class);
        if p && t {
            tp += 1;
        } else if p {
            fp += 1;
        } else if t {
            fn_ += 1;
        }
    }
    (tp, fp, fn_)
}

pub fn f1_from_counts(tp: usize, fp: usize, fn_: usize) -> f64 {
    // 2tp / (2tp + fp + fn) equals 2pr/(p+r) whenever tp > 0.
    if tp == 0 {
        0.0
    } else {
        (2 * tp) as f64 / (2 * tp + fp + fn_) as f64
    }
}
