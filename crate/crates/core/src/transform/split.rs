use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::TransformError;
use crate::taxonomy::{Bct, ClassKind, ClassNode, DecisionRainforest};

/// Replaces BCT `id` by a BCT of auxiliary superclasses, one per group,
/// each conditioning a BCT with the group's classes. A group of one class
/// keeps that class in the upper BCT. Without `grouping`, classes are
/// chunked in declaration order into `ceil(n / max_classes)` balanced
/// groups named `<id>_group_<k>`. Any resulting BCT still above
/// `max_classes` is split again by chunking.
pub fn split_bct(
    forest: &DecisionRainforest,
    id: &str,
    max_classes: usize,
    grouping: Option<&BTreeMap<String, String>>,
) -> Result<DecisionRainforest, TransformError> {
    if max_classes < 2 {
        return Err(TransformError::InvalidGrouping(format!("max_classes must be at least 2, got {max_classes}")));
    }
    let bct = forest.find_bct(id).ok_or_else(|| TransformError::UnknownBct(String::from(id)))?.bct;
    let mut out = forest.clone();
    match grouping {
        Some(grouping) => {
            let groups = explicit_groups(bct, grouping)?;
            let taken = taken_names(forest);
            for (name, members) in &groups {
                if members.len() > 1 && taken.contains(name.as_str()) {
                    return Err(TransformError::InvalidGrouping(format!("group name `{name}` is already in use")));
                }
            }
            apply(&mut out, id, groups);
        }
        None if bct.classes.len() <= max_classes => return Ok(out),
        None => chunk(&mut out, id, max_classes),
    }
    split_oversized_in_place(&mut out, max_classes);
    Ok(out)
}

/// Splits every BCT with more than `max_classes` classes.
pub fn split_oversized(forest: &DecisionRainforest, max_classes: usize) -> Result<DecisionRainforest, TransformError> {
    if max_classes < 2 {
        return Err(TransformError::InvalidGrouping(format!("max_classes must be at least 2, got {max_classes}")));
    }
    let mut out = forest.clone();
    split_oversized_in_place(&mut out, max_classes);
    Ok(out)
}

fn split_oversized_in_place(forest: &mut DecisionRainforest, max_classes: usize) {
    loop {
        let next = forest.bcts().iter().find(|b| b.bct.classes.len() > max_classes).map(|b| b.bct.id.clone());
        match next {
            Some(id) => chunk(forest, &id, max_classes),
            None => return,
        }
    }
}

fn explicit_groups(
    bct: &Bct,
    grouping: &BTreeMap<String, String>,
) -> Result<Vec<(String, Vec<String>)>, TransformError> {
    let members: BTreeSet<&str> = bct.class_names().collect();
    if let Some(unknown) = grouping.keys().find(|k| !members.contains(k.as_str())) {
        return Err(TransformError::InvalidGrouping(format!("`{unknown}` is not a class of BCT `{}`", bct.id)));
    }
    let mut groups: Vec<(String, Vec<String>)> = Vec::new();
    for class in bct.class_names() {
        let group = grouping
            .get(class)
            .ok_or_else(|| TransformError::InvalidGrouping(format!("class `{class}` has no group")))?;
        match groups.iter_mut().find(|(g, _)| g == group) {
            Some((_, m)) => m.push(String::from(class)),
            None => groups.push((group.clone(), alloc::vec![String::from(class)])),
        }
    }
    if groups.len() < 2 {
        return Err(TransformError::InvalidGrouping(format!("BCT `{}` needs at least two groups", bct.id)));
    }
    for (name, members) in &groups {
        if members.len() > 1 && members.iter().any(|m| m == name) {
            return Err(TransformError::InvalidGrouping(format!("group `{name}` is named after one of its members")));
        }
    }
    Ok(groups)
}

fn chunk(forest: &mut DecisionRainforest, id: &str, max_classes: usize) {
    let bct = forest.find_bct(id).expect("BCT exists").bct;
    let names: Vec<String> = bct.class_names().map(String::from).collect();
    let n = names.len();
    let k = n.div_ceil(max_classes);
    let (base, extra) = (n / k, n % k);
    let mut taken = taken_names(forest);
    let mut counter = 0;
    let mut groups = Vec::with_capacity(k);
    let mut rest = names.as_slice();
    for g in 0..k {
        let size = base + usize::from(g < extra);
        let (members, tail) = rest.split_at(size);
        rest = tail;
        let name = loop {
            counter += 1;
            let candidate = format!("{id}_group_{counter}");
            if !taken.contains(&candidate) {
                break candidate;
            }
        };
        taken.insert(name.clone());
        groups.push((name, members.to_vec()));
    }
    apply(forest, id, groups);
}

fn apply(forest: &mut DecisionRainforest, id: &str, groups: Vec<(String, Vec<String>)>) {
    let bct = forest.bct_mut(id).expect("BCT exists");
    let mut pool: Vec<Option<ClassNode>> = core::mem::take(&mut bct.classes).into_iter().map(Some).collect();
    let mut take = |name: &str| {
        pool.iter_mut()
            .find(|c| c.as_ref().is_some_and(|c| c.name == name))
            .and_then(Option::take)
            .expect("grouping covers the BCT")
    };
    let mut classes = Vec::with_capacity(groups.len());
    for (name, members) in groups {
        if members.len() == 1 {
            classes.push(take(&members[0]));
            continue;
        }
        let child = Bct::new(name.clone(), members.iter().map(|m| take(m)).collect());
        classes.push(ClassNode::new(name, ClassKind::AuxiliarySuperclass).with_child(child));
    }
    bct.classes = classes;
}

fn taken_names(forest: &DecisionRainforest) -> BTreeSet<String> {
    let mut taken: BTreeSet<String> = forest.classes().into_iter().map(|(c, _)| c.name.clone()).collect();
    taken.extend(forest.trees.iter().map(|t| t.name.clone()));
    taken.extend(forest.bcts().into_iter().map(|b| b.bct.id.clone()));
    taken
}
