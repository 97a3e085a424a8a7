//! Random label sets drawn from a compiled taxonomy.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::name::ROOT;
use crate::taxonomy::Dubt;

/// A complete consistent assignment: one member of every reached group,
/// chosen uniformly, starting from the root.
pub fn sample_assignment<R: Rng + ?Sized>(dubt: &Dubt, rng: &mut R) -> BTreeSet<String> {
    let mut labels = BTreeSet::new();
    let mut frontier: Vec<&str> = alloc::vec![ROOT];
    while let Some(class) = frontier.pop() {
        for group in dubt.groups_under(class) {
            let chosen = group.members.choose(rng).expect("groups have members");
            labels.insert(chosen.clone());
            frontier.push(chosen);
        }
    }
    labels
}

/// Adds to `labels` a sibling of one of its labels, which makes the set
/// inconsistent. Returns `false` when no label has a sibling.
pub fn inject_conflict<R: Rng + ?Sized>(labels: &mut BTreeSet<String>, dubt: &Dubt, rng: &mut R) -> bool {
    let candidates: Vec<(&String, Vec<&String>)> = labels
        .iter()
        .filter_map(|l| {
            let group = dubt.group_of(l)?;
            let others: Vec<&String> = group.members.iter().filter(|m| *m != l).collect();
            (!others.is_empty()).then_some((l, others))
        })
        .collect();
    let Some((_, others)) = candidates.choose(rng) else { return false };
    let extra = (*others.choose(rng).expect("non-empty")).clone();
    labels.insert(extra);
    true
}
