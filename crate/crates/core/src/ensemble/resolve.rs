use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::taxonomy::{CompoundRule, Dubt, DubtError};

/// Turns flat per-class confidences into a consistent label set: take the
/// most confident undecided class, select it with its ancestors, discard
/// every undecided class incompatible with it, repeat. Duplicate classes
/// keep their highest confidence; ties go to the lexicographically smaller
/// name.
pub fn resolve_constraints(scored: &[(String, f64)], dubt: &Dubt) -> Result<BTreeSet<String>, DubtError> {
    let mut best: BTreeMap<&str, f64> = BTreeMap::new();
    for (class, confidence) in scored {
        if !dubt.contains(class) {
            return Err(DubtError::UnknownClass(class.clone()));
        }
        let entry = best.entry(class.as_str()).or_insert(*confidence);
        if confidence.total_cmp(entry) == Ordering::Greater {
            *entry = *confidence;
        }
    }
    let mut undecided: Vec<(&str, f64)> = best.into_iter().collect();
    undecided.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));

    let mut selected = BTreeSet::new();
    while !undecided.is_empty() {
        let (class, _) = undecided.remove(0);
        let closure = dubt.ancestor_closure(class)?;
        selected.extend(closure.iter().map(|c| String::from(*c)));
        let mut kept = Vec::with_capacity(undecided.len());
        for (other, confidence) in undecided {
            if closure.contains(&other) {
                continue;
            }
            if !dubt.incompatible(class, other)? {
                kept.push((other, confidence));
            }
        }
        undecided = kept;
    }
    Ok(selected)
}

/// Adds every compound class whose components are all present, until no
/// rule fires any more.
pub fn reintroduce_compounds(labels: &BTreeSet<String>, rules: &[CompoundRule]) -> BTreeSet<String> {
    let mut out = labels.clone();
    loop {
        let before = out.len();
        for rule in rules {
            if !out.contains(&rule.compound) && rule.components.iter().all(|c| out.contains(c)) {
                out.insert(rule.compound.clone());
            }
        }
        if out.len() == before {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::transform::build_dubt;
    use alloc::vec;

    fn worked_example() -> Vec<(String, f64)> {
        let order = [
            "ultrasound",
            "x_ray",
            "no_doppler",
            "ct_scan",
            "x_ray",
            "doppler",
            "echocardiogram",
            "other_ultrasound",
            "mri",
        ];
        order.iter().enumerate().map(|(i, c)| (String::from(*c), 1.0 - i as f64 / 10.0)).collect()
    }

    fn set(labels: &[&str]) -> BTreeSet<String> {
        labels.iter().map(|s| String::from(*s)).collect()
    }

    #[test]
    fn confidence_order_worked_example() {
        let dubt = build_dubt(&fixtures::image_modality()).unwrap();
        assert_eq!(
            resolve_constraints(&worked_example(), &dubt).unwrap(),
            set(&["ultrasound", "no_doppler", "echocardiogram"])
        );
    }

    #[test]
    fn single_class_brings_ancestors() {
        let dubt = build_dubt(&fixtures::multicare()).unwrap();
        let out = resolve_constraints(&[("echocardiogram".into(), 0.3)], &dubt).unwrap();
        assert_eq!(out, set(&["echocardiogram", "ultrasound", "radiology"]));
        assert_eq!(resolve_constraints(&[("sonar".into(), 0.3)], &dubt), Err(DubtError::UnknownClass("sonar".into())));
    }

    #[test]
    fn ties_are_lexicographic() {
        let dubt = build_dubt(&fixtures::multicare()).unwrap();
        let out = resolve_constraints(&[("mri".into(), 0.5), ("ct".into(), 0.5)], &dubt).unwrap();
        assert_eq!(out, set(&["ct", "radiology"]));
    }

    #[test]
    fn compounds() {
        let rules = fixtures::doppler_ultrasound().compound_rules;
        assert_eq!(
            reintroduce_compounds(&set(&["doppler", "ultrasound"]), &rules),
            set(&["doppler", "ultrasound", "doppler_ultrasound"])
        );
        assert_eq!(reintroduce_compounds(&set(&["ultrasound"]), &rules), set(&["ultrasound"]));
        let chained = vec![CompoundRule::new("b", ["a", "z"]), CompoundRule::new("a", ["x", "y"])];
        assert_eq!(reintroduce_compounds(&set(&["x", "y", "z"]), &chained), set(&["x", "y", "z", "a", "b"]));
    }
}
