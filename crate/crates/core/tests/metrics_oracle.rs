mod oracle;

use std::collections::BTreeMap;

use multiplex_core::metrics::{per_class_f1, Averages};
use oracle::{confusion, f1_from_counts, LabelSet};
use proptest::prelude::*;

fn label_sets(classes: usize, instances: usize) -> impl Strategy<Value = BTreeMap<String, LabelSet>> {
    let names: Vec<String> = (0..classes).map(|c| format!("k{c}")).collect();
    proptest::collection::vec(proptest::sample::subsequence(names, 0..=classes), instances).prop_map(|sets| {
        sets.into_iter().enumerate().map(|(i, s)| (format!("i{i}"), s.into_iter().collect())).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn per_class_counts_match_brute_force((pred, truth) in (1usize..12).prop_flat_map(|n| (label_sets(5, n), label_sets(5, n)))) {
        let classes: Vec<String> = (0..6).map(|c| format!("k{c}")).collect();
        let metrics = per_class_f1(&pred, &truth, &classes).unwrap();
        for m in &metrics {
            let (tp, fp, fn_) = confusion(&pred, &truth, &m.class);
            prop_assert_eq!((m.tp, m.fp, m.fn_), (tp, fp, fn_));
            prop_assert!((m.f1 - f1_from_counts(tp, fp, fn_)).abs() < 1e-12);
        }
        let avg = Averages::of(&metrics);
        let pooled = metrics.iter().fold((0, 0, 0), |a, m| (a.0 + m.tp, a.1 + m.fp, a.2 + m.fn_));
        prop_assert!((avg.micro_f1 - f1_from_counts(pooled.0, pooled.1, pooled.2)).abs() < 1e-12);
    }
}
