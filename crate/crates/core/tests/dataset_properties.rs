mod oracle;

use std::collections::BTreeSet;

use multiplex_core::dataset::synthetic::{inject_conflict, sample_assignment};
use multiplex_core::dataset::{
    clean_labels, emit_prepared, expand_ancestors, impute_exclusions, sampling_weights, DatasetRow, PreparedFormat,
    SamplingMode,
};
use multiplex_core::fixtures;
use multiplex_core::taxonomy::{compute_model_plan, Dubt};
use multiplex_core::transform::build_dubt;
use oracle::consistent;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn multicare() -> Dubt {
    build_dubt(&fixtures::multicare()).unwrap()
}

fn random_rows(dubt: &Dubt) -> impl Strategy<Value = Vec<DatasetRow>> {
    let names: Vec<String> = dubt.nodes().iter().map(|n| n.name.clone()).collect();
    proptest::collection::vec(proptest::sample::subsequence(names.clone(), 0..5), 1..40).prop_map(|sets| {
        sets.into_iter().enumerate().map(|(i, labels)| DatasetRow::new(format!("r{i}"), labels)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cleaning_is_consistent_idempotent_and_conservative(rows in random_rows(&multicare())) {
        let dubt = multicare();
        let (cleaned, report) = clean_labels(&rows, &dubt).unwrap();
        prop_assert!(report.rows_affected <= report.rows_total);
        for (before, after) in rows.iter().zip(&cleaned) {
            prop_assert!(consistent(&after.labels, &dubt), "{:?}", after.labels);
            for label in &before.labels {
                let compatible = before.labels.iter().all(|o| !dubt.incompatible(label, o).unwrap());
                if compatible {
                    prop_assert!(after.labels.contains(label), "{} dropped from {:?}", label, before.labels);
                }
            }
        }
        let (again, second) = clean_labels(&cleaned, &dubt).unwrap();
        prop_assert_eq!(again, cleaned);
        prop_assert_eq!(second.rows_affected, 0);
    }

    #[test]
    fn imputation_is_consistent_and_idempotent(rows in random_rows(&multicare())) {
        let dubt = multicare();
        let (cleaned, _) = clean_labels(&rows, &dubt).unwrap();
        let exclusions = ["no_angiography", "other_ultrasound"];
        let imputed = impute_exclusions(&cleaned, &dubt, &exclusions).unwrap();
        for row in &imputed {
            prop_assert!(consistent(&row.labels, &dubt));
        }
        prop_assert_eq!(impute_exclusions(&imputed, &dubt, &exclusions).unwrap(), imputed);
    }

    #[test]
    fn multiplex_formats_are_lossless(rows in random_rows(&multicare())) {
        let forest = fixtures::multicare();
        let dubt = build_dubt(&forest).unwrap();
        let plan = compute_model_plan(&forest).unwrap();
        let (cleaned, _) = clean_labels(&rows, &dubt).unwrap();
        for format in [PreparedFormat::Multiplex, PreparedFormat::MultiplexWithoutMerging, PreparedFormat::Multilabel] {
            let prepared = emit_prepared(&cleaned, &dubt, &plan, format).unwrap();
            for (i, row) in cleaned.iter().enumerate() {
                let cells: BTreeSet<String> = prepared.columns.iter().flat_map(|c| c.cells[i].iter().cloned()).collect();
                prop_assert_eq!(&expand_ancestors(&cells, &dubt).unwrap(), &row.labels);
            }
        }
    }

    #[test]
    fn optimized_weights_sum_to_row_count(rows in random_rows(&multicare())) {
        let dubt = multicare();
        let (cleaned, _) = clean_labels(&rows, &dubt).unwrap();
        let weights = sampling_weights(&cleaned, &dubt, SamplingMode::Optimized).unwrap();
        let sum: f64 = weights.values().sum();
        prop_assert!((sum - cleaned.len() as f64).abs() < 1e-9);
        prop_assert!(weights.values().all(|w| w.is_finite() && *w > 0.0));
    }
}

#[test]
fn injected_conflicts_give_exact_rate() {
    let dubt = multicare();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let rows: Vec<DatasetRow> = (0..2000)
        .map(|i| {
            let mut labels = sample_assignment(&dubt, &mut rng);
            if i % 20 == 0 {
                assert!(inject_conflict(&mut labels, &dubt, &mut rng));
            }
            DatasetRow::new(format!("r{i}"), labels)
        })
        .collect();
    let (_, report) = clean_labels(&rows, &dubt).unwrap();
    assert_eq!(report.rows_affected, 100);
    assert_eq!(report.affected_rate(), 0.05);
}
