mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sppam::dataset::{parse_arff, parse_csv, write_arff, write_csv, AttributeKind, CsvOptions, Dataset, Value};
use sppam::eval::{
    classification_metrics, corrected_t_test, fit, group_stratified_folds, ClassifierKind, ConfusionMatrix, Model,
};
use sppam::{attribute_count, derive_output_schema, transform};

fn csv_options(ds: &Dataset) -> CsvOptions {
    let mut options = CsvOptions {
        relation: ds.relation().to_string(),
        ..CsvOptions::default()
    };
    for attr in ds.schema() {
        match &attr.kind {
            AttributeKind::String => options.string_columns.push(attr.name.clone()),
            AttributeKind::Nominal(values) => options = options.declare_domain(&attr.name, values.iter().cloned()),
            AttributeKind::Numeric => {}
        }
    }
    options
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn transform_agrees_with_oracle(seed in any::<u64>(), records in 0usize..50, groups in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (schema, config) = random_schema(&mut rng);
        let ds = random_dataset(&mut rng, &schema, records, groups, 0.2);
        let out = transform(&ds, &config).unwrap().dataset;
        let expected = oracle_transform(&ds, "key", "cls");
        prop_assert_eq!(out.len(), expected.len());
        for (got, want) in out.records().iter().zip(&expected) {
            prop_assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(want) {
                prop_assert!(cells_match(g, w, 1e-9), "{:?} vs {:?}", g, w);
            }
        }
    }

    #[test]
    fn aggregates_are_permutation_invariant(seed in any::<u64>(), records in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (schema, config) = random_schema(&mut rng);
        let ds = random_dataset(&mut rng, &schema, records, 4, 0.2);
        let mut rows = ds.records().to_vec();
        rows.shuffle(&mut rng);
        let shuffled = Dataset::new("random", schema.clone(), rows).unwrap();
        let a = transform(&ds, &config).unwrap().dataset;
        let b = transform(&shuffled, &config).unwrap().dataset;
        let out_schema = a.schema();
        let order_free: Vec<usize> = out_schema
            .iter()
            .enumerate()
            .filter(|(_, attr)| ["_MAX", "_MIN", "_AVG", "_PERC"].iter().any(|s| attr.name.ends_with(s)))
            .map(|(i, _)| i)
            .collect();
        let key = |d: &Dataset, r: usize| d.cell_text(r, out_schema.position("key").unwrap()).into_owned();
        for r in 0..a.len() {
            let other = (0..b.len()).find(|&s| key(&b, s) == key(&a, r)).unwrap();
            for &i in &order_free {
                prop_assert!(cells_match(&a.record(r)[i], &b.record(other)[i], 1e-9));
            }
        }
    }

    #[test]
    fn arff_round_trip(seed in any::<u64>(), records in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (schema, _) = random_schema(&mut rng);
        let ds = random_dataset(&mut rng, &schema, records, 6, 0.15);
        let text = write_arff(&ds, None);
        let back = parse_arff(&text).unwrap();
        prop_assert_eq!(&back, &ds);
        prop_assert_eq!(write_arff(&back, None), text);
    }

    #[test]
    fn csv_round_trip(seed in any::<u64>(), records in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (schema, _) = random_schema(&mut rng);
        let ds = random_dataset(&mut rng, &schema, records, 6, 0.15);
        let back = parse_csv(&write_csv(&ds, None), &csv_options(&ds)).unwrap();
        prop_assert_eq!(back, ds);
    }

    #[test]
    fn count_matches_derived_schema(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (schema, config) = random_schema(&mut rng);
        prop_assert_eq!(
            attribute_count(&schema, &config).unwrap(),
            derive_output_schema(&schema, &config).unwrap().len()
        );
    }

    #[test]
    fn grouped_folds_partition_records(seed in any::<u64>(), records in 10usize..400, groups in 5usize..60, k in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (schema, _) = random_schema(&mut rng);
        let ds = random_dataset(&mut rng, &schema, records, groups, 0.1);
        let distinct = sppam::transform::group_records(&ds, "key").unwrap().len();
        prop_assume!(k <= distinct);
        let folds = group_stratified_folds(&ds, "cls", k, Some("key"), seed).unwrap();
        prop_assert_eq!(folds.len(), ds.len());
        prop_assert!(folds.sizes().iter().all(|&s| s > 0));
        for g in sppam::transform::group_records(&ds, "key").unwrap() {
            let f = folds.fold_of(g.members[0]);
            prop_assert!(g.members.iter().all(|&r| folds.fold_of(r) == f));
        }
        prop_assert_eq!(folds, group_stratified_folds(&ds, "cls", k, Some("key"), seed).unwrap());
    }

    #[test]
    fn naive_bayes_matches_brute_force(seed in any::<u64>(), records in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (schema, _) = random_schema(&mut rng);
        let ds = random_dataset(&mut rng, &schema, records, 5, 0.2);
        let class = schema.position("cls").unwrap();
        let rows: Vec<usize> = (0..ds.len()).filter(|&r| r % 4 != 0 || ds.len() < 4).collect();
        let Ok(Model::NaiveBayes(nb)) = fit(ClassifierKind::NaiveBayes, &ds, &rows, class) else {
            // Every training class was missing.
            return Ok(());
        };
        for record in ds.records() {
            let got = nb.posterior(record);
            let want = oracle_posterior(&ds, &rows, class, record);
            for (g, w) in got.iter().zip(&want) {
                prop_assert!((g - w).abs() < 1e-9, "{:?} vs {:?}", got, want);
            }
        }
    }

    #[test]
    fn metric_identities(counts in proptest::collection::vec(0u64..50, 9)) {
        let matrix = ConfusionMatrix::from_counts(
            vec!["a".into(), "b".into(), "c".into()],
            counts.chunks(3).map(<[u64]>::to_vec).collect(),
        );
        prop_assume!(matrix.total() > 0);
        let m = classification_metrics(&matrix).unwrap();
        prop_assert!((0.0..=100.0).contains(&m.cci));
        prop_assert!(m.kappa <= 1.0 + 1e-12);
        let max_f = m.per_class.iter().map(|c| c.f_measure).fold(0.0, f64::max);
        prop_assert!(m.macro_avg.f_measure <= max_f + 1e-12);
        let total = matrix.total() as f64;
        let weighted_recall: f64 = (0..3)
            .map(|i| matrix.counts()[i].iter().sum::<u64>() as f64 / total * m.per_class[i].recall)
            .sum();
        prop_assert!((m.cci - 100.0 * weighted_recall).abs() < 1e-9);
    }

    #[test]
    fn single_column_kappa_is_zero(col in 0usize..3, counts in proptest::collection::vec(0u64..50, 3)) {
        prop_assume!(counts.iter().sum::<u64>() > 0);
        let rows = (0..3).map(|i| {
            let mut row = vec![0; 3];
            row[col] = counts[i];
            row
        }).collect();
        let m = classification_metrics(&ConfusionMatrix::from_counts(vec!["a".into(), "b".into(), "c".into()], rows)).unwrap();
        prop_assert_eq!(m.kappa, 0.0);
    }

    #[test]
    fn t_test_symmetry_and_offset(a in proptest::collection::vec(0.0f64..100.0, 2..30), shift in -50.0f64..50.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = a.clone();
        b.shuffle(&mut rng);
        let ab = corrected_t_test(&a, &b, 0.1, 0.05).unwrap();
        let ba = corrected_t_test(&b, &a, 0.1, 0.05).unwrap();
        prop_assert!((ab.t + ba.t).abs() < 1e-9 * ab.t.abs().max(1.0));
        prop_assert_eq!(ab.verdict, ba.verdict.flip());
        let a2: Vec<f64> = a.iter().map(|x| x + shift).collect();
        let b2: Vec<f64> = b.iter().map(|x| x + shift).collect();
        let shifted = corrected_t_test(&a2, &b2, 0.1, 0.05).unwrap();
        prop_assert!((shifted.t - ab.t).abs() < 1e-6 * ab.t.abs().max(1.0));
    }
}

#[test]
fn wind_example_round_trips_and_transforms() {
    let ds = parse_arff(WIND_INPUT).unwrap();
    assert_eq!(parse_arff(&write_arff(&ds, None)).unwrap(), ds);
    let out = transform(&ds, &sppam::TransformConfig::new("Date", "Surf")).unwrap();
    assert_eq!(data_section(&write_arff(&out.dataset, Some(2))), WIND_OUTPUT_DATA);
    assert_eq!(out.dataset.schema().len(), 15);
}

#[test]
fn transformed_csv_reparses() {
    let ds = parse_arff(WIND_INPUT).unwrap();
    let out = transform(&ds, &sppam::TransformConfig::new("Date", "Surf")).unwrap().dataset;
    let text = write_csv(&out, Some(2));
    assert!(text.starts_with("Date,Wind_Knots_MAX,"));
    let options = CsvOptions::with_keys("Date", None, "Surf");
    let back = parse_csv(&text, &options).unwrap();
    assert_eq!(back.len(), 2);
    assert_eq!(back.record(1)[3], Value::Number(14.13));
}
