use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::EvalError;
use crate::dataset::{Dataset, Value};
use crate::transform::{group_by_position, TransformError};

/// Record index to fold index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    k: usize,
    fold_of: Vec<usize>,
}

impl FoldAssignment {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn fold_of(&self, record: usize) -> usize {
        self.fold_of[record]
    }

    pub fn assignments(&self) -> &[usize] {
        &self.fold_of
    }

    pub fn len(&self) -> usize {
        self.fold_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fold_of.is_empty()
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&r| self.fold_of[r] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&r| self.fold_of[r] != fold).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.fold_of {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Stratum of a record: its class index, or one past the last class when
/// the class is missing.
fn strata(dataset: &Dataset, class: usize) -> (Vec<usize>, usize) {
    let n_classes = dataset.schema().attributes()[class]
        .domain()
        .map_or(0, <[String]>::len);
    let strata = dataset
        .records()
        .iter()
        .map(|r| match r[class] {
            Value::Nominal(c) => c,
            _ => n_classes,
        })
        .collect();
    (strata, n_classes + 1)
}

/// Stratified k-fold assignment, optionally keeping groups intact.
///
/// Without `group_by`, records are shuffled with `seed`, ordered by class
/// and dealt round-robin, so every fold holds within one record of its share
/// of each class. With `group_by`, whole groups are placed greedily, largest
/// first (equal sizes in seeded order), each into the fold whose squared
/// deviation from the target fold size and target class counts grows least.
/// Group stratification is best-effort.
pub fn group_stratified_folds(
    dataset: &Dataset,
    class: &str,
    k: usize,
    group_by: Option<&str>,
    seed: u64,
) -> Result<FoldAssignment, EvalError> {
    let schema = dataset.schema();
    let class_pos = schema
        .position(class)
        .ok_or_else(|| EvalError::UnknownAttribute(class.to_string()))?;
    if !schema.attributes()[class_pos].is_nominal() {
        return Err(EvalError::ClassNotNominal(class.to_string()));
    }
    if k < 2 {
        return Err(EvalError::TooFewFolds(k));
    }
    let (strata, n_strata) = strata(dataset, class_pos);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let Some(group_name) = group_by else {
        let n = dataset.len();
        if k > n {
            return Err(EvalError::TooManyFolds {
                k,
                available: n,
                unit: "records",
            });
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        order.sort_by_key(|&r| strata[r]);
        let mut fold_of = vec![0; n];
        for (pos, &r) in order.iter().enumerate() {
            fold_of[r] = pos % k;
        }
        return Ok(FoldAssignment { k, fold_of });
    };

    let group_pos = schema
        .position(group_name)
        .ok_or_else(|| EvalError::UnknownAttribute(group_name.to_string()))?;
    let groups = group_by_position(dataset, group_pos).map_err(|e| match e {
        TransformError::MissingPivot { record } => EvalError::MissingGroupValue(record),
        other => EvalError::UnknownAttribute(other.to_string()),
    })?;
    if k > groups.len() {
        return Err(EvalError::TooManyFolds {
            k,
            available: groups.len(),
            unit: "groups",
        });
    }

    let histograms: Vec<Vec<usize>> = groups
        .iter()
        .map(|g| {
            let mut h = vec![0; n_strata];
            for &r in &g.members {
                h[strata[r]] += 1;
            }
            h
        })
        .collect();
    let mut totals = vec![0usize; n_strata];
    for h in &histograms {
        for (t, c) in totals.iter_mut().zip(h) {
            *t += c;
        }
    }
    let target_size = dataset.len() as f64 / k as f64;
    let target_class: Vec<f64> = totals.iter().map(|&t| t as f64 / k as f64).collect();

    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.shuffle(&mut rng);
    order.sort_by(|&a, &b| groups[b].len().cmp(&groups[a].len()));

    let mut size = vec![0usize; k];
    let mut class_counts = vec![vec![0usize; n_strata]; k];
    let mut fold_of = vec![0; dataset.len()];
    let mut empty_folds = k;
    for (placed, &g) in order.iter().enumerate() {
        let remaining = groups.len() - placed;
        let must_fill = remaining <= empty_folds;
        let g_size = groups[g].len() as f64;
        let mut best: Option<(usize, f64)> = None;
        for f in 0..k {
            if must_fill && size[f] > 0 {
                continue;
            }
            // Growth of (s - T)^2, counted twice so fold sizes dominate
            // single-class imbalance, plus growth of (n_c - T_c)^2.
            let size_growth = g_size * (2.0 * (size[f] as f64 - target_size) + g_size);
            let class_growth: f64 = histograms[g]
                .iter()
                .zip(&class_counts[f])
                .zip(&target_class)
                .filter(|((&gc, _), _)| gc > 0)
                .map(|((&gc, &fc), &tc)| gc as f64 * (2.0 * (fc as f64 - tc) + gc as f64))
                .sum();
            let cost = 2.0 * size_growth + class_growth;
            if best.is_none_or(|(_, c)| cost < c) {
                best = Some((f, cost));
            }
        }
        let (fold, _) = best.expect("at least one candidate fold");
        if size[fold] == 0 {
            empty_folds -= 1;
        }
        size[fold] += groups[g].len();
        for (fc, gc) in class_counts[fold].iter_mut().zip(&histograms[g]) {
            *fc += gc;
        }
        for &r in &groups[g].members {
            fold_of[r] = fold;
        }
    }
    Ok(FoldAssignment { k, fold_of })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{parse_arff, AttributeSpec, Schema};
    use proptest::prelude::*;

    fn grouped(keys: &[usize], classes: &[usize]) -> Dataset {
        let schema = Schema::new(vec![AttributeSpec::string("g"), AttributeSpec::nominal("c", ["a", "b"])]).unwrap();
        let rows = keys
            .iter()
            .zip(classes)
            .map(|(k, c)| vec![Value::text(&k.to_string()), Value::Nominal(*c)])
            .collect();
        Dataset::new("t", schema, rows).unwrap()
    }

    #[test]
    fn two_groups_two_folds_is_forced() {
        let ds = grouped(&[0, 0, 0, 0, 1, 1, 1, 1], &[0, 0, 0, 0, 0, 0, 1, 1]);
        let folds = group_stratified_folds(&ds, "c", 2, Some("g"), 5).unwrap();
        let a = folds.fold_of(0);
        assert!((0..4).all(|r| folds.fold_of(r) == a));
        assert!((4..8).all(|r| folds.fold_of(r) == 1 - a));
    }

    #[test]
    fn singleton_groups_balance_like_pigeonholes() {
        let classes: Vec<usize> = (0..48).map(|i| usize::from(i % 5 < 3)).collect();
        let ds = grouped(&(0..48).collect::<Vec<_>>(), &classes);
        for seed in 0..20 {
            let mut sizes = group_stratified_folds(&ds, "c", 10, Some("g"), seed).unwrap().sizes();
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(sizes, [5, 5, 5, 5, 5, 5, 5, 5, 4, 4]);
            let mut plain = group_stratified_folds(&ds, "c", 10, None, seed).unwrap().sizes();
            plain.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(plain, [5, 5, 5, 5, 5, 5, 5, 5, 4, 4]);
        }
    }

    #[test]
    fn plain_mode_is_stratified_within_one() {
        let classes: Vec<usize> = (0..103).map(|i| usize::from(i % 7 < 2)).collect();
        let ds = grouped(&(0..103).collect::<Vec<_>>(), &classes);
        let folds = group_stratified_folds(&ds, "c", 10, None, 9).unwrap();
        for c in 0..2 {
            let total = classes.iter().filter(|&&x| x == c).count() as f64;
            for f in 0..10 {
                let n = folds.test_indices(f).iter().filter(|&&r| classes[r] == c).count() as f64;
                assert!((n - total / 10.0).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn errors() {
        let ds = grouped(&[0, 0, 1, 1], &[0, 1, 0, 1]);
        assert!(matches!(
            group_stratified_folds(&ds, "c", 3, Some("g"), 0),
            Err(EvalError::TooManyFolds { k: 3, available: 2, .. })
        ));
        assert!(matches!(group_stratified_folds(&ds, "c", 1, None, 0), Err(EvalError::TooFewFolds(1))));
        assert!(matches!(
            group_stratified_folds(&ds, "c", 2, Some("x"), 0),
            Err(EvalError::UnknownAttribute(_))
        ));
        let missing = parse_arff("@attribute g string\n@attribute c {a}\n@data\nx,a\n?,a\n").unwrap();
        assert_eq!(
            group_stratified_folds(&missing, "c", 2, Some("g"), 0),
            Err(EvalError::MissingGroupValue(1))
        );
    }

    proptest! {
        #[test]
        fn groups_never_span_folds(
            assignments in proptest::collection::vec((0usize..30, 0usize..2), 10..300),
            k in 2usize..6,
            seed in any::<u64>(),
        ) {
            let keys: Vec<usize> = assignments.iter().map(|a| a.0).collect();
            let classes: Vec<usize> = assignments.iter().map(|a| a.1).collect();
            let ds = grouped(&keys, &classes);
            let n_groups = keys.iter().collect::<std::collections::HashSet<_>>().len();
            prop_assume!(k <= n_groups);
            let folds = group_stratified_folds(&ds, "c", k, Some("g"), seed).unwrap();
            prop_assert_eq!(folds.len(), keys.len());
            let mut fold_of_key = std::collections::HashMap::new();
            for (r, key) in keys.iter().enumerate() {
                let f = folds.fold_of(r);
                prop_assert!(f < k);
                prop_assert_eq!(*fold_of_key.entry(key).or_insert(f), f);
            }
            prop_assert!(folds.sizes().iter().all(|&s| s > 0));
            prop_assert_eq!(&folds, &group_stratified_folds(&ds, "c", k, Some("g"), seed).unwrap());
        }
    }
}
