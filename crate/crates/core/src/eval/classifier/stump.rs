use super::{argmax, errors, Classifier, TrainingSet};
use crate::dataset::{AttributeKind, Value};

/// One binary split minimising training misclassifications.
///
/// Numeric attributes split at `x <= threshold`, nominal ones at
/// `x == value`. Records with a missing split attribute follow the branch
/// that received more training records.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionStump {
    split: Option<Split>,
    /// Majority class, used when no split exists.
    pub leaf: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Split {
    attribute: usize,
    test: Test,
    /// Class when the test holds.
    left: usize,
    /// Class when it does not.
    right: usize,
    missing_left: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Test {
    AtMost(f64),
    Equals(usize),
}

struct Scored {
    errors: usize,
    left: usize,
    right: usize,
    missing_left: bool,
}

fn add(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Scores a split given the class counts on each side and of missing rows.
fn score(left: &[usize], right: &[usize], missing: &[usize]) -> Scored {
    let missing_left = left.iter().sum::<usize>() >= right.iter().sum::<usize>();
    let (l, r) = if missing_left {
        (add(left, missing), right.to_vec())
    } else {
        (left.to_vec(), add(right, missing))
    };
    Scored {
        errors: errors(&l) + errors(&r),
        left: argmax(&l),
        right: argmax(&r),
        missing_left,
    }
}

impl DecisionStump {
    pub(crate) fn fit(train: &TrainingSet<'_>) -> Self {
        let totals = train.class_counts();
        let leaf = argmax(&totals);
        let mut best: Option<(usize, Split)> = None;
        let mut consider = |scored: Scored, attribute: usize, test: Test| {
            if best.as_ref().is_none_or(|(e, _)| scored.errors < *e) {
                best = Some((
                    scored.errors,
                    Split {
                        attribute,
                        test,
                        left: scored.left,
                        right: scored.right,
                        missing_left: scored.missing_left,
                    },
                ));
            }
        };

        for attribute in train.features() {
            let mut missing = vec![0usize; train.n_classes];
            match &train.data.schema().attributes()[attribute].kind {
                AttributeKind::Numeric => {
                    let mut points: Vec<(f64, usize)> = Vec::with_capacity(train.rows.len());
                    for &(r, c) in &train.rows {
                        match train.value(r, attribute).as_number() {
                            Some(x) => points.push((x, c)),
                            None => missing[c] += 1,
                        }
                    }
                    points.sort_by(|a, b| a.0.total_cmp(&b.0));
                    let present = add(&totals, &vec![0; train.n_classes]);
                    let present: Vec<usize> = present.iter().zip(&missing).map(|(t, m)| t - m).collect();
                    let mut left = vec![0usize; train.n_classes];
                    for i in 0..points.len().saturating_sub(1) {
                        left[points[i].1] += 1;
                        if points[i].0 == points[i + 1].0 {
                            continue;
                        }
                        let right: Vec<usize> = present.iter().zip(&left).map(|(p, l)| p - l).collect();
                        let threshold = points[i].0 + (points[i + 1].0 - points[i].0) / 2.0;
                        consider(score(&left, &right, &missing), attribute, Test::AtMost(threshold));
                    }
                }
                AttributeKind::Nominal(values) => {
                    let mut by_value = vec![vec![0usize; train.n_classes]; values.len()];
                    for &(r, c) in &train.rows {
                        match train.value(r, attribute).as_nominal() {
                            Some(v) => by_value[v][c] += 1,
                            None => missing[c] += 1,
                        }
                    }
                    let present: Vec<usize> = totals.iter().zip(&missing).map(|(t, m)| t - m).collect();
                    let n_present: usize = present.iter().sum();
                    for (v, left) in by_value.iter().enumerate() {
                        let n_left: usize = left.iter().sum();
                        if n_left == 0 || n_left == n_present {
                            continue;
                        }
                        let right: Vec<usize> = present.iter().zip(left).map(|(p, l)| p - l).collect();
                        consider(score(left, &right, &missing), attribute, Test::Equals(v));
                    }
                }
                AttributeKind::String => {}
            }
        }
        Self {
            split: best.map(|(_, s)| s),
            leaf,
        }
    }

    /// Attribute position used by the split, if any.
    pub fn attribute(&self) -> Option<usize> {
        self.split.map(|s| s.attribute)
    }
}

impl Classifier for DecisionStump {
    fn predict(&self, record: &[Value]) -> usize {
        let Some(split) = self.split else {
            return self.leaf;
        };
        let goes_left = match (split.test, &record[split.attribute]) {
            (Test::AtMost(t), Value::Number(x)) => *x <= t,
            (Test::Equals(v), Value::Nominal(x)) => *x == v,
            _ => split.missing_left,
        };
        if goes_left {
            split.left
        } else {
            split.right
        }
    }
}
