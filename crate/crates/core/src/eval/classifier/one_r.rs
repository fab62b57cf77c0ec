use super::{argmax, Classifier, TrainingSet};
use crate::dataset::{AttributeKind, Value};

/// Upper bound on the equal-frequency bins of a numeric attribute.
pub const ONER_MAX_BINS: usize = 6;
/// Minimum records per bin; fewer records mean fewer bins.
pub const ONER_MIN_BUCKET: usize = 3;

/// A one-attribute rule table: the attribute whose value-to-majority-class
/// mapping makes the fewest training errors.
#[derive(Debug, Clone, PartialEq)]
pub struct OneR {
    /// `None` when no attribute is usable; the model then predicts `default`.
    pub attribute: Option<usize>,
    rule: Rule,
    /// Training majority class.
    pub default: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Rule {
    Constant,
    /// Class per domain value; missing cells take the class of the most
    /// populated value.
    Nominal { classes: Vec<usize>, missing: usize },
    /// Bins split at `cuts` (a value `x` falls in the first bin whose cut
    /// is `>= x`), one class per bin.
    Numeric {
        cuts: Vec<f64>,
        classes: Vec<usize>,
        missing: usize,
    },
}

struct Candidate {
    rule: Rule,
    errors: usize,
}

impl OneR {
    pub(crate) fn fit(train: &TrainingSet<'_>) -> Self {
        let default = argmax(&train.class_counts());
        let mut best: Option<(usize, Candidate)> = None;
        for attribute in train.features() {
            let candidate = match &train.data.schema().attributes()[attribute].kind {
                AttributeKind::Nominal(values) => nominal_rule(train, attribute, values.len(), default),
                AttributeKind::Numeric => numeric_rule(train, attribute),
                AttributeKind::String => None,
            };
            if let Some(c) = candidate {
                if best.as_ref().is_none_or(|(_, b)| c.errors < b.errors) {
                    best = Some((attribute, c));
                }
            }
        }
        match best {
            Some((attribute, c)) => Self {
                attribute: Some(attribute),
                rule: c.rule,
                default,
            },
            None => Self {
                attribute: None,
                rule: Rule::Constant,
                default,
            },
        }
    }

    /// Training errors are not kept; this reports the number of rule branches.
    pub fn branches(&self) -> usize {
        match &self.rule {
            Rule::Constant => 1,
            Rule::Nominal { classes, .. } | Rule::Numeric { classes, .. } => classes.len(),
        }
    }
}

/// Class counts of the rows whose attribute is missing.
fn missing_counts(train: &TrainingSet<'_>, attribute: usize) -> Vec<usize> {
    let mut counts = vec![0; train.n_classes];
    for &(r, c) in &train.rows {
        if train.value(r, attribute).is_missing() {
            counts[c] += 1;
        }
    }
    counts
}

/// Index of the branch holding the most training rows, first on ties.
fn fullest(branches: &[Vec<usize>]) -> usize {
    let sizes: Vec<usize> = branches.iter().map(|b| b.iter().sum()).collect();
    argmax(&sizes)
}

fn score(branches: &[Vec<usize>], classes: &[usize], missing: &[usize], missing_class: usize) -> usize {
    let branch_errors: usize = branches
        .iter()
        .zip(classes)
        .map(|(b, &c)| b.iter().sum::<usize>() - b[c])
        .sum();
    branch_errors + missing.iter().sum::<usize>() - missing[missing_class]
}

fn nominal_rule(train: &TrainingSet<'_>, attribute: usize, domain_len: usize, default: usize) -> Option<Candidate> {
    let mut branches = vec![vec![0usize; train.n_classes]; domain_len];
    let mut seen = false;
    for &(r, c) in &train.rows {
        if let Value::Nominal(v) = train.value(r, attribute) {
            branches[*v][c] += 1;
            seen = true;
        }
    }
    if !seen {
        return None;
    }
    let classes: Vec<usize> = branches
        .iter()
        .map(|b| if b.iter().sum::<usize>() == 0 { default } else { argmax(b) })
        .collect();
    let missing_class = classes[fullest(&branches)];
    let missing = missing_counts(train, attribute);
    let errors = score(&branches, &classes, &missing, missing_class);
    Some(Candidate {
        rule: Rule::Nominal {
            classes,
            missing: missing_class,
        },
        errors,
    })
}

fn numeric_rule(train: &TrainingSet<'_>, attribute: usize) -> Option<Candidate> {
    let mut points: Vec<(f64, usize)> = train
        .rows
        .iter()
        .filter_map(|&(r, c)| train.value(r, attribute).as_number().map(|x| (x, c)))
        .collect();
    if points.is_empty() {
        return None;
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = points.len();
    let bins = (n / ONER_MIN_BUCKET).clamp(1, ONER_MAX_BINS);

    // Equal-frequency boundaries, nudged forward so equal values share a bin.
    let mut boundaries: Vec<usize> = Vec::with_capacity(bins);
    for i in 1..bins {
        let mut p = i * n / bins;
        while p < n && points[p - 1].0 == points[p].0 {
            p += 1;
        }
        if p < n && boundaries.last().is_none_or(|&last| p > last) {
            boundaries.push(p);
        }
    }
    let cuts: Vec<f64> = boundaries
        .iter()
        .map(|&p| points[p - 1].0 + (points[p].0 - points[p - 1].0) / 2.0)
        .collect();

    let mut branches = vec![vec![0usize; train.n_classes]; cuts.len() + 1];
    for &(x, c) in &points {
        branches[bin_of(&cuts, x)][c] += 1;
    }
    let classes: Vec<usize> = branches.iter().map(|b| argmax(b)).collect();
    let missing_class = classes[fullest(&branches)];
    let missing = missing_counts(train, attribute);
    let errors = score(&branches, &classes, &missing, missing_class);
    Some(Candidate {
        rule: Rule::Numeric {
            cuts,
            classes,
            missing: missing_class,
        },
        errors,
    })
}

fn bin_of(cuts: &[f64], x: f64) -> usize {
    cuts.partition_point(|&c| c < x)
}

impl Classifier for OneR {
    fn predict(&self, record: &[Value]) -> usize {
        let Some(attribute) = self.attribute else {
            return self.default;
        };
        match (&self.rule, &record[attribute]) {
            (Rule::Constant, _) => self.default,
            (Rule::Nominal { classes, .. }, Value::Nominal(v)) => classes.get(*v).copied().unwrap_or(self.default),
            (Rule::Numeric { cuts, classes, .. }, Value::Number(x)) => classes[bin_of(cuts, *x)],
            (Rule::Nominal { missing, .. } | Rule::Numeric { missing, .. }, _) => *missing,
        }
    }
}
