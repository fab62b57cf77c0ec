use super::{Classifier, TrainingSet};
use crate::dataset::{AttributeKind, Value};

/// Lower bound applied to every Gaussian variance.
pub const NB_VARIANCE_FLOOR: f64 = 1e-9;

/// Naive Bayes with Gaussian numeric likelihoods and Laplace-smoothed
/// categorical ones. Missing values are skipped both when fitting and when
/// predicting.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayes {
    log_priors: Vec<f64>,
    features: Vec<Feature>,
}

#[derive(Debug, Clone, PartialEq)]
enum Feature {
    /// Per class (mean, variance).
    Gaussian { attribute: usize, params: Vec<(f64, f64)> },
    /// Per class, per value log-probability.
    Categorical { attribute: usize, log_probs: Vec<Vec<f64>> },
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() >= 2 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.max(NB_VARIANCE_FLOOR))
}

impl NaiveBayes {
    pub(crate) fn fit(train: &TrainingSet<'_>) -> Self {
        let counts = train.class_counts();
        let n = train.rows.len() as f64;
        let k = train.n_classes as f64;
        let log_priors = counts.iter().map(|&c| ((c as f64 + 1.0) / (n + k)).ln()).collect();

        let mut features = Vec::new();
        for attribute in train.features() {
            match &train.data.schema().attributes()[attribute].kind {
                AttributeKind::Numeric => {
                    let mut per_class: Vec<Vec<f64>> = vec![Vec::new(); train.n_classes];
                    for &(r, c) in &train.rows {
                        if let Some(x) = train.value(r, attribute).as_number() {
                            per_class[c].push(x);
                        }
                    }
                    let pooled: Vec<f64> = per_class.iter().flatten().copied().collect();
                    if pooled.is_empty() {
                        continue;
                    }
                    let fallback = mean_var(&pooled);
                    let params = per_class
                        .iter()
                        .map(|xs| if xs.is_empty() { fallback } else { mean_var(xs) })
                        .collect();
                    features.push(Feature::Gaussian { attribute, params });
                }
                AttributeKind::Nominal(values) => {
                    let v = values.len();
                    let mut table = vec![vec![0usize; v]; train.n_classes];
                    for &(r, c) in &train.rows {
                        if let Some(x) = train.value(r, attribute).as_nominal() {
                            table[c][x] += 1;
                        }
                    }
                    let log_probs = table
                        .iter()
                        .map(|row| {
                            let total = row.iter().sum::<usize>() as f64 + v as f64;
                            row.iter().map(|&n| ((n as f64 + 1.0) / total).ln()).collect()
                        })
                        .collect();
                    features.push(Feature::Categorical { attribute, log_probs });
                }
                AttributeKind::String => {}
            }
        }
        Self { log_priors, features }
    }

    /// Unnormalised log joint per class.
    pub fn log_joint(&self, record: &[Value]) -> Vec<f64> {
        let mut scores = self.log_priors.clone();
        for feature in &self.features {
            match feature {
                Feature::Gaussian { attribute, params } => {
                    if let Some(x) = record[*attribute].as_number() {
                        for (s, &(mean, var)) in scores.iter_mut().zip(params) {
                            *s += -0.5 * (2.0 * std::f64::consts::PI * var).ln() - (x - mean).powi(2) / (2.0 * var);
                        }
                    }
                }
                Feature::Categorical { attribute, log_probs } => {
                    if let Some(v) = record[*attribute].as_nominal() {
                        for (s, probs) in scores.iter_mut().zip(log_probs) {
                            if let Some(p) = probs.get(v) {
                                *s += p;
                            }
                        }
                    }
                }
            }
        }
        scores
    }

    /// Class posterior probabilities, summing to one.
    pub fn posterior(&self, record: &[Value]) -> Vec<f64> {
        let scores = self.log_joint(record);
        let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = scores.iter().map(|s| (s - top).exp()).collect();
        let total: f64 = exp.iter().sum();
        exp.into_iter().map(|e| e / total).collect()
    }
}

impl Classifier for NaiveBayes {
    fn predict(&self, record: &[Value]) -> usize {
        let scores = self.log_joint(record);
        let mut best = 0;
        for (i, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = i;
            }
        }
        best
    }
}
