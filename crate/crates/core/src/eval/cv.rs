use std::borrow::Cow;

use rayon::prelude::*;

use super::{
    classification_metrics, fit, group_stratified_folds, Classifier, ClassifierKind, ConfusionMatrix, EvalError,
    MetricsReport,
};
use crate::dataset::Dataset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CvConfig {
    pub k: usize,
    pub repeats: usize,
    pub seed: u64,
    /// Keep every record sharing this attribute's value in one fold.
    pub group_by: Option<String>,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            k: 10,
            repeats: 10,
            seed: 0,
            group_by: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    /// Test accuracy in percent per fold, repeat-major (`repeats * k` values).
    pub accuracies: Vec<f64>,
    /// Pooled test predictions, one matrix per repeat.
    pub matrices: Vec<ConfusionMatrix>,
    /// Metrics of each repeat's matrix, averaged over repeats.
    pub metrics: MetricsReport,
}

impl CvResult {
    pub fn mean_accuracy(&self) -> f64 {
        self.accuracies.iter().sum::<f64>() / self.accuracies.len() as f64
    }
}

/// Repeated k-fold cross-validation. Repeat `r` builds its folds with
/// `seed + r`. Records with a missing class take no part.
pub fn cross_validate(
    dataset: &Dataset,
    class: &str,
    kind: ClassifierKind,
    config: &CvConfig,
) -> Result<CvResult, EvalError> {
    let class_pos = dataset
        .schema()
        .position(class)
        .ok_or_else(|| EvalError::UnknownAttribute(class.to_string()))?;
    let classes: Vec<String> = dataset.schema().attributes()[class_pos]
        .domain()
        .ok_or_else(|| EvalError::ClassNotNominal(class.to_string()))?
        .to_vec();

    let data: Cow<'_, Dataset> = if dataset.records().iter().any(|r| r[class_pos].is_missing()) {
        let records = dataset
            .records()
            .iter()
            .filter(|r| !r[class_pos].is_missing())
            .cloned()
            .collect();
        Cow::Owned(Dataset::from_parts(
            dataset.relation().to_string(),
            dataset.schema().clone(),
            records,
        ))
    } else {
        Cow::Borrowed(dataset)
    };
    let data = data.as_ref();

    let mut accuracies = Vec::with_capacity(config.k * config.repeats);
    let mut matrices = Vec::with_capacity(config.repeats);
    for r in 0..config.repeats {
        let folds = group_stratified_folds(
            data,
            class,
            config.k,
            config.group_by.as_deref(),
            config.seed.wrapping_add(r as u64),
        )?;
        let per_fold: Vec<ConfusionMatrix> = (0..config.k)
            .into_par_iter()
            .map(|f| {
                let model = fit(kind, data, &folds.train_indices(f), class_pos)?;
                let mut matrix = ConfusionMatrix::new(classes.clone());
                for t in folds.test_indices(f) {
                    let record = data.record(t);
                    if let Some(actual) = record[class_pos].as_nominal() {
                        matrix.record(actual, model.predict(record));
                    }
                }
                Ok(matrix)
            })
            .collect::<Result<_, EvalError>>()?;
        let mut pooled = ConfusionMatrix::new(classes.clone());
        for m in &per_fold {
            accuracies.push(if m.total() == 0 {
                0.0
            } else {
                100.0 * m.correct() as f64 / m.total() as f64
            });
            pooled.merge(m);
        }
        matrices.push(pooled);
    }
    let reports = matrices
        .iter()
        .map(classification_metrics)
        .collect::<Result<Vec<_>, _>>()?;
    let metrics = MetricsReport::mean(&reports).ok_or(EvalError::TooFewScores(0))?;
    Ok(CvResult {
        accuracies,
        matrices,
        metrics,
    })
}
