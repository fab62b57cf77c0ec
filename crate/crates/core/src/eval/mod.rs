//! Evaluation harness: group-aware stratified folds, four reference
//! classifiers, confusion-matrix metrics, repeated cross-validation and the
//! corrected resampled t-test used to compare two datasets or two
//! classifiers.

mod classifier;
mod compare;
mod cv;
mod folds;
mod metrics;
mod report;
mod t_table;
mod ttest;

pub use self::classifier::{
    fit, Classifier, ClassifierKind, DecisionStump, Model, NaiveBayes, OneR, ZeroR, NB_VARIANCE_FLOOR,
    ONER_MAX_BINS, ONER_MIN_BUCKET,
};
pub use self::compare::{compare_datasets, evaluate, ClassifierEntry, CompareConfig, Comparison, DatasetReport, Delta};
pub use self::cv::{cross_validate, CvConfig, CvResult};
pub use self::folds::{group_stratified_folds, FoldAssignment};
pub use self::metrics::{classification_metrics, ClassMetrics, ConfusionMatrix, MetricsReport};
pub use self::report::{delta_csv, delta_table, metrics_csv, metrics_table};
pub use self::ttest::{corrected_t_test, t_critical, TTestResult, Verdict};

use thiserror::Error;

/// Significance level used by default for every comparison.
pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("class attribute `{0}` is not nominal")]
    ClassNotNominal(String),
    #[error("need at least 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error("{k} folds requested but only {available} {unit} available")]
    TooManyFolds {
        k: usize,
        available: usize,
        unit: &'static str,
    },
    #[error("record {0} has a missing group value")]
    MissingGroupValue(usize),
    #[error("training set has no records with a known class")]
    EmptyTrainingSet,
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("score vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 paired scores, got {0}")]
    TooFewScores(usize),
    #[error("no critical-value table for alpha = {0} (supported: 0.01, 0.05)")]
    UnsupportedAlpha(f64),
    #[error("unknown classifier `{0}` (valid: ZeroR, OneR, NaiveBayes, DecisionStump)")]
    UnknownClassifier(String),
    #[error("datasets disagree on class attribute: {0}")]
    ClassMismatch(String),
}
