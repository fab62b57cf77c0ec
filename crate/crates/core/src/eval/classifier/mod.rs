//! Reference classifiers. All are deterministic given their training rows,
//! ignore string attributes, and break ties in favour of the class that
//! comes first in the class domain.

mod naive_bayes;
mod one_r;
mod stump;
mod zero_r;

pub use self::naive_bayes::{NaiveBayes, NB_VARIANCE_FLOOR};
pub use self::one_r::{OneR, ONER_MAX_BINS, ONER_MIN_BUCKET};
pub use self::stump::DecisionStump;
pub use self::zero_r::ZeroR;

use std::fmt;
use std::str::FromStr;

use super::EvalError;
use crate::dataset::{Dataset, Value};

pub trait Classifier: Send + Sync {
    /// Predicted class index for one record of the training schema.
    fn predict(&self, record: &[Value]) -> usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassifierKind {
    ZeroR,
    OneR,
    NaiveBayes,
    DecisionStump,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 4] = [
        ClassifierKind::ZeroR,
        ClassifierKind::OneR,
        ClassifierKind::NaiveBayes,
        ClassifierKind::DecisionStump,
    ];

    /// OneR is the baseline every other classifier is tested against.
    pub const REFERENCE: ClassifierKind = ClassifierKind::OneR;

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::ZeroR => "ZeroR",
            ClassifierKind::OneR => "OneR",
            ClassifierKind::NaiveBayes => "NaiveBayes",
            ClassifierKind::DecisionStump => "DecisionStump",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "zeror" => Ok(ClassifierKind::ZeroR),
            "oner" => Ok(ClassifierKind::OneR),
            "naivebayes" | "nb" | "gaussiannaivebayes" => Ok(ClassifierKind::NaiveBayes),
            "decisionstump" | "stump" => Ok(ClassifierKind::DecisionStump),
            _ => Err(EvalError::UnknownClassifier(s.to_string())),
        }
    }
}

/// A fitted model of any kind.
#[derive(Debug, Clone)]
pub enum Model {
    ZeroR(ZeroR),
    OneR(OneR),
    NaiveBayes(NaiveBayes),
    DecisionStump(DecisionStump),
}

impl Classifier for Model {
    fn predict(&self, record: &[Value]) -> usize {
        match self {
            Model::ZeroR(m) => m.predict(record),
            Model::OneR(m) => m.predict(record),
            Model::NaiveBayes(m) => m.predict(record),
            Model::DecisionStump(m) => m.predict(record),
        }
    }
}

/// Fits `kind` on the given rows of `data`. Rows with a missing class are
/// ignored.
pub fn fit(kind: ClassifierKind, data: &Dataset, rows: &[usize], class: usize) -> Result<Model, EvalError> {
    let train = TrainingSet::new(data, rows, class)?;
    Ok(match kind {
        ClassifierKind::ZeroR => Model::ZeroR(ZeroR::fit(&train)),
        ClassifierKind::OneR => Model::OneR(OneR::fit(&train)),
        ClassifierKind::NaiveBayes => Model::NaiveBayes(NaiveBayes::fit(&train)),
        ClassifierKind::DecisionStump => Model::DecisionStump(DecisionStump::fit(&train)),
    })
}

/// Training rows with a known class.
pub(crate) struct TrainingSet<'a> {
    pub data: &'a Dataset,
    /// (record index, class index)
    pub rows: Vec<(usize, usize)>,
    pub class: usize,
    pub n_classes: usize,
}

impl<'a> TrainingSet<'a> {
    pub fn new(data: &'a Dataset, rows: &[usize], class: usize) -> Result<Self, EvalError> {
        let attr = data
            .schema()
            .get(class)
            .ok_or_else(|| EvalError::UnknownAttribute(format!("#{class}")))?;
        let n_classes = attr
            .domain()
            .ok_or_else(|| EvalError::ClassNotNominal(attr.name.clone()))?
            .len();
        let rows: Vec<(usize, usize)> = rows
            .iter()
            .filter_map(|&r| data.record(r)[class].as_nominal().map(|c| (r, c)))
            .collect();
        if rows.is_empty() {
            return Err(EvalError::EmptyTrainingSet);
        }
        Ok(Self {
            data,
            rows,
            class,
            n_classes,
        })
    }

    pub fn value(&self, record: usize, attribute: usize) -> &Value {
        &self.data.record(record)[attribute]
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &(_, c) in &self.rows {
            counts[c] += 1;
        }
        counts
    }

    /// Non-class, non-string attribute positions.
    pub fn features(&self) -> impl Iterator<Item = usize> + '_ {
        self.data
            .schema()
            .iter()
            .enumerate()
            .filter(move |&(i, a)| i != self.class && !a.is_string())
            .map(|(i, _)| i)
    }
}

/// Index of the largest count, lowest index on ties.
pub(crate) fn argmax(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Records misclassified when every record in `counts` gets the majority class.
pub(crate) fn errors(counts: &[usize]) -> usize {
    counts.iter().sum::<usize>() - counts.iter().copied().max().unwrap_or(0)
}
