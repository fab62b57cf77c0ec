use super::{argmax, Classifier, TrainingSet};
use crate::dataset::Value;

/// Always predicts the training majority class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroR {
    pub class: usize,
}

impl ZeroR {
    pub(crate) fn fit(train: &TrainingSet<'_>) -> Self {
        Self {
            class: argmax(&train.class_counts()),
        }
    }
}

impl Classifier for ZeroR {
    fn predict(&self, _record: &[Value]) -> usize {
        self.class
    }
}
