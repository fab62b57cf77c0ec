use super::{corrected_t_test, cross_validate, ClassifierKind, CvConfig, CvResult, EvalError, TTestResult, DEFAULT_ALPHA};
use crate::dataset::Dataset;

#[derive(Debug, Clone, PartialEq)]
pub struct CompareConfig {
    pub classifiers: Vec<ClassifierKind>,
    pub k: usize,
    pub repeats: usize,
    pub seed: u64,
    /// Group attribute for fold construction on the original dataset.
    pub group_by: Option<String>,
    pub alpha: f64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            classifiers: ClassifierKind::ALL.to_vec(),
            k: 10,
            repeats: 10,
            seed: 0,
            group_by: None,
            alpha: DEFAULT_ALPHA,
        }
    }
}

impl CompareConfig {
    fn cv(&self, group_by: Option<&str>) -> CvConfig {
        CvConfig {
            k: self.k,
            repeats: self.repeats,
            seed: self.seed,
            group_by: group_by.map(str::to_string),
        }
    }

    /// Test-to-training size ratio of one fold.
    pub fn test_fraction(&self) -> f64 {
        1.0 / (self.k as f64 - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierEntry {
    pub kind: ClassifierKind,
    pub cv: CvResult,
    /// This classifier against the reference; `None` for the reference
    /// itself or when it was not run.
    pub vs_reference: Option<TTestResult>,
}

impl ClassifierEntry {
    pub fn is_reference(&self) -> bool {
        self.kind == ClassifierKind::REFERENCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetReport {
    pub name: String,
    pub classes: Vec<String>,
    pub entries: Vec<ClassifierEntry>,
}

impl DatasetReport {
    pub fn entry(&self, kind: ClassifierKind) -> Option<&ClassifierEntry> {
        self.entries.iter().find(|e| e.kind == kind)
    }
}

/// Cross-validates every configured classifier on one dataset and tests
/// each against the reference classifier.
pub fn evaluate(
    dataset: &Dataset,
    class: &str,
    config: &CompareConfig,
    group_by: Option<&str>,
) -> Result<DatasetReport, EvalError> {
    let cv_config = config.cv(group_by);
    let mut runs = Vec::with_capacity(config.classifiers.len());
    for &kind in &config.classifiers {
        runs.push((kind, cross_validate(dataset, class, kind, &cv_config)?));
    }
    let reference = runs
        .iter()
        .find(|(kind, _)| *kind == ClassifierKind::REFERENCE)
        .map(|(_, cv)| cv.accuracies.clone());
    let mut entries = Vec::with_capacity(runs.len());
    for (kind, cv) in runs {
        let vs_reference = match &reference {
            Some(r) if kind != ClassifierKind::REFERENCE => {
                Some(corrected_t_test(&cv.accuracies, r, config.test_fraction(), config.alpha)?)
            }
            _ => None,
        };
        entries.push(ClassifierEntry {
            kind,
            cv,
            vs_reference,
        });
    }
    let classes = dataset
        .schema()
        .attribute(class)
        .and_then(|a| a.domain())
        .map(<[String]>::to_vec)
        .unwrap_or_default();
    Ok(DatasetReport {
        name: dataset.relation().to_string(),
        classes,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Delta {
    pub kind: ClassifierKind,
    pub original_cci: f64,
    pub transformed_cci: f64,
    /// Transformed minus original, in percentage points.
    pub delta: f64,
    /// Transformed scores against original scores.
    pub test: TTestResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub original: DatasetReport,
    pub transformed: DatasetReport,
    pub deltas: Vec<Delta>,
}

/// Evaluates both datasets with the same folds settings and reports, per
/// classifier, the change in correctly classified instances and whether it
/// is significant. Only the original dataset uses `config.group_by`.
pub fn compare_datasets(
    original: &Dataset,
    transformed: &Dataset,
    class: &str,
    config: &CompareConfig,
) -> Result<Comparison, EvalError> {
    let domain = |ds: &Dataset| ds.schema().attribute(class).and_then(|a| a.domain()).map(<[String]>::to_vec);
    match (domain(original), domain(transformed)) {
        (Some(a), Some(b)) if a == b => {}
        (Some(_), Some(_)) => {
            return Err(EvalError::ClassMismatch(format!("`{class}` has different domains")));
        }
        (None, _) if original.schema().attribute(class).is_some() => {
            return Err(EvalError::ClassNotNominal(class.to_string()));
        }
        (_, None) if transformed.schema().attribute(class).is_some() => {
            return Err(EvalError::ClassNotNominal(class.to_string()));
        }
        _ => {
            return Err(EvalError::ClassMismatch(format!("`{class}` is not in both datasets")));
        }
    }
    let original_report = evaluate(original, class, config, config.group_by.as_deref())?;
    let transformed_report = evaluate(transformed, class, config, None)?;
    let mut deltas = Vec::with_capacity(config.classifiers.len());
    for (o, t) in original_report.entries.iter().zip(&transformed_report.entries) {
        let original_cci = o.cv.mean_accuracy();
        let transformed_cci = t.cv.mean_accuracy();
        deltas.push(Delta {
            kind: o.kind,
            original_cci,
            transformed_cci,
            delta: transformed_cci - original_cci,
            test: corrected_t_test(&t.cv.accuracies, &o.cv.accuracies, config.test_fraction(), config.alpha)?,
        });
    }
    Ok(Comparison {
        original: original_report,
        transformed: transformed_report,
        deltas,
    })
}
