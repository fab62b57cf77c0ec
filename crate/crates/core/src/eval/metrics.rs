use super::EvalError;

/// Rows are actual classes, columns predicted ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(classes: Vec<String>) -> Self {
        let k = classes.len();
        Self {
            classes,
            counts: vec![vec![0; k]; k],
        }
    }

    /// Builds a matrix from square `counts`. Panics if `counts` is not
    /// `classes.len()` by `classes.len()`.
    pub fn from_counts(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Self {
        assert_eq!(counts.len(), classes.len(), "confusion matrix must be square");
        assert!(counts.iter().all(|row| row.len() == classes.len()), "confusion matrix must be square");
        Self { classes, counts }
    }

    pub fn record(&mut self, actual: usize, predicted: usize) {
        self.counts[actual][predicted] += 1;
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for (row, other_row) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// Correctly classified instances, in percent.
    pub cci: f64,
    pub kappa: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Unweighted mean over classes.
    pub macro_avg: ClassMetrics,
}

impl MetricsReport {
    /// Element-wise mean of several reports over the same classes.
    pub fn mean(reports: &[MetricsReport]) -> Option<MetricsReport> {
        let first = reports.first()?;
        let n = reports.len() as f64;
        let avg = |f: &dyn Fn(&MetricsReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
        let avg_class = |f: &dyn Fn(&MetricsReport) -> ClassMetrics| ClassMetrics {
            precision: reports.iter().map(|r| f(r).precision).sum::<f64>() / n,
            recall: reports.iter().map(|r| f(r).recall).sum::<f64>() / n,
            f_measure: reports.iter().map(|r| f(r).f_measure).sum::<f64>() / n,
        };
        Some(MetricsReport {
            cci: avg(&|r| r.cci),
            kappa: avg(&|r| r.kappa),
            per_class: (0..first.per_class.len()).map(|i| avg_class(&|r| r.per_class[i])).collect(),
            macro_avg: avg_class(&|r| r.macro_avg),
        })
    }
}

/// Accuracy, Cohen's kappa and per-class precision, recall and F-measure.
///
/// Undefined ratios (an empty predicted column or actual row) are reported
/// as 0, as is kappa when chance agreement is already perfect.
pub fn classification_metrics(matrix: &ConfusionMatrix) -> Result<MetricsReport, EvalError> {
    let total = matrix.total();
    if total == 0 {
        return Err(EvalError::EmptyMatrix);
    }
    let n = total as f64;
    let k = matrix.classes.len();
    let row_sum = |i: usize| matrix.counts[i].iter().sum::<u64>() as f64;
    let col_sum = |j: usize| matrix.counts.iter().map(|r| r[j]).sum::<u64>() as f64;
    let ratio = |a: f64, b: f64| if b == 0.0 { 0.0 } else { a / b };

    let p_o = matrix.correct() as f64 / n;
    let p_e: f64 = (0..k).map(|i| row_sum(i) * col_sum(i)).sum::<f64>() / (n * n);
    let kappa = if (1.0 - p_e).abs() < f64::EPSILON {
        0.0
    } else {
        (p_o - p_e) / (1.0 - p_e)
    };

    let per_class: Vec<ClassMetrics> = (0..k)
        .map(|i| {
            let tp = matrix.counts[i][i] as f64;
            let precision = ratio(tp, col_sum(i));
            let recall = ratio(tp, row_sum(i));
            ClassMetrics {
                precision,
                recall,
                f_measure: ratio(2.0 * precision * recall, precision + recall),
            }
        })
        .collect();
    let kf = k as f64;
    let macro_avg = ClassMetrics {
        precision: per_class.iter().map(|m| m.precision).sum::<f64>() / kf,
        recall: per_class.iter().map(|m| m.recall).sum::<f64>() / kf,
        f_measure: per_class.iter().map(|m| m.f_measure).sum::<f64>() / kf,
    };
    Ok(MetricsReport {
        cci: 100.0 * p_o,
        kappa,
        per_class,
        macro_avg,
    })
}
