use std::fmt;

use super::t_table::{T_CRIT_001, T_CRIT_005, Z_CRIT_001, Z_CRIT_005};
use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ABetter,
    BBetter,
    NoDifference,
}

impl Verdict {
    /// The same verdict with the roles of A and B swapped.
    pub fn flip(self) -> Self {
        match self {
            Verdict::ABetter => Verdict::BBetter,
            Verdict::BBetter => Verdict::ABetter,
            Verdict::NoDifference => Verdict::NoDifference,
        }
    }

    /// Marker used in result tables: `v` when A wins, `*` when B wins.
    pub fn marker(self) -> &'static str {
        match self {
            Verdict::ABetter => "v",
            Verdict::BBetter => "*",
            Verdict::NoDifference => "",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ABetter => "better",
            Verdict::BBetter => "worse",
            Verdict::NoDifference => "same",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestResult {
    pub t: f64,
    pub df: usize,
    pub critical: f64,
    pub verdict: Verdict,
}

/// Two-sided critical value of Student's t for `alpha` in {0.01, 0.05}.
/// Beyond 200 degrees of freedom the normal quantile is used.
pub fn t_critical(alpha: f64, df: usize) -> Result<f64, EvalError> {
    let (table, z) = if (alpha - 0.01).abs() < 1e-12 {
        (&T_CRIT_001, Z_CRIT_001)
    } else if (alpha - 0.05).abs() < 1e-12 {
        (&T_CRIT_005, Z_CRIT_005)
    } else {
        return Err(EvalError::UnsupportedAlpha(alpha));
    };
    if df == 0 {
        return Err(EvalError::TooFewScores(1));
    }
    Ok(table.get(df - 1).copied().unwrap_or(z))
}

/// Paired t-test with the variance inflated by `test_fraction`
/// (test size over training size) to account for overlapping training sets
/// in repeated cross-validation.
///
/// `a[i]` and `b[i]` must come from the same split. A positive `t` means
/// `a` scored higher on average.
pub fn corrected_t_test(a: &[f64], b: &[f64], test_fraction: f64, alpha: f64) -> Result<TTestResult, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch(a.len(), b.len()));
    }
    let m = a.len();
    if m < 2 {
        return Err(EvalError::TooFewScores(m));
    }
    let df = m - 1;
    let critical = t_critical(alpha, df)?;
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = d.iter().sum::<f64>() / m as f64;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / df as f64;

    let t = if var == 0.0 {
        if mean == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(mean)
        }
    } else {
        mean / ((1.0 / m as f64 + test_fraction) * var).sqrt()
    };
    let verdict = if t > critical {
        Verdict::ABetter
    } else if t < -critical {
        Verdict::BBetter
    } else {
        Verdict::NoDifference
    };
    Ok(TTestResult {
        t,
        df,
        critical,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Student t CDF for integer degrees of freedom via the finite
    /// trigonometric series.
    fn t_cdf(t: f64, df: usize) -> f64 {
        let theta = (t / (df as f64).sqrt()).atan();
        let (s, c) = theta.sin_cos();
        let a = if df % 2 == 1 {
            let mut term = c;
            let mut sum = if df > 1 { c } else { 0.0 };
            for j in (3..df).step_by(2) {
                term *= c * c * (j - 1) as f64 / j as f64;
                sum += term;
            }
            2.0 / std::f64::consts::PI * (theta + s * sum)
        } else {
            let mut term = 1.0;
            let mut sum = 1.0;
            for j in (2..df).step_by(2) {
                term *= c * c * (j - 1) as f64 / j as f64;
                sum += term;
            }
            s * sum
        };
        0.5 + a / 2.0
    }

    #[test]
    fn table_matches_cdf() {
        for df in 1..=200usize {
            for alpha in [0.01, 0.05] {
                let crit = t_critical(alpha, df).unwrap();
                let p = t_cdf(crit, df);
                assert!((p - (1.0 - alpha / 2.0)).abs() < 1e-10, "df {df} alpha {alpha}: cdf {p}");
            }
        }
    }

    #[test]
    fn large_df_uses_normal_quantile() {
        assert_eq!(t_critical(0.05, 1000).unwrap(), Z_CRIT_005);
        assert!(t_critical(0.05, 200).unwrap() > Z_CRIT_005);
        assert!(matches!(t_critical(0.1, 10), Err(EvalError::UnsupportedAlpha(_))));
    }

    #[test]
    fn ten_by_ten_example() {
        // Differences alternate 1 and 3 over 100 paired runs.
        let a: Vec<f64> = (0..100).map(|i| 80.0 + if i % 2 == 0 { 1.0 } else { 3.0 }).collect();
        let b = vec![80.0; 100];
        let r = corrected_t_test(&a, &b, 1.0 / 9.0, 0.01).unwrap();
        // Mean 2, variance 100/99, denominator sqrt((0.01 + 1/9) * 100/99).
        let expected = 2.0 / ((0.01 + 1.0 / 9.0) * (100.0 / 99.0_f64)).sqrt();
        assert!((r.t - expected).abs() < 1e-12);
        assert_eq!(r.df, 99);
        assert_eq!(r.verdict, Verdict::ABetter);
        let swapped = corrected_t_test(&b, &a, 1.0 / 9.0, 0.01).unwrap();
        assert_eq!(swapped.verdict, r.verdict.flip());
        assert!((swapped.t + r.t).abs() < 1e-12);
    }

    #[test]
    fn identical_vectors_are_not_different() {
        let a = vec![75.0, 80.0, 85.0];
        let r = corrected_t_test(&a, &a, 0.1, 0.05).unwrap();
        assert_eq!(r.t, 0.0);
        assert_eq!(r.verdict, Verdict::NoDifference);
    }

    #[test]
    fn constant_nonzero_difference_is_significant() {
        let r = corrected_t_test(&[2.0, 2.0], &[1.0, 1.0], 0.1, 0.01).unwrap();
        assert_eq!(r.t, f64::INFINITY);
        assert_eq!(r.verdict, Verdict::ABetter);
    }

    #[test]
    fn input_errors() {
        assert_eq!(corrected_t_test(&[1.0], &[1.0, 2.0], 0.1, 0.01), Err(EvalError::LengthMismatch(1, 2)));
        assert_eq!(corrected_t_test(&[1.0], &[1.0], 0.1, 0.01), Err(EvalError::TooFewScores(1)));
    }
}
