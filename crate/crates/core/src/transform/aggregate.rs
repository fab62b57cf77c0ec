//! Per-group summaries of a single attribute.

/// Max, min, mean and last of the non-missing values of a group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericAggregate {
    pub max: f64,
    pub min: f64,
    pub avg: f64,
    pub last: f64,
}

/// Percentage of each domain value among the non-missing values of a group,
/// plus the last observed value.
#[derive(Debug, Clone, PartialEq)]
pub struct NominalAggregate {
    /// One entry per domain value, in domain order, in percent.
    pub percents: Vec<f64>,
    pub last: usize,
}

/// Summarises numeric cells in group order. `None` entries are missing and
/// ignored; returns `None` when every entry is missing.
///
/// The mean uses compensated summation and is clamped into `[min, max]`, so a
/// constant group yields four identical values.
pub fn aggregate_numeric<I>(values: I) -> Option<NumericAggregate>
where
    I: IntoIterator<Item = Option<f64>>,
{
    let mut count = 0usize;
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    let mut last = 0.0;
    // Neumaier summation.
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    for x in values.into_iter().flatten() {
        count += 1;
        max = max.max(x);
        min = min.min(x);
        last = x;
        let t = sum + x;
        if sum.abs() >= x.abs() {
            compensation += (sum - t) + x;
        } else {
            compensation += (x - t) + sum;
        }
        sum = t;
    }
    if count == 0 {
        return None;
    }
    let avg = ((sum + compensation) / count as f64).clamp(min, max);
    Some(NumericAggregate { max, min, avg, last })
}

/// Summarises nominal cells (domain indices) in group order over a domain of
/// `domain_len` values. Missing entries are left out of both the counts and
/// the total.
pub fn aggregate_nominal<I>(values: I, domain_len: usize) -> Option<NominalAggregate>
where
    I: IntoIterator<Item = Option<usize>>,
{
    let mut counts = vec![0usize; domain_len];
    let mut total = 0usize;
    let mut last = None;
    for v in values.into_iter().flatten() {
        counts[v] += 1;
        total += 1;
        last = Some(v);
    }
    let last = last?;
    let percents = counts
        .into_iter()
        .map(|c| 100.0 * c as f64 / total as f64)
        .collect();
    Some(NominalAggregate { percents, last })
}
