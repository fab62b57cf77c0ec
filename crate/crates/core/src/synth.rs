//! Synthetic datasets.
//!
//! [`generate_surf`] reproduces the layout of daily surf observations (one
//! string date, an hour, five numeric sea/wind readings, two compass
//! directions and a 0/1 class) with exact control over how many records and
//! how many days end on the positive class. [`generate_group_mean`] builds
//! data whose label is a property of the group mean rather than of any
//! single record.

use chrono::{Days, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::dataset::{AttributeSpec, Dataset, Schema, Value};

pub const COMPASS: [&str; 8] = ["N", "NE", "E", "SE", "S", "SW", "W", "NW"];
pub const HOURS: [&str; 4] = ["0", "6", "12", "18"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("invalid generator settings: {0}")]
    Invalid(String),
}

/// The ten-attribute surf-observation schema; `Sets` is the class.
pub fn surf_schema() -> Schema {
    Schema::new(vec![
        AttributeSpec::string("Date"),
        AttributeSpec::nominal("Hour", HOURS),
        AttributeSpec::numeric("Wave_Total"),
        AttributeSpec::numeric("Wave"),
        AttributeSpec::nominal("Wave_Direction", COMPASS),
        AttributeSpec::numeric("Vaga"),
        AttributeSpec::numeric("Wind_Speed"),
        AttributeSpec::nominal("Wind_Direction", COMPASS),
        AttributeSpec::numeric("Water_Temperature"),
        AttributeSpec::nominal("Sets", ["0", "1"]),
    ])
    .expect("static schema is valid")
}

#[derive(Debug, Clone)]
pub struct SurfConfig {
    pub days: usize,
    pub observations_per_day: usize,
    /// Days whose last observation is labelled `1`.
    pub positive_days: usize,
    /// Records labelled `1` overall, including the last-of-day ones.
    pub positive_records: usize,
    pub start: NaiveDate,
    pub seed: u64,
}

impl SurfConfig {
    /// 192 records over 48 days; 117 positive records, 30 positive days.
    pub fn praia_grande(seed: u64) -> Self {
        Self {
            days: 48,
            observations_per_day: 4,
            positive_days: 30,
            positive_records: 117,
            start: NaiveDate::from_ymd_opt(2010, 11, 18).expect("valid date"),
            seed,
        }
    }

    /// 192 records over 48 days; 144 positive records, 39 positive days.
    pub fn aljezur(seed: u64) -> Self {
        Self {
            positive_days: 39,
            positive_records: 144,
            ..Self::praia_grande(seed)
        }
    }

    fn validate(&self) -> Result<(), SynthError> {
        let invalid = |m: &str| Err(SynthError::Invalid(m.to_string()));
        if self.days == 0 || self.observations_per_day == 0 {
            return invalid("days and observations per day must be positive");
        }
        if self.positive_days > self.days {
            return invalid("more positive days than days");
        }
        let others = self.days * (self.observations_per_day - 1);
        if self.positive_records < self.positive_days || self.positive_records - self.positive_days > others {
            return invalid("positive record count is not reachable with these positive days");
        }
        Ok(())
    }
}

/// Generates records in day order, `observations_per_day` per day, with the
/// class counts fixed by the config.
pub fn generate_surf(config: &SurfConfig) -> Result<Dataset, SynthError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let per_day = config.observations_per_day;
    let total = config.days * per_day;

    let mut day_positive = vec![false; config.days];
    day_positive[..config.positive_days].fill(true);
    day_positive.shuffle(&mut rng);

    let mut labels = vec![false; total];
    let mut non_last = Vec::with_capacity(total - config.days);
    for day in 0..config.days {
        labels[day * per_day + per_day - 1] = day_positive[day];
        non_last.extend((0..per_day - 1).map(|k| day * per_day + k));
    }
    non_last.shuffle(&mut rng);
    for &r in &non_last[..config.positive_records - config.positive_days] {
        labels[r] = true;
    }

    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let mut records = Vec::with_capacity(total);
    for day in 0..config.days {
        let date = config
            .start
            .checked_add_days(Days::new(day as u64))
            .ok_or_else(|| SynthError::Invalid("date overflow".into()))?;
        let date = Value::text(&date.format("%d-%m-%Y").to_string());
        let swell: f64 = rng.random_range(0.5..3.0);
        let swell_dir = rng.random_range(0..COMPASS.len());
        let temperature: f64 = rng.random_range(13.0..17.0);
        for k in 0..per_day {
            let r = day * per_day + k;
            let good = if labels[r] { 1.0 } else { 0.0 };
            let wave = (swell + 0.4 * good + 0.3 * noise.sample(&mut rng)).max(0.1);
            let vaga = (0.6 - 0.2 * good + 0.2 * noise.sample(&mut rng)).max(0.0);
            let wind = (18.0 - 6.0 * good + 4.0 * noise.sample(&mut rng)).max(0.0);
            let wind_dir = if rng.random_bool(0.7) {
                if good > 0.0 {
                    1 // offshore
                } else {
                    5
                }
            } else {
                rng.random_range(0..COMPASS.len())
            };
            let wave_dir = if rng.random_bool(0.8) {
                swell_dir
            } else {
                (swell_dir + 1) % COMPASS.len()
            };
            records.push(vec![
                date.clone(),
                Value::Nominal(k % HOURS.len()),
                Value::Number(round1(wave + vaga)),
                Value::Number(round1(wave)),
                Value::Nominal(wave_dir),
                Value::Number(round1(vaga)),
                Value::Number(round1(wind)),
                Value::Nominal(wind_dir),
                Value::Number(round1(temperature + 0.2 * noise.sample(&mut rng))),
                Value::Nominal(labels[r] as usize),
            ]);
        }
    }
    Ok(Dataset::from_parts("surf".to_string(), surf_schema(), records))
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// Data where each group's label is decided by the mean of `x1` over the
/// group, while single records carry little signal.
#[derive(Debug, Clone)]
pub struct GroupMeanConfig {
    pub groups: usize,
    pub group_size: usize,
    /// Pure-noise numeric attributes besides the signal attribute.
    pub noise_attributes: usize,
    /// Distance between the two class means of `x1`.
    pub separation: f64,
    /// Per-record standard deviation of `x1` around its group mean.
    pub spread: f64,
    pub seed: u64,
}

impl Default for GroupMeanConfig {
    fn default() -> Self {
        Self {
            groups: 120,
            group_size: 24,
            noise_attributes: 2,
            separation: 1.0,
            spread: 3.0,
            seed: 0,
        }
    }
}

impl GroupMeanConfig {
    /// Expected accuracy of the Bayes-optimal rule on a single record.
    pub fn record_bayes_accuracy(&self) -> f64 {
        std_normal_cdf(self.separation / (2.0 * self.spread))
    }

    /// Expected accuracy of the Bayes-optimal rule on a group mean.
    pub fn group_bayes_accuracy(&self) -> f64 {
        std_normal_cdf(self.separation * (self.group_size as f64).sqrt() / (2.0 * self.spread))
    }
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

// Abramowitz-Stegun 7.1.26, absolute error below 1.5e-7.
fn erf(x: f64) -> f64 {
    let t = 1.0 / (1.0 + 0.3275911 * x.abs());
    let poly = t * (0.254829592 + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    let y = 1.0 - poly * (-x * x).exp();
    if x >= 0.0 {
        y
    } else {
        -y
    }
}

/// Schema: `Group` (string pivot), `x1` (signal), `noise1..`, `Label {neg,pos}`.
/// Every record of a group carries the group's label.
pub fn generate_group_mean(config: &GroupMeanConfig) -> Result<Dataset, SynthError> {
    if config.groups < 2 || config.group_size == 0 || config.spread.is_nan() || config.spread <= 0.0 {
        return Err(SynthError::Invalid(
            "need at least two groups, non-empty groups and positive spread".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut attributes = vec![AttributeSpec::string("Group"), AttributeSpec::numeric("x1")];
    attributes.extend((1..=config.noise_attributes).map(|i| AttributeSpec::numeric(format!("noise{i}"))));
    attributes.push(AttributeSpec::nominal("Label", ["neg", "pos"]));
    let schema = Schema::new(attributes).map_err(|e| SynthError::Invalid(e.to_string()))?;

    let mut group_labels: Vec<usize> = (0..config.groups).map(|g| g % 2).collect();
    group_labels.shuffle(&mut rng);
    let spread = Normal::new(0.0, config.spread).map_err(|e| SynthError::Invalid(e.to_string()))?;
    let unit = Normal::new(0.0, 1.0).expect("unit normal");

    let mut records = Vec::with_capacity(config.groups * config.group_size);
    for (g, &label) in group_labels.iter().enumerate() {
        let key = Value::text(&format!("g{g:04}"));
        let mean = if label == 1 { config.separation / 2.0 } else { -config.separation / 2.0 };
        for _ in 0..config.group_size {
            let mut row = Vec::with_capacity(schema.len());
            row.push(key.clone());
            row.push(Value::Number(mean + spread.sample(&mut rng)));
            row.extend((0..config.noise_attributes).map(|_| Value::Number(unit.sample(&mut rng))));
            row.push(Value::Nominal(label));
            records.push(row);
        }
    }
    Ok(Dataset::from_parts("group_mean".to_string(), schema, records))
}
