#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use sppam::dataset::{AttributeKind, AttributeSpec, Dataset, Schema, Value};
use sppam::TransformConfig;

pub const WIND_INPUT: &str = "@ATTRIBUTE Date String
@ATTRIBUTE Wind_Knots numeric
@ATTRIBUTE Wind_Dir {N, NE, E, SE, S, SW, W, NW}
@ATTRIBUTE Surf {0,1}
@DATA
18-11-2010,15.6,SE,0
18-11-2010,9.7,SE,0
18-11-2010,3.9,SE,0
18-11-2010,5.8,NE,0
19-11-2010,11.7,NE,0
19-11-2010,15.6,NE,0
19-11-2010,13.6,E,1
19-11-2010,15.6,E,1
";

pub const WIND_OUTPUT_DATA: &str = "18-11-2010,15.6,3.9,8.75,5.8,0.0,25.0,0.0,75.0,0.0,0.0,0.0,0.0,NE,0
19-11-2010,15.6,11.7,14.13,15.6,0.0,50.0,50.0,0.0,0.0,0.0,0.0,0.0,E,1
";

pub fn data_section(arff: &str) -> &str {
    arff.split_once("@DATA\n").expect("ARFF output has a data section").1
}

const AWKWARD: [&str; 12] = [
    "plain", "two words", "a,b", "it's", "say \"hi\"", "back\\slash", "50%", "{brace}", "?x", "tab\there", "ünï", "-",
];

fn label<R: Rng>(rng: &mut R, prefix: &str, i: usize) -> String {
    if rng.random_bool(0.3) {
        format!("{prefix}{i} {}", AWKWARD[rng.random_range(0..AWKWARD.len())])
    } else {
        format!("{prefix}{i}")
    }
}

/// A random schema with a string pivot `key`, a nominal class `cls`, and a
/// shuffled mix of numeric, nominal and string attributes.
pub fn random_schema<R: Rng>(rng: &mut R) -> (Schema, TransformConfig) {
    let mut attributes = vec![AttributeSpec::string("key"), class_spec(rng)];
    for i in 0..rng.random_range(0..=4) {
        attributes.push(AttributeSpec::numeric(format!("num{i}")));
    }
    for i in 0..rng.random_range(0..=3) {
        let v = rng.random_range(1..=6);
        let values: Vec<String> = (0..v).map(|j| label(rng, "v", j)).collect();
        attributes.push(AttributeSpec::nominal(format!("nom{i}"), values));
    }
    for i in 0..rng.random_range(0..=2) {
        attributes.push(AttributeSpec::string(format!("str{i}")));
    }
    attributes.shuffle(rng);
    (
        Schema::new(attributes).expect("generated names are unique"),
        TransformConfig::new("key", "cls"),
    )
}

fn class_spec<R: Rng>(rng: &mut R) -> AttributeSpec {
    let k = rng.random_range(2..=4);
    AttributeSpec::nominal("cls", (0..k).map(|j| format!("c{j}")))
}

fn random_number<R: Rng>(rng: &mut R) -> f64 {
    match rng.random_range(0..4) {
        0 => rng.random_range(-50i32..50) as f64,
        1 => rng.random_range(-1.0e3..1.0e3),
        2 => rng.random_range(-1.0..1.0) * 10f64.powi(rng.random_range(-8..8)),
        _ => (rng.random_range(0.0..100.0f64) * 10.0).round() / 10.0,
    }
}

/// Random records over `schema` with up to `max_groups` pivot values and a
/// `missing` chance per non-pivot cell.
pub fn random_dataset<R: Rng>(rng: &mut R, schema: &Schema, records: usize, max_groups: usize, missing: f64) -> Dataset {
    let keys: Vec<String> = (0..max_groups.max(1)).map(|g| label(rng, "g", g)).collect();
    let rows = (0..records)
        .map(|_| {
            schema
                .iter()
                .map(|attr| {
                    if attr.name == "key" {
                        return Value::text(&keys[rng.random_range(0..keys.len())]);
                    }
                    if rng.random_bool(missing) {
                        return Value::Missing;
                    }
                    match &attr.kind {
                        AttributeKind::Numeric => Value::Number(random_number(rng)),
                        AttributeKind::Nominal(values) => Value::Nominal(rng.random_range(0..values.len())),
                        AttributeKind::String => {
                            let i = rng.random_range(0..100);
                            Value::text(&label(rng, "s", i))
                        }
                    }
                })
                .collect()
        })
        .collect();
    Dataset::new("random", schema.clone(), rows).expect("generated records fit the schema")
}

/// Straightforward reference implementation of the transformation, one
/// full scan of the records per group and per output cell.
pub fn oracle_transform(dataset: &Dataset, pivot: &str, class: &str) -> Vec<Vec<Value>> {
    let schema = dataset.schema();
    let p = schema.position(pivot).unwrap();
    let c = schema.position(class).unwrap();
    let mut keys: Vec<String> = Vec::new();
    for r in 0..dataset.len() {
        let key = dataset.cell_text(r, p).into_owned();
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let last = |members: &[&Vec<Value>], a: usize| {
        members
            .iter()
            .rev()
            .map(|r| r[a].clone())
            .find(|v| !v.is_missing())
            .unwrap_or(Value::Missing)
    };
    keys.iter()
        .map(|key| {
            let members: Vec<&Vec<Value>> = (0..dataset.len())
                .filter(|&r| dataset.cell_text(r, p) == key.as_str())
                .map(|r| &dataset.records()[r])
                .collect();
            let mut row = Vec::new();
            for (a, attr) in schema.iter().enumerate() {
                if a == c {
                    continue;
                }
                if a == p {
                    row.push(last(&members, a));
                    continue;
                }
                match &attr.kind {
                    AttributeKind::String => row.push(last(&members, a)),
                    AttributeKind::Numeric => {
                        let xs: Vec<f64> = members.iter().filter_map(|r| r[a].as_number()).collect();
                        if xs.is_empty() {
                            row.extend(vec![Value::Missing; 4]);
                        } else {
                            let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                            let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
                            let avg = xs.iter().sum::<f64>() / xs.len() as f64;
                            row.extend([max, min, avg, *xs.last().unwrap()].map(Value::Number));
                        }
                    }
                    AttributeKind::Nominal(values) => {
                        let vs: Vec<usize> = members.iter().filter_map(|r| r[a].as_nominal()).collect();
                        if vs.is_empty() {
                            row.extend(vec![Value::Missing; values.len() + 1]);
                        } else {
                            for v in 0..values.len() {
                                let hits = vs.iter().filter(|&&x| x == v).count();
                                row.push(Value::Number(100.0 * hits as f64 / vs.len() as f64));
                            }
                            row.push(Value::Nominal(*vs.last().unwrap()));
                        }
                    }
                }
            }
            row.push(last(&members, c));
            row
        })
        .collect()
}

/// Cell equality with a relative tolerance on numbers (averages are summed
/// differently by the oracle).
pub fn cells_match(a: &Value, b: &Value, tol: f64) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0),
        _ => a == b,
    }
}

/// Brute-force Naive Bayes posterior for one record, recomputed from raw
/// counts and moments of the training rows.
pub fn oracle_posterior(dataset: &Dataset, rows: &[usize], class: usize, record: &[Value]) -> Vec<f64> {
    let schema = dataset.schema();
    let k = schema.attributes()[class].domain().unwrap().len();
    let train: Vec<&Vec<Value>> = rows
        .iter()
        .map(|&r| &dataset.records()[r])
        .filter(|r| !r[class].is_missing())
        .collect();
    let n = train.len() as f64;
    let mut joint = vec![0.0f64; k];
    for (cl, j) in joint.iter_mut().enumerate() {
        let in_class: Vec<&&Vec<Value>> = train.iter().filter(|r| r[class].as_nominal() == Some(cl)).collect();
        let mut log_p = ((in_class.len() as f64 + 1.0) / (n + k as f64)).ln();
        for (a, attr) in schema.iter().enumerate() {
            if a == class {
                continue;
            }
            match &attr.kind {
                AttributeKind::Numeric => {
                    let Some(x) = record[a].as_number() else { continue };
                    let all: Vec<f64> = train.iter().filter_map(|r| r[a].as_number()).collect();
                    if all.is_empty() {
                        continue;
                    }
                    let mut xs: Vec<f64> = in_class.iter().filter_map(|r| r[a].as_number()).collect();
                    if xs.is_empty() {
                        xs = all;
                    }
                    let m = xs.len() as f64;
                    let mean = xs.iter().sum::<f64>() / m;
                    let var = if xs.len() > 1 {
                        xs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0)
                    } else {
                        0.0
                    }
                    .max(1e-9);
                    // Log of the normal density; the density itself underflows for tiny variances.
                    log_p += -(x - mean) * (x - mean) / (2.0 * var) - 0.5 * (2.0 * std::f64::consts::PI * var).ln();
                }
                AttributeKind::Nominal(values) => {
                    let Some(v) = record[a].as_nominal() else { continue };
                    let present: Vec<usize> = in_class.iter().filter_map(|r| r[a].as_nominal()).collect();
                    let hits = present.iter().filter(|&&x| x == v).count();
                    log_p += ((hits as f64 + 1.0) / (present.len() as f64 + values.len() as f64)).ln();
                }
                AttributeKind::String => {}
            }
        }
        *j = log_p;
    }
    let top = joint.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = joint.iter().map(|l| (l - top).exp()).sum();
    joint.iter().map(|l| (l - top).exp() / total).collect()
}
