//! CSV ingestion with column type inference, and CSV output.
//!
//! The first row is the header. A column is numeric when every non-missing
//! cell parses as a finite number, nominal otherwise, with its domain made of
//! the distinct cells in first-seen order. Empty cells and `?` are missing.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{AttributeKind, AttributeSpec, Dataset, Schema, Value, DEFAULT_RELATION};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsvError {
    #[error("input has no header row")]
    NoHeader,
    #[error("line 1: header column {0} is empty")]
    EmptyHeader(usize),
    #[error("line 1: duplicate header `{0}`")]
    DuplicateHeader(String),
    #[error("line {line}: row has {found} values, header has {expected}")]
    Ragged {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: `{value}` is not in the declared domain of `{column}`")]
    UnknownNominal {
        line: u64,
        column: String,
        value: String,
    },
    #[error("option names unknown column `{0}`")]
    UnknownColumn(String),
    #[error("declared domain for `{0}` is empty or has duplicates")]
    BadDomain(String),
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
}

/// Type overrides applied on top of inference.
#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub relation: String,
    /// Columns read verbatim as strings, such as a grouping key or record id.
    pub string_columns: Vec<String>,
    /// Columns read as nominal even when every cell is numeric, such as a
    /// `0`/`1` class.
    pub nominal_columns: Vec<String>,
    /// Declared domains for nominal columns, in the order they should appear.
    pub domains: HashMap<String, Vec<String>>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            relation: DEFAULT_RELATION.to_string(),
            string_columns: Vec::new(),
            nominal_columns: Vec::new(),
            domains: HashMap::new(),
        }
    }
}

impl CsvOptions {
    /// Forces the grouping key and id to strings and the class to nominal.
    pub fn with_keys(pivot: &str, id: Option<&str>, class: &str) -> Self {
        let mut string_columns = vec![pivot.to_string()];
        string_columns.extend(id.map(str::to_string));
        Self {
            string_columns,
            nominal_columns: vec![class.to_string()],
            ..Self::default()
        }
    }

    pub fn declare_domain<S: Into<String>>(mut self, column: &str, values: impl IntoIterator<Item = S>) -> Self {
        self.domains
            .insert(column.to_string(), values.into_iter().map(Into::into).collect());
        self
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "?"
}

fn is_number(cell: &str) -> bool {
    cell.parse::<f64>().is_ok_and(f64::is_finite)
}

fn csv_error(err: csv::Error) -> CsvError {
    let line = err.position().map_or(0, |p| p.line());
    match err.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => CsvError::Ragged {
            line,
            expected: *expected_len as usize,
            found: *len as usize,
        },
        _ => CsvError::Malformed {
            line,
            message: err.to_string(),
        },
    }
}

pub fn parse_csv(text: &str, options: &CsvOptions) -> Result<Dataset, CsvError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader.headers().map_err(csv_error)?.clone();
    if header.is_empty() {
        return Err(CsvError::NoHeader);
    }
    let mut seen = HashSet::new();
    for (i, name) in header.iter().enumerate() {
        if name.is_empty() {
            return Err(CsvError::EmptyHeader(i));
        }
        if !seen.insert(name) {
            return Err(CsvError::DuplicateHeader(name.to_string()));
        }
    }
    for name in options
        .string_columns
        .iter()
        .chain(&options.nominal_columns)
        .chain(options.domains.keys())
    {
        if !seen.contains(name.as_str()) {
            return Err(CsvError::UnknownColumn(name.clone()));
        }
    }

    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line());
        rows.push((line, row));
    }

    let mut attributes = Vec::with_capacity(header.len());
    for (col, name) in header.iter().enumerate() {
        let kind = if options.string_columns.iter().any(|c| c == name) {
            AttributeKind::String
        } else if let Some(domain) = options.domains.get(name) {
            AttributeKind::Nominal(domain.clone())
        } else if !options.nominal_columns.iter().any(|c| c == name)
            && rows
                .iter()
                .map(|(_, r)| &r[col])
                .all(|cell| is_missing(cell) || is_number(cell))
        {
            AttributeKind::Numeric
        } else {
            let mut domain: Vec<String> = Vec::new();
            let mut known = HashSet::new();
            for (_, r) in &rows {
                let cell = &r[col];
                if !is_missing(cell) && known.insert(cell) {
                    domain.push(cell.to_string());
                }
            }
            if domain.is_empty() {
                // All-missing forced-nominal column.
                domain.push("?".to_string());
            }
            AttributeKind::Nominal(domain)
        };
        attributes.push(AttributeSpec {
            name: name.to_string(),
            kind,
        });
    }
    let schema = Schema::new(attributes).map_err(|e| match e {
        super::SchemaError::EmptyDomain(c) | super::SchemaError::DuplicateNominalValue { attribute: c, .. } => {
            CsvError::BadDomain(c)
        }
        other => CsvError::Malformed {
            line: 1,
            message: other.to_string(),
        },
    })?;

    let lookups: Vec<Option<HashMap<&str, usize>>> = schema
        .iter()
        .map(|a| {
            a.domain()
                .map(|d| d.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect())
        })
        .collect();

    let mut records = Vec::with_capacity(rows.len());
    for (line, row) in &rows {
        let mut values = Vec::with_capacity(schema.len());
        for ((cell, attr), lookup) in row.iter().zip(schema.iter()).zip(&lookups) {
            let value = match &attr.kind {
                AttributeKind::String => {
                    if cell == "?" {
                        Value::Missing
                    } else {
                        Value::text(cell)
                    }
                }
                _ if is_missing(cell) => Value::Missing,
                AttributeKind::Numeric => Value::Number(cell.parse().expect("checked during inference")),
                AttributeKind::Nominal(_) => match lookup.as_ref().and_then(|l| l.get(cell)) {
                    Some(&i) => Value::Nominal(i),
                    None => {
                        return Err(CsvError::UnknownNominal {
                            line: *line,
                            column: attr.name.clone(),
                            value: cell.to_string(),
                        })
                    }
                },
            };
            values.push(value);
        }
        records.push(values);
    }
    Ok(Dataset::from_parts(options.relation.clone(), schema, records))
}

/// Writes a header row and one row per record. Missing cells are `?`.
pub fn write_csv(dataset: &Dataset, decimals: Option<u32>) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    let schema = dataset.schema();
    writer
        .write_record(schema.iter().map(|a| a.name.as_str()))
        .expect("write to Vec");
    for row in dataset.records() {
        writer
            .write_record(row.iter().zip(schema).map(|(v, a)| a.render(v, decimals).into_owned()))
            .expect("write to Vec");
    }
    String::from_utf8(writer.into_inner().expect("flush Vec")).expect("utf-8 input")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_numeric_column() {
        let ds = parse_csv("x\n1\n2.5\n-3\n", &CsvOptions::default()).unwrap();
        assert_eq!(ds.schema().attributes(), [AttributeSpec::numeric("x")]);
        assert_eq!(ds.record(1)[0], Value::Number(2.5));
    }

    #[test]
    fn mixed_column_becomes_nominal_in_first_seen_order() {
        let ds = parse_csv("c\n1\n2\nx\n1\n", &CsvOptions::default()).unwrap();
        assert_eq!(ds.schema().get(0).unwrap().domain().unwrap(), ["1", "2", "x"]);
        assert_eq!(ds.record(2)[0], Value::Nominal(2));
        assert_eq!(ds.record(3)[0], Value::Nominal(0));
    }

    #[test]
    fn missing_cells() {
        let ds = parse_csv("a,b\n1,x\n?,\n", &CsvOptions::default()).unwrap();
        assert!(ds.schema().get(0).unwrap().is_numeric());
        assert_eq!(ds.record(1), &[Value::Missing, Value::Missing]);
    }

    #[test]
    fn key_columns_are_forced() {
        let opts = CsvOptions::with_keys("Day", Some("Id"), "Surf");
        let ds = parse_csv("Day,Id,v,Surf\n1,10,0.5,0\n1,11,0.7,1\n", &opts).unwrap();
        let s = ds.schema();
        assert!(s.attribute("Day").unwrap().is_string());
        assert!(s.attribute("Id").unwrap().is_string());
        assert!(s.attribute("v").unwrap().is_numeric());
        assert_eq!(s.attribute("Surf").unwrap().domain().unwrap(), ["0", "1"]);
        assert_eq!(ds.record(0)[0], Value::text("1"));
    }

    #[test]
    fn declared_domain_is_enforced() {
        let opts = CsvOptions::default().declare_domain("d", ["N", "S"]);
        let ds = parse_csv("d\nS\n", &opts).unwrap();
        assert_eq!(ds.record(0)[0], Value::Nominal(1));
        let err = parse_csv("d\nS\nE\n", &opts).unwrap_err();
        assert!(matches!(err, CsvError::UnknownNominal { line: 3, .. }));
    }

    #[test]
    fn quoted_cells_with_commas() {
        let ds = parse_csv("s,n\n\"a, b\",1\n", &CsvOptions { string_columns: vec!["s".into()], ..Default::default() }).unwrap();
        assert_eq!(ds.record(0)[0], Value::text("a, b"));
    }

    #[test]
    fn header_and_shape_errors() {
        assert!(matches!(
            parse_csv("a,b\n1,2\n3\n", &CsvOptions::default()),
            Err(CsvError::Ragged { line: 3, expected: 2, found: 1 })
        ));
        assert_eq!(parse_csv("a,,c\n", &CsvOptions::default()), Err(CsvError::EmptyHeader(1)));
        assert_eq!(
            parse_csv("a,a\n", &CsvOptions::default()),
            Err(CsvError::DuplicateHeader("a".into()))
        );
        let opts = CsvOptions::with_keys("nope", None, "a");
        assert_eq!(parse_csv("a\n1\n", &opts), Err(CsvError::UnknownColumn("nope".into())));
    }

    #[test]
    fn write_then_parse() {
        let opts = CsvOptions::with_keys("k", None, "c");
        let text = "k,x,c\n\"a,1\",1.5,yes\nb,?,no\n";
        let ds = parse_csv(text, &opts).unwrap();
        let out = write_csv(&ds, None);
        assert_eq!(out, "k,x,c\n\"a,1\",1.5,yes\nb,?,no\n");
        assert_eq!(parse_csv(&out, &opts).unwrap(), ds);
    }
}
