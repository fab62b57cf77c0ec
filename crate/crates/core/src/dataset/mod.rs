//! Typed in-memory tables and the text formats they are read from and written to.
//!
//! A [`Dataset`] is an ordered [`Schema`] plus ordered rows of [`Value`]s. Row
//! order is preserved from the source file and is meaningful downstream: the
//! "last" value of a group is the last one in file order.

mod arff;
mod csv;
mod number;

pub use self::arff::{parse_arff, write_arff, ParseError, ParseErrorKind};
pub use self::csv::{parse_csv, write_csv, CsvError, CsvOptions};
pub use self::number::format_number;

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Relation name used when the source does not declare one.
pub const DEFAULT_RELATION: &str = "unnamed";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttributeKind {
    Numeric,
    /// Ordered, distinct value labels. Cells store indices into this list.
    Nominal(Vec<String>),
    String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
}

impl AttributeSpec {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Numeric,
        }
    }

    pub fn string(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::String,
        }
    }

    pub fn nominal<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Nominal(values.into_iter().map(Into::into).collect()),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, AttributeKind::Numeric)
    }

    pub fn is_string(&self) -> bool {
        matches!(self.kind, AttributeKind::String)
    }

    pub fn is_nominal(&self) -> bool {
        matches!(self.kind, AttributeKind::Nominal(_))
    }

    /// The nominal domain, or `None` for numeric and string attributes.
    pub fn domain(&self) -> Option<&[String]> {
        match &self.kind {
            AttributeKind::Nominal(values) => Some(values),
            _ => None,
        }
    }

    /// Renders a cell of this attribute as it appears in a data row,
    /// before any quoting.
    pub fn render(&self, value: &Value, decimals: Option<u32>) -> Cow<'_, str> {
        match value {
            Value::Missing => Cow::Borrowed("?"),
            Value::Number(x) => Cow::Owned(format_number(*x, decimals)),
            Value::Text(s) => Cow::Owned(s.to_string()),
            Value::Nominal(i) => match &self.kind {
                AttributeKind::Nominal(values) => Cow::Borrowed(values[*i].as_str()),
                _ => Cow::Owned(i.to_string()),
            },
        }
    }
}

/// One cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    /// Always finite.
    Number(f64),
    /// Index into the attribute's nominal domain.
    Nominal(usize),
    Text(Arc<str>),
    Missing,
}

impl Value {
    pub fn text(s: &str) -> Self {
        Value::Text(Arc::from(s))
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_nominal(&self) -> Option<usize> {
        match self {
            Value::Nominal(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemaError {
    #[error("schema has no attributes")]
    Empty,
    #[error("attribute name is empty (position {0})")]
    EmptyName(usize),
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("nominal attribute `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("nominal attribute `{attribute}` declares `{value}` twice")]
    DuplicateNominalValue { attribute: String, value: String },
    #[error("record {record} has {found} values, schema has {expected}")]
    Arity {
        record: usize,
        expected: usize,
        found: usize,
    },
    #[error("record {record}: value for `{attribute}` does not match its type")]
    TypeMismatch { record: usize, attribute: String },
    #[error("record {record}: numeric value for `{attribute}` is not finite")]
    NonFinite { record: usize, attribute: String },
    #[error("record {record}: nominal index {index} is out of range for `{attribute}`")]
    NominalOutOfRange {
        record: usize,
        attribute: String,
        index: usize,
    },
}

/// Ordered attribute list with unique names.
#[derive(Debug, Clone)]
pub struct Schema {
    attributes: Vec<AttributeSpec>,
    index: HashMap<String, usize>,
}

impl PartialEq for Schema {
    fn eq(&self, other: &Self) -> bool {
        self.attributes == other.attributes
    }
}

impl Schema {
    pub fn new(attributes: Vec<AttributeSpec>) -> Result<Self, SchemaError> {
        if attributes.is_empty() {
            return Err(SchemaError::Empty);
        }
        let mut index = HashMap::with_capacity(attributes.len());
        for (pos, attr) in attributes.iter().enumerate() {
            if attr.name.is_empty() {
                return Err(SchemaError::EmptyName(pos));
            }
            if index.insert(attr.name.clone(), pos).is_some() {
                return Err(SchemaError::DuplicateAttribute(attr.name.clone()));
            }
            if let AttributeKind::Nominal(values) = &attr.kind {
                if values.is_empty() {
                    return Err(SchemaError::EmptyDomain(attr.name.clone()));
                }
                let mut seen = std::collections::HashSet::with_capacity(values.len());
                for v in values {
                    if !seen.insert(v.as_str()) {
                        return Err(SchemaError::DuplicateNominalValue {
                            attribute: attr.name.clone(),
                            value: v.clone(),
                        });
                    }
                }
            }
        }
        Ok(Self { attributes, index })
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AttributeSpec> {
        self.attributes.iter()
    }

    pub fn get(&self, position: usize) -> Option<&AttributeSpec> {
        self.attributes.get(position)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeSpec> {
        self.position(name).map(|i| &self.attributes[i])
    }

    /// Checks one row against the schema. `record` is only used in errors.
    pub fn check_record(&self, record: usize, row: &[Value]) -> Result<(), SchemaError> {
        if row.len() != self.attributes.len() {
            return Err(SchemaError::Arity {
                record,
                expected: self.attributes.len(),
                found: row.len(),
            });
        }
        for (attr, value) in self.attributes.iter().zip(row) {
            let mismatch = || SchemaError::TypeMismatch {
                record,
                attribute: attr.name.clone(),
            };
            match (value, &attr.kind) {
                (Value::Missing, _) => {}
                (Value::Number(x), AttributeKind::Numeric) => {
                    if !x.is_finite() {
                        return Err(SchemaError::NonFinite {
                            record,
                            attribute: attr.name.clone(),
                        });
                    }
                }
                (Value::Nominal(i), AttributeKind::Nominal(values)) => {
                    if *i >= values.len() {
                        return Err(SchemaError::NominalOutOfRange {
                            record,
                            attribute: attr.name.clone(),
                            index: *i,
                        });
                    }
                }
                (Value::Text(_), AttributeKind::String) => {}
                _ => return Err(mismatch()),
            }
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a Schema {
    type Item = &'a AttributeSpec;
    type IntoIter = std::slice::Iter<'a, AttributeSpec>;

    fn into_iter(self) -> Self::IntoIter {
        self.attributes.iter()
    }
}

/// A relation: schema plus rows, in source order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    relation: String,
    schema: Schema,
    records: Vec<Vec<Value>>,
}

impl Dataset {
    pub fn new(
        relation: impl Into<String>,
        schema: Schema,
        records: Vec<Vec<Value>>,
    ) -> Result<Self, SchemaError> {
        for (i, row) in records.iter().enumerate() {
            schema.check_record(i, row)?;
        }
        Ok(Self::from_parts(relation.into(), schema, records))
    }

    /// Assembles a dataset whose rows are already known to conform.
    pub(crate) fn from_parts(relation: String, schema: Schema, records: Vec<Vec<Value>>) -> Self {
        debug_assert!(records
            .iter()
            .enumerate()
            .all(|(i, r)| schema.check_record(i, r).is_ok()));
        Self {
            relation,
            schema,
            records,
        }
    }

    pub fn relation(&self) -> &str {
        &self.relation
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn records(&self) -> &[Vec<Value>] {
        &self.records
    }

    pub fn record(&self, index: usize) -> &[Value] {
        &self.records[index]
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Text of one cell as it would appear unquoted in a file
    /// (shortest decimal for numbers, `?` for missing).
    pub fn cell_text(&self, record: usize, attribute: usize) -> Cow<'_, str> {
        let value = &self.records[record][attribute];
        match value {
            Value::Text(s) => Cow::Borrowed(s),
            _ => self.schema.attributes[attribute].render(value, None),
        }
    }

    /// Stable reorder of the rows. Used by the optional pre-sort step.
    pub(crate) fn reorder(&self, order: &[usize]) -> Dataset {
        let records = order.iter().map(|&i| self.records[i].clone()).collect();
        Self::from_parts(self.relation.clone(), self.schema.clone(), records)
    }

    pub fn into_records(self) -> Vec<Vec<Value>> {
        self.records
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_arff(self, None))
    }
}
