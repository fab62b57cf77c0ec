//! Consolidation of correlated records: every group of records sharing a
//! pivot value becomes one output record holding per-attribute aggregates.
//!
//! Numeric attributes contribute max/min/mean/last, nominal attributes the
//! percentage of each domain value plus the last value, and string
//! attributes (including the pivot and id) the group's last value. The class
//! of the output record is the class of the group's last record.
//!
//! "Last" always means last in source order among non-missing cells.
//! [`TransformConfig::with_sort_by`] pre-sorts the records when file order is
//! not chronological.

mod aggregate;
mod group;
mod schema;

pub use self::aggregate::{aggregate_nominal, aggregate_numeric, NominalAggregate, NumericAggregate};
pub use self::group::{group_records, Group};
pub(crate) use self::group::group_by_position;
pub use self::schema::{attribute_count, derive_output_schema, layout_note};

use std::cmp::Ordering;

use rayon::prelude::*;
use thiserror::Error;

use self::schema::Column;
use crate::dataset::{Dataset, Schema, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("class attribute `{0}` is not nominal")]
    ClassNotNominal(String),
    #[error("attribute `{0}` is given more than one role (pivot, class, id)")]
    ConflictingRoles(String),
    #[error("record {record} has a missing pivot value")]
    MissingPivot { record: usize },
    #[error("derived schema is invalid: {0}")]
    OutputSchema(String),
}

/// Names the attributes that drive the transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformConfig {
    /// Records with equal values here form one group.
    pub pivot: String,
    pub class: String,
    /// Optional per-record identifier, copied like a string attribute.
    pub id: Option<String>,
    /// Stable pre-sort key applied before grouping.
    pub sort_by: Option<String>,
}

impl TransformConfig {
    pub fn new(pivot: impl Into<String>, class: impl Into<String>) -> Self {
        Self {
            pivot: pivot.into(),
            class: class.into(),
            id: None,
            sort_by: None,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn with_sort_by(mut self, attribute: impl Into<String>) -> Self {
        self.sort_by = Some(attribute.into());
        self
    }

    pub(crate) fn resolve(&self, schema: &Schema) -> Result<Roles, TransformError> {
        let find = |name: &str| {
            schema
                .position(name)
                .ok_or_else(|| TransformError::UnknownAttribute(name.to_string()))
        };
        let pivot = find(&self.pivot)?;
        let class = find(&self.class)?;
        let id = self.id.as_deref().map(find).transpose()?;
        let sort_by = self.sort_by.as_deref().map(find).transpose()?;
        if pivot == class {
            return Err(TransformError::ConflictingRoles(self.pivot.clone()));
        }
        if let Some(id) = id {
            if id == pivot || id == class {
                return Err(TransformError::ConflictingRoles(schema.attributes()[id].name.clone()));
            }
        }
        if !schema.attributes()[class].is_nominal() {
            return Err(TransformError::ClassNotNominal(self.class.clone()));
        }
        Ok(Roles {
            pivot,
            class,
            id,
            sort_by,
        })
    }
}

/// Schema positions of the configured attributes.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Roles {
    pub pivot: usize,
    pub class: usize,
    pub id: Option<usize>,
    pub sort_by: Option<usize>,
}

impl Roles {
    pub(crate) fn is_key(&self, position: usize) -> bool {
        position == self.pivot || Some(position) == self.id
    }
}

/// Result of [`transform`].
#[derive(Debug, Clone)]
pub struct Transformed {
    pub dataset: Dataset,
    /// Keys of groups whose records do not all share one class. Each such
    /// group takes the class of its last record.
    pub mixed_class_groups: Vec<String>,
}

/// Maps every group of records to a single aggregate record.
///
/// Output records follow group first-appearance order; the output schema is
/// [`derive_output_schema`].
pub fn transform(dataset: &Dataset, config: &TransformConfig) -> Result<Transformed, TransformError> {
    let schema = dataset.schema();
    let roles = config.resolve(schema)?;
    let sorted;
    let dataset = match roles.sort_by {
        Some(key) => {
            sorted = dataset.reorder(&sort_order(dataset, key));
            &sorted
        }
        None => dataset,
    };

    let columns = schema::plan(schema, &roles);
    let out_schema = schema::build_schema(schema, &columns)?;
    let groups = group::group_by_position(dataset, roles.pivot)?;
    let width = out_schema.len();

    let rows: Vec<Vec<Value>> = groups
        .par_iter()
        .map(|g| aggregate_group(dataset, g, &columns, width))
        .collect();

    let mixed_class_groups: Vec<String> = groups
        .iter()
        .filter(|g| has_mixed_class(dataset, g, roles.class))
        .map(|g| g.key.clone())
        .collect();
    if !mixed_class_groups.is_empty() {
        log::warn!(
            "{} group(s) with mixed classes take the last record's class: {}",
            mixed_class_groups.len(),
            mixed_class_groups.join(", ")
        );
    }

    Ok(Transformed {
        dataset: Dataset::from_parts(format!("{}_SPPAM", dataset.relation()), out_schema, rows),
        mixed_class_groups,
    })
}

fn last_present(dataset: &Dataset, group: &Group, attribute: usize) -> Value {
    group
        .members
        .iter()
        .rev()
        .map(|&r| &dataset.records()[r][attribute])
        .find(|v| !v.is_missing())
        .cloned()
        .unwrap_or(Value::Missing)
}

fn aggregate_group(dataset: &Dataset, group: &Group, columns: &[Column], width: usize) -> Vec<Value> {
    let records = dataset.records();
    let mut row = Vec::with_capacity(width);
    for &column in columns {
        match column {
            Column::Copy(i) | Column::Class(i) => row.push(last_present(dataset, group, i)),
            Column::Numeric(i) => {
                match aggregate_numeric(group.members.iter().map(|&r| records[r][i].as_number())) {
                    Some(a) => row.extend([a.max, a.min, a.avg, a.last].map(Value::Number)),
                    None => row.extend(std::iter::repeat_n(Value::Missing, 4)),
                }
            }
            Column::Nominal { source, domain_len } => {
                match aggregate_nominal(
                    group.members.iter().map(|&r| records[r][source].as_nominal()),
                    domain_len,
                ) {
                    Some(a) => {
                        row.extend(a.percents.into_iter().map(Value::Number));
                        row.push(Value::Nominal(a.last));
                    }
                    None => row.extend(std::iter::repeat_n(Value::Missing, domain_len + 1)),
                }
            }
        }
    }
    debug_assert_eq!(row.len(), width);
    row
}

fn has_mixed_class(dataset: &Dataset, group: &Group, class: usize) -> bool {
    let mut classes = group
        .members
        .iter()
        .filter_map(|&r| dataset.records()[r][class].as_nominal());
    match classes.next() {
        Some(first) => classes.any(|c| c != first),
        None => false,
    }
}

/// Stable ascending order by one attribute, missing cells last.
fn sort_order(dataset: &Dataset, key: usize) -> Vec<usize> {
    let records = dataset.records();
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| compare_cells(&records[a][key], &records[b][key]));
    order
}

fn compare_cells(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Missing, Value::Missing) => Ordering::Equal,
        (Value::Missing, _) => Ordering::Greater,
        (_, Value::Missing) => Ordering::Less,
        (Value::Number(x), Value::Number(y)) => x.total_cmp(y),
        (Value::Nominal(x), Value::Nominal(y)) => x.cmp(y),
        (Value::Text(x), Value::Text(y)) => x.cmp(y),
        _ => Ordering::Equal,
    }
}
