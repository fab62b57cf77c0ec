use std::borrow::Cow;
use std::collections::HashMap;

use super::TransformError;
use crate::dataset::Dataset;

/// Records sharing one pivot value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub key: String,
    /// Source record indices, strictly increasing.
    pub members: Vec<usize>,
}

impl Group {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Partitions the records by exact text equality of `pivot`, with groups in
/// order of first appearance.
pub fn group_records(dataset: &Dataset, pivot: &str) -> Result<Vec<Group>, TransformError> {
    let position = dataset
        .schema()
        .position(pivot)
        .ok_or_else(|| TransformError::UnknownAttribute(pivot.to_string()))?;
    group_by_position(dataset, position)
}

pub(crate) fn group_by_position(dataset: &Dataset, position: usize) -> Result<Vec<Group>, TransformError> {
    let mut slots: HashMap<Cow<'_, str>, usize> = HashMap::new();
    let mut groups: Vec<Group> = Vec::new();
    for (record, row) in dataset.records().iter().enumerate() {
        if row[position].is_missing() {
            return Err(TransformError::MissingPivot { record });
        }
        let key = dataset.cell_text(record, position);
        match slots.get(key.as_ref()) {
            Some(&slot) => groups[slot].members.push(record),
            None => {
                slots.insert(key.clone(), groups.len());
                groups.push(Group {
                    key: key.into_owned(),
                    members: vec![record],
                });
            }
        }
    }
    Ok(groups)
}
