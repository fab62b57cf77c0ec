use super::{Roles, TransformConfig, TransformError};
use crate::dataset::{AttributeKind, AttributeSpec, Schema};

/// What one source attribute becomes in the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Column {
    /// Pivot, id and string attributes: the group's last value.
    Copy(usize),
    /// `_MAX`, `_MIN`, `_AVG`, `_LAST`.
    Numeric(usize),
    /// One `_<value>_PERC` per domain value, then `_LAST`.
    Nominal { source: usize, domain_len: usize },
    /// Always the final output attribute.
    Class(usize),
}

impl Column {
    pub(crate) fn width(self) -> usize {
        match self {
            Column::Copy(_) | Column::Class(_) => 1,
            Column::Numeric(_) => 4,
            Column::Nominal { domain_len, .. } => domain_len + 1,
        }
    }
}

pub(crate) fn plan(schema: &Schema, roles: &Roles) -> Vec<Column> {
    let mut columns: Vec<Column> = schema
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != roles.class)
        .map(|(i, attr)| {
            if roles.is_key(i) {
                return Column::Copy(i);
            }
            match &attr.kind {
                AttributeKind::Numeric => Column::Numeric(i),
                AttributeKind::Nominal(values) => Column::Nominal {
                    source: i,
                    domain_len: values.len(),
                },
                AttributeKind::String => Column::Copy(i),
            }
        })
        .collect();
    columns.push(Column::Class(roles.class));
    columns
}

pub(crate) fn build_schema(schema: &Schema, columns: &[Column]) -> Result<Schema, TransformError> {
    let mut out = Vec::with_capacity(columns.iter().map(|c| c.width()).sum());
    for &column in columns {
        match column {
            Column::Copy(i) | Column::Class(i) => out.push(schema.attributes()[i].clone()),
            Column::Numeric(i) => {
                let name = &schema.attributes()[i].name;
                for suffix in ["MAX", "MIN", "AVG", "LAST"] {
                    out.push(AttributeSpec::numeric(format!("{name}_{suffix}")));
                }
            }
            Column::Nominal { source, .. } => {
                let attr = &schema.attributes()[source];
                let domain = attr.domain().expect("nominal column");
                for value in domain {
                    out.push(AttributeSpec::numeric(format!("{}_{}_PERC", attr.name, value)));
                }
                out.push(AttributeSpec::nominal(format!("{}_LAST", attr.name), domain.iter().cloned()));
            }
        }
    }
    // Derived names can collide with an existing attribute (e.g. `a_MAX`).
    Schema::new(out).map_err(|e| TransformError::OutputSchema(e.to_string()))
}

/// Output schema: each non-class attribute expanded in place, the class last.
///
/// * numeric `a` becomes `a_MAX`, `a_MIN`, `a_AVG`, `a_LAST`;
/// * nominal `a` over `v1..vk` becomes `a_v1_PERC` .. `a_vk_PERC` and a
///   nominal `a_LAST` with the same domain;
/// * string attributes, the pivot and the id are copied unchanged.
pub fn derive_output_schema(schema: &Schema, config: &TransformConfig) -> Result<Schema, TransformError> {
    let roles = config.resolve(schema)?;
    build_schema(schema, &plan(schema, &roles))
}

/// Number of output attributes, `1 + s + 4n + Σ (V(w) + 1)`, computed from
/// the attribute counts alone.
///
/// `s` counts copied attributes (strings, plus the pivot and id whatever
/// their type), `n` the remaining numeric attributes and `w` ranges over the
/// remaining nominal attributes with `V(w)` values each. The leading `1` is
/// the class.
pub fn attribute_count(schema: &Schema, config: &TransformConfig) -> Result<usize, TransformError> {
    let roles = config.resolve(schema)?;
    let counts = AttributeCounts::of(schema, &roles);
    Ok(1 + counts.copied + 4 * counts.numeric + counts.nominal_sizes.iter().map(|v| v + 1).sum::<usize>())
}

#[derive(Debug, Default)]
struct AttributeCounts {
    copied: usize,
    numeric: usize,
    nominal_sizes: Vec<usize>,
}

impl AttributeCounts {
    fn of(schema: &Schema, roles: &Roles) -> Self {
        let mut counts = Self::default();
        for (i, attr) in schema.iter().enumerate() {
            if i == roles.class {
                continue;
            }
            match &attr.kind {
                _ if roles.is_key(i) => counts.copied += 1,
                AttributeKind::String => counts.copied += 1,
                AttributeKind::Numeric => counts.numeric += 1,
                AttributeKind::Nominal(values) => counts.nominal_sizes.push(values.len()),
            }
        }
        counts
    }
}

/// Explains the count for the ten-attribute surf-observation layout (one
/// string, five numeric, nominals of 4, 8 and 8 values plus the class),
/// for which a count of 44 is sometimes quoted.
pub fn layout_note(schema: &Schema, config: &TransformConfig) -> Option<String> {
    let roles = config.resolve(schema).ok()?;
    let counts = AttributeCounts::of(schema, &roles);
    let mut sizes = counts.nominal_sizes.clone();
    sizes.sort_unstable();
    if counts.copied != 1 || counts.numeric != 5 || sizes != [4, 8, 8] {
        return None;
    }
    Some(
        "note: surf-observation layout gives 1 + 1 + 4*5 + (5 + 9 + 9) = 45 attributes; \
         a count of 44 sometimes quoted for this layout is one short, consistent with the \
         4-valued nominal (Hour) losing its _LAST column"
            .to_string(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::surf_schema;

    fn wind_schema() -> Schema {
        Schema::new(vec![
            AttributeSpec::string("Date"),
            AttributeSpec::numeric("Wind_Knots"),
            AttributeSpec::nominal("Wind_Dir", ["N", "NE", "E", "SE", "S", "SW", "W", "NW"]),
            AttributeSpec::nominal("Surf", ["0", "1"]),
        ])
        .unwrap()
    }

    #[test]
    fn wind_example_names_and_order() {
        let cfg = TransformConfig::new("Date", "Surf");
        let out = derive_output_schema(&wind_schema(), &cfg).unwrap();
        let names: Vec<_> = out.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "Date",
                "Wind_Knots_MAX",
                "Wind_Knots_MIN",
                "Wind_Knots_AVG",
                "Wind_Knots_LAST",
                "Wind_Dir_N_PERC",
                "Wind_Dir_NE_PERC",
                "Wind_Dir_E_PERC",
                "Wind_Dir_SE_PERC",
                "Wind_Dir_S_PERC",
                "Wind_Dir_SW_PERC",
                "Wind_Dir_W_PERC",
                "Wind_Dir_NW_PERC",
                "Wind_Dir_LAST",
                "Surf",
            ]
        );
        assert!(out.get(0).unwrap().is_string());
        assert_eq!(out.get(13).unwrap().domain().unwrap().len(), 8);
        assert_eq!(out.get(14).unwrap().domain().unwrap(), ["0", "1"]);
        assert_eq!(attribute_count(&wind_schema(), &cfg).unwrap(), 15);
    }

    #[test]
    fn pivot_and_class_only() {
        let schema = Schema::new(vec![AttributeSpec::string("k"), AttributeSpec::nominal("c", ["a"])]).unwrap();
        let cfg = TransformConfig::new("k", "c");
        assert_eq!(derive_output_schema(&schema, &cfg).unwrap().len(), 2);
        assert_eq!(attribute_count(&schema, &cfg).unwrap(), 2);
    }

    #[test]
    fn surf_layout_counts_45_with_note() {
        let cfg = TransformConfig::new("Date", "Sets");
        let schema = surf_schema();
        assert_eq!(attribute_count(&schema, &cfg).unwrap(), 45);
        assert_eq!(derive_output_schema(&schema, &cfg).unwrap().len(), 45);
        assert!(layout_note(&schema, &cfg).unwrap().contains("44"));
        assert!(layout_note(&wind_schema(), &TransformConfig::new("Date", "Surf")).is_none());
    }

    #[test]
    fn non_string_keys_are_copied() {
        let schema = Schema::new(vec![
            AttributeSpec::numeric("day"),
            AttributeSpec::nominal("id", ["a", "b"]),
            AttributeSpec::numeric("x"),
            AttributeSpec::nominal("c", ["0", "1"]),
        ])
        .unwrap();
        let cfg = TransformConfig::new("day", "c").with_id("id");
        let out = derive_output_schema(&schema, &cfg).unwrap();
        let names: Vec<_> = out.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["day", "id", "x_MAX", "x_MIN", "x_AVG", "x_LAST", "c"]);
        assert_eq!(attribute_count(&schema, &cfg).unwrap(), 7);
    }

    #[test]
    fn colliding_derived_names_are_rejected() {
        let schema = Schema::new(vec![
            AttributeSpec::string("k"),
            AttributeSpec::numeric("a"),
            AttributeSpec::string("a_MAX"),
            AttributeSpec::nominal("c", ["0"]),
        ])
        .unwrap();
        assert!(matches!(
            derive_output_schema(&schema, &TransformConfig::new("k", "c")),
            Err(TransformError::OutputSchema(_))
        ));
    }
}
