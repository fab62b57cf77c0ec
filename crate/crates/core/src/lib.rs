//! Consolidation of correlated records into one aggregate record per group,
//! and a small evaluation harness for comparing classifiers trained on the
//! original rows against classifiers trained on the consolidated rows.
//!
//! * [`dataset`]: typed tables, ARFF-style and CSV reading/writing.
//! * [`transform`]: output-schema derivation, grouping and aggregation.
//! * [`eval`]: group-aware folds, reference classifiers, metrics,
//!   cross-validation and the corrected resampled t-test.
//! * [`synth`]: synthetic datasets with the surf-observation layout.

pub mod dataset;
pub mod eval;
pub mod synth;
pub mod transform;

pub use dataset::{parse_arff, parse_csv, write_arff, write_csv, AttributeKind, AttributeSpec, Dataset, Schema, Value};
pub use transform::{attribute_count, derive_output_schema, transform, TransformConfig};
