use std::fmt::Write as _;

use super::{ClassifierEntry, Comparison, DatasetReport};

fn label(entry: &ClassifierEntry) -> String {
    if entry.is_reference() {
        format!("{} (reference)", entry.kind)
    } else {
        entry.kind.to_string()
    }
}

fn f2(x: f64) -> String {
    format!("{x:.2}")
}

/// Aligned text table: one row per class plus an average row for every
/// classifier. A `v` or `*` after the CCI marks a significant win or loss
/// against the reference classifier.
pub fn metrics_table(reports: &[DatasetReport]) -> String {
    let mut rows: Vec<[String; 8]> = Vec::new();
    for report in reports {
        for entry in &report.entries {
            let m = &entry.cv.metrics;
            for (class, c) in report.classes.iter().zip(&m.per_class) {
                rows.push([
                    report.name.clone(),
                    label(entry),
                    class.clone(),
                    String::new(),
                    String::new(),
                    f2(c.precision),
                    f2(c.recall),
                    f2(c.f_measure),
                ]);
            }
            let marker = entry.vs_reference.map_or("", |t| t.verdict.marker());
            rows.push([
                report.name.clone(),
                label(entry),
                "Average".to_string(),
                format!("{}{marker}", f2(m.cci)),
                f2(m.kappa),
                f2(m.macro_avg.precision),
                f2(m.macro_avg.recall),
                f2(m.macro_avg.f_measure),
            ]);
        }
    }
    align(
        ["Dataset", "Classifier", "Class", "CCI%", "Kappa", "Precis.", "Recall", "F-Meas."],
        &rows,
        3,
    )
}

/// Pads every column; columns from `numeric_from` on are right-aligned.
fn align<const N: usize>(header: [&str; N], rows: &[[String; N]], numeric_from: usize) -> String {
    let mut widths = header.map(str::len);
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            if i >= numeric_from {
                let _ = write!(s, "{cell:>w$}");
            } else {
                let _ = write!(s, "{cell:<w$}");
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    write(&mut writer).expect("writing to memory cannot fail");
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// CSV with `class` rows, an `average` row and one `fold` row per test
/// fold (label `repeat:fold`, accuracy in the `cci` column) for every
/// dataset and classifier.
pub fn metrics_csv(reports: &[DatasetReport]) -> String {
    csv_string(|w| {
        w.write_record([
            "dataset", "classifier", "reference", "kind", "label", "cci", "kappa", "precision", "recall", "f_measure",
        ])?;
        for report in reports {
            for entry in &report.entries {
                let m = &entry.cv.metrics;
                let name = entry.kind.name();
                let reference = if entry.is_reference() { "true" } else { "false" };
                for (class, c) in report.classes.iter().zip(&m.per_class) {
                    w.write_record([
                        report.name.as_str(),
                        name,
                        reference,
                        "class",
                        class,
                        "",
                        "",
                        &c.precision.to_string(),
                        &c.recall.to_string(),
                        &c.f_measure.to_string(),
                    ])?;
                }
                w.write_record([
                    report.name.as_str(),
                    name,
                    reference,
                    "average",
                    "",
                    &m.cci.to_string(),
                    &m.kappa.to_string(),
                    &m.macro_avg.precision.to_string(),
                    &m.macro_avg.recall.to_string(),
                    &m.macro_avg.f_measure.to_string(),
                ])?;
                let k = entry.cv.accuracies.len() / entry.cv.matrices.len().max(1);
                for (i, acc) in entry.cv.accuracies.iter().enumerate() {
                    let fold_label = format!("{}:{}", i / k.max(1), i % k.max(1));
                    w.write_record([
                        report.name.as_str(),
                        name,
                        reference,
                        "fold",
                        &fold_label,
                        &acc.to_string(),
                        "",
                        "",
                        "",
                        "",
                    ])?;
                }
            }
        }
        Ok(())
    })
}

/// Per-classifier CCI on both datasets, the change, and the significance
/// of the transformed scores against the original ones.
pub fn delta_table(comparison: &Comparison) -> String {
    let rows: Vec<[String; 7]> = comparison
        .deltas
        .iter()
        .map(|d| {
            let name = if d.kind == super::ClassifierKind::REFERENCE {
                format!("{} (reference)", d.kind)
            } else {
                d.kind.to_string()
            };
            [
                name,
                f2(d.original_cci),
                f2(d.transformed_cci),
                format!("{:+.2}", d.delta),
                f2(d.test.t),
                f2(d.test.critical),
                d.test.verdict.to_string(),
            ]
        })
        .collect();
    let mut out = format!(
        "original: {}  transformed: {}\n",
        comparison.original.name, comparison.transformed.name
    );
    out.push_str(&align(
        ["Classifier", "Original CCI%", "Transformed CCI%", "Delta", "t", "Critical", "Verdict"],
        &rows,
        1,
    ));
    out
}

pub fn delta_csv(comparison: &Comparison) -> String {
    csv_string(|w| {
        w.write_record([
            "classifier",
            "reference",
            "original_cci",
            "transformed_cci",
            "delta",
            "t",
            "df",
            "critical",
            "verdict",
        ])?;
        for d in &comparison.deltas {
            w.write_record([
                d.kind.name(),
                if d.kind == super::ClassifierKind::REFERENCE { "true" } else { "false" },
                &d.original_cci.to_string(),
                &d.transformed_cci.to_string(),
                &d.delta.to_string(),
                &d.test.t.to_string(),
                &d.test.df.to_string(),
                &d.test.critical.to_string(),
                &d.test.verdict.to_string(),
            ])?;
        }
        Ok(())
    })
}
