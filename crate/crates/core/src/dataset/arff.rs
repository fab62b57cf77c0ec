//! Reader and writer for the ARFF-style text format.
//!
//! ```text
//! @RELATION surf            (optional)
//! @ATTRIBUTE Date STRING
//! @ATTRIBUTE Wind_Knots NUMERIC
//! @ATTRIBUTE Wind_Dir {N, NE, E, SE, S, SW, W, NW}
//! @DATA
//! 18-11-2010,15.6,SE
//! ```
//!
//! Keywords are case-insensitive, `%` starts a comment line, `?` is a missing
//! cell and values may be wrapped in single or double quotes (with backslash
//! escapes) to carry commas, quotes or whitespace.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use super::{AttributeKind, AttributeSpec, Dataset, Schema, Value, DEFAULT_RELATION};
use crate::dataset::number::format_number;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number in the input.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("malformed @ATTRIBUTE declaration: {0}")]
    MalformedAttribute(String),
    #[error("unsupported attribute type `{0}`")]
    UnsupportedType(String),
    #[error("malformed @RELATION declaration")]
    MalformedRelation,
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("unexpected content before @DATA: `{0}`")]
    UnexpectedLine(String),
    #[error("no @ATTRIBUTE declarations before @DATA")]
    NoAttributes,
    #[error("missing @DATA section")]
    MissingData,
    #[error("sparse data rows are not supported")]
    SparseRow,
    #[error("unterminated quoted value")]
    UnterminatedQuote,
    #[error("unexpected text after quoted value")]
    TrailingAfterQuote,
    #[error("row has {found} values, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("`{value}` is not in the domain of nominal attribute `{attribute}`")]
    UnknownNominal { attribute: String, value: String },
    #[error("`{text}` is not a finite number (attribute `{attribute}`)")]
    BadNumber { attribute: String, text: String },
}

impl ParseErrorKind {
    fn at(self, line: usize) -> ParseError {
        ParseError { line, kind: self }
    }
}

/// One comma-separated field, after unquoting.
#[derive(Debug, PartialEq)]
struct Field {
    text: String,
    quoted: bool,
}

/// Splits a data row or nominal domain list on commas, honouring quotes.
fn split_fields(s: &str) -> Result<Vec<Field>, ParseErrorKind> {
    let mut fields = Vec::new();
    let mut chars = s.chars().peekable();
    loop {
        while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
            chars.next();
        }
        match chars.peek().copied() {
            Some(q @ ('\'' | '"')) => {
                chars.next();
                let mut text = String::new();
                let mut closed = false;
                while let Some(c) = chars.next() {
                    if c == q {
                        closed = true;
                        break;
                    }
                    if c == '\\' {
                        match chars.next() {
                            Some('n') => text.push('\n'),
                            Some('r') => text.push('\r'),
                            Some('t') => text.push('\t'),
                            Some(other) => text.push(other),
                            None => return Err(ParseErrorKind::UnterminatedQuote),
                        }
                    } else {
                        text.push(c);
                    }
                }
                if !closed {
                    return Err(ParseErrorKind::UnterminatedQuote);
                }
                while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
                    chars.next();
                }
                fields.push(Field { text, quoted: true });
                match chars.next() {
                    None => return Ok(fields),
                    Some(',') => continue,
                    Some(_) => return Err(ParseErrorKind::TrailingAfterQuote),
                }
            }
            _ => {
                let mut text = String::new();
                let mut more = false;
                for c in chars.by_ref() {
                    if c == ',' {
                        more = true;
                        break;
                    }
                    text.push(c);
                }
                let trimmed = text.trim_end().to_string();
                fields.push(Field {
                    text: trimmed,
                    quoted: false,
                });
                if !more {
                    return Ok(fields);
                }
            }
        }
    }
}

/// Reads a possibly quoted token from the start of `s`; returns it and the rest.
fn leading_token(s: &str) -> Result<(String, &str), ParseErrorKind> {
    let s = s.trim_start();
    let mut chars = s.char_indices();
    match chars.next() {
        None => Err(ParseErrorKind::MalformedAttribute("missing name".into())),
        Some((_, q @ ('\'' | '"'))) => {
            let mut text = String::new();
            let mut escaped = false;
            for (i, c) in chars {
                if escaped {
                    text.push(match c {
                        'n' => '\n',
                        'r' => '\r',
                        't' => '\t',
                        other => other,
                    });
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    return Ok((text, &s[i + c.len_utf8()..]));
                } else {
                    text.push(c);
                }
            }
            Err(ParseErrorKind::UnterminatedQuote)
        }
        Some(_) => {
            let end = s
                .find(|c: char| c.is_whitespace() || c == '{')
                .unwrap_or(s.len());
            Ok((s[..end].to_string(), &s[end..]))
        }
    }
}

/// Splits `@KEYWORD rest` into the lowercased keyword and the rest.
fn keyword(line: &str) -> Option<(String, &str)> {
    let body = line.strip_prefix('@')?;
    let end = body.find(char::is_whitespace).unwrap_or(body.len());
    Some((body[..end].to_ascii_lowercase(), &body[end..]))
}

fn parse_attribute(rest: &str) -> Result<AttributeSpec, ParseErrorKind> {
    let (name, type_text) = leading_token(rest)?;
    if name.is_empty() {
        return Err(ParseErrorKind::MalformedAttribute("empty name".into()));
    }
    let type_text = type_text.trim();
    if let Some(inner) = type_text.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| ParseErrorKind::MalformedAttribute(format!("unclosed domain for `{name}`")))?;
        let values = split_fields(inner)?;
        let mut seen = HashSet::new();
        let mut domain = Vec::with_capacity(values.len());
        for v in values {
            if v.text.is_empty() && !v.quoted {
                return Err(ParseErrorKind::MalformedAttribute(format!(
                    "empty value in domain of `{name}`"
                )));
            }
            if !seen.insert(v.text.clone()) {
                return Err(ParseErrorKind::MalformedAttribute(format!(
                    "`{}` listed twice in domain of `{name}`",
                    v.text
                )));
            }
            domain.push(v.text);
        }
        return Ok(AttributeSpec {
            name,
            kind: AttributeKind::Nominal(domain),
        });
    }
    let kind = match type_text.to_ascii_lowercase().as_str() {
        "numeric" | "real" | "integer" => AttributeKind::Numeric,
        "string" => AttributeKind::String,
        "" => {
            return Err(ParseErrorKind::MalformedAttribute(format!(
                "missing type for `{name}`"
            )))
        }
        _ => return Err(ParseErrorKind::UnsupportedType(type_text.to_string())),
    };
    Ok(AttributeSpec { name, kind })
}

/// Parses ARFF-style text into a [`Dataset`].
pub fn parse_arff(text: &str) -> Result<Dataset, ParseError> {
    let mut relation: Option<String> = None;
    let mut attributes: Vec<AttributeSpec> = Vec::new();
    let mut names = HashSet::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut last_line = 0;

    // Header.
    let mut in_data = false;
    for (no, raw) in lines.by_ref() {
        last_line = no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        match keyword(line) {
            Some((kw, rest)) if kw == "relation" => {
                let (name, tail) = leading_token(rest).map_err(|_| ParseErrorKind::MalformedRelation.at(no))?;
                if !tail.trim().is_empty() || name.is_empty() {
                    return Err(ParseErrorKind::MalformedRelation.at(no));
                }
                relation = Some(name);
            }
            Some((kw, rest)) if kw == "attribute" => {
                let attr = parse_attribute(rest).map_err(|k| k.at(no))?;
                if !names.insert(attr.name.clone()) {
                    return Err(ParseErrorKind::DuplicateAttribute(attr.name).at(no));
                }
                attributes.push(attr);
            }
            Some((kw, _)) if kw == "data" => {
                if attributes.is_empty() {
                    return Err(ParseErrorKind::NoAttributes.at(no));
                }
                in_data = true;
                break;
            }
            _ => return Err(ParseErrorKind::UnexpectedLine(line.to_string()).at(no)),
        }
    }
    if !in_data {
        return Err(ParseErrorKind::MissingData.at(last_line.max(1)));
    }

    let lookups: Vec<Option<HashMap<&str, usize>>> = attributes
        .iter()
        .map(|a| {
            a.domain()
                .map(|d| d.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect())
        })
        .collect();

    let mut records = Vec::new();
    for (no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if line.starts_with('{') {
            return Err(ParseErrorKind::SparseRow.at(no));
        }
        let fields = split_fields(line).map_err(|k| k.at(no))?;
        if fields.len() != attributes.len() {
            return Err(ParseErrorKind::Arity {
                expected: attributes.len(),
                found: fields.len(),
            }
            .at(no));
        }
        let mut row = Vec::with_capacity(fields.len());
        for ((field, attr), lookup) in fields.into_iter().zip(&attributes).zip(&lookups) {
            if !field.quoted && field.text == "?" {
                row.push(Value::Missing);
                continue;
            }
            let value = match &attr.kind {
                AttributeKind::Numeric => match field.text.parse::<f64>() {
                    Ok(x) if x.is_finite() => Value::Number(x),
                    _ => {
                        return Err(ParseErrorKind::BadNumber {
                            attribute: attr.name.clone(),
                            text: field.text,
                        }
                        .at(no))
                    }
                },
                AttributeKind::Nominal(_) => {
                    let lookup = lookup.as_ref().expect("nominal lookup");
                    match lookup.get(field.text.as_str()) {
                        Some(&i) => Value::Nominal(i),
                        None => {
                            return Err(ParseErrorKind::UnknownNominal {
                                attribute: attr.name.clone(),
                                value: field.text,
                            }
                            .at(no))
                        }
                    }
                }
                AttributeKind::String => Value::Text(field.text.into()),
            };
            row.push(value);
        }
        records.push(row);
    }

    let schema = Schema::new(attributes).expect("header validated while parsing");
    Ok(Dataset::from_parts(
        relation.unwrap_or_else(|| DEFAULT_RELATION.to_string()),
        schema,
        records,
    ))
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty()
        || s == "?"
        || s.chars().any(|c| {
            c.is_whitespace() || c.is_control() || matches!(c, ',' | '\'' | '"' | '%' | '{' | '}' | '\\')
        })
}

fn push_quoted(out: &mut String, s: &str) {
    if !needs_quotes(s) {
        out.push_str(s);
        return;
    }
    out.push('\'');
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\'' => out.push_str("\\'"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out.push('\'');
}

/// Writes a dataset in ARFF-style text.
///
/// Numeric cells use [`format_number`] with the given `decimals`. Without
/// `decimals` the output parses back to an identical dataset.
pub fn write_arff(dataset: &Dataset, decimals: Option<u32>) -> String {
    let schema = dataset.schema();
    let mut out = String::with_capacity(64 * (schema.len() + dataset.len()));
    out.push_str("@RELATION ");
    push_quoted(&mut out, dataset.relation());
    out.push_str("\n\n");
    for attr in schema {
        out.push_str("@ATTRIBUTE ");
        push_quoted(&mut out, &attr.name);
        match &attr.kind {
            AttributeKind::Numeric => out.push_str(" NUMERIC"),
            AttributeKind::String => out.push_str(" STRING"),
            AttributeKind::Nominal(values) => {
                out.push_str(" {");
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    push_quoted(&mut out, v);
                }
                out.push('}');
            }
        }
        out.push('\n');
    }
    out.push_str("\n@DATA\n");
    for row in dataset.records() {
        for (i, (value, attr)) in row.iter().zip(schema).enumerate() {
            if i > 0 {
                out.push(',');
            }
            match value {
                Value::Missing => out.push('?'),
                Value::Number(x) => {
                    let _ = write!(out, "{}", format_number(*x, decimals));
                }
                Value::Nominal(k) => push_quoted(&mut out, &attr.domain().expect("nominal")[*k]),
                Value::Text(s) => push_quoted(&mut out, s),
            }
        }
        out.push('\n');
    }
    out
}
