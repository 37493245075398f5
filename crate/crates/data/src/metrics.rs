//! CSV metric export: RFC-4180 quoting, deterministic column order, floats
//! carrying 17 significant digits so they round-trip through text.

use std::io::Write;
use std::path::Path;

use crate::error::{DataError, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

/// 17 significant digits: enough to reproduce any f64 exactly on parse.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn render(value: &Value) -> String {
    match value {
        Value::Int(v) => v.to_string(),
        Value::Float(v) => format_float(*v),
        Value::Text(v) => escape(v),
    }
}

/// Writes a header row plus one line per record. Every row must match the
/// header width. Empty `rows` produces a header-only file.
pub fn export_metrics(columns: &[&str], rows: &[Vec<Value>], path: impl AsRef<Path>) -> Result<()> {
    for row in rows {
        if row.len() != columns.len() {
            return Err(DataError::ColumnMismatch {
                expected: columns.len(),
                found: row.len(),
            });
        }
    }
    let mut out = String::new();
    out.push_str(
        &columns
            .iter()
            .map(|c| escape(c))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in rows {
        out.push_str(&row.iter().map(render).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_text() {
        for v in [0.1, 1.0 / 3.0, 16.5, f64::MIN_POSITIVE, 1e300, -0.0] {
            let s = format_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} -> {back}");
        }
    }

    #[test]
    fn header_only_for_empty_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        export_metrics(&["lambda", "recon_error"], &[], &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "lambda,recon_error\n"
        );
    }

    #[test]
    fn quoting_and_width_checks() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        export_metrics(
            &["name", "v"],
            &[vec![Value::Text("a,\"b\"".into()), Value::Int(3)]],
            &path,
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "name,v\n\"a,\"\"b\"\"\",3\n");

        assert!(matches!(
            export_metrics(&["one"], &[vec![Value::Int(1), Value::Int(2)]], &path),
            Err(DataError::ColumnMismatch { .. })
        ));
    }
}
