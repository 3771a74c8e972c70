//! Report rendering: pretty JSON or flattened key,value CSV, written to
//! stdout or `--out`.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::{CliError, Format, RunConfig};

/// Rounds to 9 significant digits; probabilities are printed at exactly
/// this precision so outputs stay byte-stable and comparable.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(8 - magnitude);
    (x * factor).round() / factor
}

pub fn emit<T: Serialize>(config: &RunConfig, report: &T) -> Result<(), CliError> {
    let text = match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::io(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let value = serde_json::to_value(report).map_err(|e| CliError::io(e.to_string()))?;
            flatten_csv(&value)
        }
    };
    write_output(&text, config.out.as_deref())
}

/// Raw pre-rendered text (the per-trial CSV dump), honoring `--out`.
pub fn emit_text(config: &RunConfig, text: &str) -> Result<(), CliError> {
    write_output(text, config.out.as_deref())
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `key,value` rows with dotted paths; arrays index numerically. Keys
/// come out sorted, so the encoding is deterministic.
fn flatten_csv(value: &Value) -> String {
    let mut rows = Vec::new();
    walk(String::new(), value, &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&k);
        out.push(',');
        out.push_str(&v);
        out.push('\n');
    }
    out
}

fn walk(prefix: String, value: &Value, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                walk(join(k), v, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                walk(join(&i.to_string()), v, rows);
            }
        }
        Value::String(s) => rows.push((prefix, format!("\"{}\"", s.replace('"', "\"\"")))),
        other => rows.push((prefix, other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_keeps_nine_digits() {
        assert_eq!(sig9(0.8535533905932737), 0.853553391);
        assert_eq!(sig9(0.2928932188134524), 0.292893219);
        assert_eq!(sig9(0.5 + 1e-13), 0.5);
        assert_eq!(sig9(-0.5000000004), -0.5);
        assert_eq!(sig9(0.0), 0.0);
        assert_eq!(sig9(123456789.123), 123456789.0);
        assert_eq!(sig9(1.23456789123e-7), 1.23456789e-7);
    }

    #[test]
    fn csv_flattening_is_sorted_and_quoted() {
        let v = serde_json::json!({
            "b": [1.5, 2.0],
            "a": {"inner": "text, with comma"},
        });
        let csv = flatten_csv(&v);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "key,value");
        assert_eq!(lines[1], "a.inner,\"text, with comma\"");
        assert_eq!(lines[2], "b.0,1.5");
        assert_eq!(lines[3], "b.1,2.0");
    }
}
