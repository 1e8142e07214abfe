//! Artifact emission: CSV with 17-significant-digit floats (lossless f64
//! round-trip), JSON via serde, destination selection.

use std::io::Write;
use std::path::Path;

use crate::error::AppError;

/// A float printed with 17 significant digits; `inf`/`nan` pass through as
/// their display forms.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Joins rows into CSV text: header first, then one line per row, trailing
/// newline.
pub fn csv_text(header: &str, rows: &[String]) -> String {
    let mut out = String::with_capacity(header.len() + 1 + rows.len() * 48);
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn deliver(text: &str, path: Option<&Path>) -> Result<(), AppError> {
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(())
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn json_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}
