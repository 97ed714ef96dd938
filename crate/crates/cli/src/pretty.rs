//! Plain-text rendering for `--pretty`.

use std::fmt::Write;

fn numeric(cell: &str) -> bool {
    cell == "-" || cell.parse::<f64>().is_ok()
}

/// Columns padded to their widest cell. Numeric columns are right-aligned,
/// the rest left-aligned.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut width: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    let mut right = vec![true; cols];
    for row in rows {
        for (k, cell) in row.iter().enumerate().take(cols) {
            width[k] = width[k].max(cell.chars().count());
            right[k] &= cell.is_empty() || numeric(cell);
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let mut parts = Vec::with_capacity(cols);
        for (k, cell) in cells.enumerate() {
            if right[k] {
                parts.push(format!("{cell:>w$}", w = width[k]));
            } else {
                parts.push(format!("{cell:<w$}", w = width[k]));
            }
        }
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &mut headers.iter().copied());
    let rule: Vec<String> = width.iter().map(|&w| "-".repeat(w)).collect();
    let _ = writeln!(out, "{}", rule.join("  "));
    for row in rows {
        line(&mut out, &mut row.iter().map(String::as_str));
    }
    out
}

/// `key: value` lines with the keys padded to a common width.
pub fn pairs(items: &[(&str, String)]) -> String {
    let w = items.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in items {
        let _ = writeln!(out, "{k:<w$}  {v}");
    }
    out
}

pub fn list(items: &[String]) -> String {
    format!("[{}]", items.join(", "))
}
