//! Text format for symbol arrays:
//!
//! ```text
//! array v1
//! q: 2
//! d: 3
//! rows: 4
//! 000
//! 101
//! ```
//!
//! Symbols are single characters `0-9a-z` (so `q <= 36`).

use std::fmt::Write as _;
use std::path::Path;

use super::SymbolArray;
use crate::error::{Error, Result};
use crate::kernel::design_file::header_parse;

pub const ARRAY_MAGIC: &str = "array v1";

pub fn format_array(a: &SymbolArray) -> Result<String> {
    if a.q > 36 {
        return Err(Error::NotRepresentable(format!(
            "array over q = {} needs more than 36 symbols",
            a.q
        )));
    }
    let mut out = String::new();
    writeln!(out, "{ARRAY_MAGIC}").unwrap();
    writeln!(out, "q: {}", a.q).unwrap();
    writeln!(out, "d: {}", a.d).unwrap();
    writeln!(out, "rows: {}", a.rows.len()).unwrap();
    for row in &a.rows {
        for &s in row {
            out.push(std::char::from_digit(s, 36).expect("symbol below 36"));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_array(text: &str) -> Result<SymbolArray> {
    let lines: Vec<&str> = text.lines().collect();
    let get = |i: usize| -> Result<&str> {
        lines.get(i).copied().ok_or(Error::MalformedHeader {
            line: i + 1,
            reason: "unexpected end of file".into(),
        })
    };
    if get(0)?.trim() != ARRAY_MAGIC {
        return Err(Error::MalformedHeader {
            line: 1,
            reason: format!("expected `{ARRAY_MAGIC}`"),
        });
    }
    let q: u32 = header_parse(get(1)?, "q", 2)?;
    let d: usize = header_parse(get(2)?, "d", 3)?;
    let count: usize = header_parse(get(3)?, "rows", 4)?;
    let mut body: Vec<&str> = lines[4..].to_vec();
    while body.last().is_some_and(|l| l.trim().is_empty()) {
        body.pop();
    }
    if body.len() != count {
        return Err(Error::PointCountMismatch {
            line: 5,
            declared: count,
            found: body.len(),
        });
    }
    let mut rows = Vec::with_capacity(count);
    for (i, l) in body.iter().enumerate() {
        let line = i + 5;
        let l = l.trim();
        if l.chars().count() != d {
            return Err(Error::BadRow {
                line,
                reason: format!("expected {d} symbols, found {}", l.chars().count()),
            });
        }
        let row = l
            .chars()
            .map(|c| c.to_digit(36).filter(|&s| s < q))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::BadRow {
                line,
                reason: format!("symbol out of range for q = {q}"),
            })?;
        rows.push(row);
    }
    Ok(SymbolArray { q, d, rows })
}

pub fn read_array(path: impl AsRef<Path>) -> Result<SymbolArray> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_array(&text)
}

pub fn write_array(a: &SymbolArray, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_array(a)?).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let a = SymbolArray {
            q: 3,
            d: 2,
            rows: vec![vec![0, 2], vec![1, 1]],
        };
        let text = format_array(&a).unwrap();
        assert_eq!(text, "array v1\nq: 3\nd: 2\nrows: 2\n02\n11\n");
        assert_eq!(parse_array(&text).unwrap(), a);
    }

    #[test]
    fn rejects_out_of_range_symbol() {
        let err = parse_array("array v1\nq: 2\nd: 2\nrows: 1\n02\n").unwrap_err();
        assert!(matches!(err, Error::BadRow { line: 5, .. }));
    }
}
