//! Text format for [`OrbitDesign`]s.
//!
//! ```text
//! signed v1
//! measure: gaussian
//! dimension: 3
//! strength: 2
//! generators: 2
//! 1/4 + -3/8*u | 1/2
//! -1/2*u | 3/4
//! ```
//!
//! Each generator line is its weight, a polynomial in `u = 1/pi`, then `|`
//! and the exact entries of the generator.

use std::fmt::Write as _;
use std::path::Path;

use super::orbit::OrbitDesign;
use crate::error::{Error, Result};
use crate::kernel::design_file::{header_parse, parse_scalar};
use crate::kernel::{format_rational, Measure, PiPoly, Rational};

pub const SIGNED_MAGIC: &str = "signed v1";

pub fn format_signed(design: &OrbitDesign) -> String {
    let mut out = String::new();
    writeln!(out, "{SIGNED_MAGIC}").unwrap();
    writeln!(out, "measure: {}", design.measure).unwrap();
    writeln!(out, "dimension: {}", design.dimension).unwrap();
    writeln!(out, "strength: {}", design.strength).unwrap();
    writeln!(out, "generators: {}", design.generators.len()).unwrap();
    for (a, w) in design.generators.iter().zip(&design.weights) {
        let entries: Vec<String> = a.iter().map(format_rational).collect();
        writeln!(out, "{w} | {}", entries.join(" ")).unwrap();
    }
    out
}

pub fn parse_signed(text: &str) -> Result<OrbitDesign> {
    let lines: Vec<&str> = text.lines().collect();
    let get = |i: usize| -> Result<&str> {
        lines.get(i).copied().ok_or(Error::MalformedHeader {
            line: i + 1,
            reason: "unexpected end of file".into(),
        })
    };
    if get(0)?.trim() != SIGNED_MAGIC {
        return Err(Error::MalformedHeader {
            line: 1,
            reason: format!("expected `{SIGNED_MAGIC}`"),
        });
    }
    let measure: Measure = header_parse(get(1)?, "measure", 2)?;
    let dimension: usize = header_parse(get(2)?, "dimension", 3)?;
    let strength: u32 = header_parse(get(3)?, "strength", 4)?;
    let count: usize = header_parse(get(4)?, "generators", 5)?;
    if strength % 2 == 1 {
        return Err(Error::MalformedHeader {
            line: 4,
            reason: format!("orbit designs have even strength, got {strength}"),
        });
    }
    let body: Vec<(usize, &str)> = lines[5..]
        .iter()
        .enumerate()
        .map(|(i, l)| (i + 6, *l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    if body.len() != count {
        return Err(Error::PointCountMismatch {
            line: 6,
            declared: count,
            found: body.len(),
        });
    }
    let t = (strength / 2) as usize;
    let mut generators = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for (lineno, l) in body {
        let (w, a) = l.split_once('|').ok_or_else(|| Error::BadRow {
            line: lineno,
            reason: "expected `<weight> | <entries>`".into(),
        })?;
        let w: PiPoly = w.trim().parse().map_err(|_| Error::BadNumber {
            line: lineno,
            token: w.trim().to_string(),
        })?;
        let a: Vec<Rational> = a
            .split_whitespace()
            .map(|tok| {
                parse_scalar(tok, lineno)?
                    .as_exact()
                    .and_then(|v| v.as_rational().cloned())
                    .ok_or_else(|| Error::BadNumber {
                        line: lineno,
                        token: tok.to_string(),
                    })
            })
            .collect::<Result<_>>()?;
        if a.len() != t {
            return Err(Error::BadRow {
                line: lineno,
                reason: format!("expected {t} generator entries, found {}", a.len()),
            });
        }
        generators.push(a);
        weights.push(w);
    }
    if t > dimension {
        return Err(Error::TooManyParts { t, d: dimension });
    }
    Ok(OrbitDesign {
        dimension,
        measure,
        strength,
        generators,
        weights,
    })
}

pub fn read_signed(path: impl AsRef<Path>) -> Result<OrbitDesign> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_signed(&text)
}

pub fn write_signed(design: &OrbitDesign, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_signed(design)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
