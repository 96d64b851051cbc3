//! Line-oriented text format for [`WeightedPointSet`]s.
//!
//! ```text
//! design v1
//! measure: sphere
//! dimension: 3
//! kind: unweighted
//! strength: 3          (optional)
//! points: 6
//! 1/6 1 0 0
//! ...
//! ```
//!
//! Each point line is the weight followed by the coordinates. A token with `/`
//! or only digits is an exact rational; anything else is parsed as binary64.
//! Exact values are written `p/q` (or `p`), floats in shortest round-trip form,
//! which always carries a `.` or an exponent.

use std::fmt::Write as _;
use std::path::Path;

use super::number::{format_rational, parse_rational, PiValue, Scalar};
use super::point_set::{Kind, Measure, WeightedPointSet};
use crate::error::{Error, Result};

pub const DESIGN_MAGIC: &str = "design v1";

pub fn read_design(path: impl AsRef<Path>) -> Result<WeightedPointSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_design(&text)
}

pub fn write_design(set: &WeightedPointSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = format_design(set)?;
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Formats a binary64 so that it parses back as a float token.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

fn format_scalar(s: &Scalar) -> Result<String> {
    match s {
        Scalar::Float(x) => Ok(format_float(*x)),
        Scalar::Exact(v) => v
            .as_rational()
            .map(format_rational)
            .ok_or_else(|| Error::NotRepresentable(v.to_string())),
    }
}

pub fn format_design(set: &WeightedPointSet) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "{DESIGN_MAGIC}").unwrap();
    writeln!(out, "measure: {}", set.measure()).unwrap();
    writeln!(out, "dimension: {}", set.dimension()).unwrap();
    writeln!(out, "kind: {}", set.kind()).unwrap();
    if let Some(t) = set.claimed_strength() {
        writeln!(out, "strength: {t}").unwrap();
    }
    writeln!(out, "points: {}", set.len()).unwrap();
    for (p, w) in set.points().iter().zip(set.weights()) {
        let mut line = format_scalar(w)?;
        for c in p {
            line.push(' ');
            line.push_str(&format_scalar(c)?);
        }
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

pub(crate) fn parse_scalar(token: &str, line: usize) -> Result<Scalar> {
    let looks_exact = token.contains('/')
        || token
            .strip_prefix('-')
            .unwrap_or(token)
            .chars()
            .all(|c| c.is_ascii_digit())
            && !token.is_empty()
            && token != "-";
    if looks_exact {
        return match parse_rational(token) {
            Some(q) => Ok(Scalar::Exact(PiValue::rational(q))),
            None => {
                let zero_den = token
                    .split_once('/')
                    .and_then(|(_, d)| d.parse::<num_bigint::BigInt>().ok())
                    .is_some_and(|d| d == num_bigint::BigInt::from(0));
                let token = token.to_string();
                Err(if zero_den {
                    Error::ZeroDenominator { line, token }
                } else {
                    Error::BadNumber { line, token }
                })
            }
        };
    }
    let x: f64 = token.parse().map_err(|_| Error::BadNumber {
        line,
        token: token.to_string(),
    })?;
    if !x.is_finite() {
        return Err(Error::NonFinite {
            line,
            token: token.to_string(),
        });
    }
    Ok(Scalar::Float(x))
}

/// Reads `key: value` from a header line.
pub(crate) fn header_value<'a>(line: &'a str, key: &str, lineno: usize) -> Result<&'a str> {
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(':'))
        .map(str::trim)
        .ok_or_else(|| Error::MalformedHeader {
            line: lineno,
            reason: format!("expected `{key}: ...`, found `{line}`"),
        })
}

pub(crate) fn header_parse<T: std::str::FromStr>(
    line: &str,
    key: &str,
    lineno: usize,
) -> Result<T> {
    let v = header_value(line, key, lineno)?;
    v.parse().map_err(|_| Error::MalformedHeader {
        line: lineno,
        reason: format!("bad value `{v}` for `{key}`"),
    })
}

pub fn parse_design(text: &str) -> Result<WeightedPointSet> {
    let lines: Vec<&str> = text.lines().collect();
    let get = |i: usize| -> Result<&str> {
        lines.get(i).copied().ok_or(Error::MalformedHeader {
            line: i + 1,
            reason: "unexpected end of file".into(),
        })
    };
    if get(0)?.trim() != DESIGN_MAGIC {
        return Err(Error::MalformedHeader {
            line: 1,
            reason: format!("expected `{DESIGN_MAGIC}`"),
        });
    }
    let measure: Measure = header_parse(get(1)?, "measure", 2)?;
    let dimension: usize = header_parse(get(2)?, "dimension", 3)?;
    let kind: Kind = header_parse(get(3)?, "kind", 4)?;
    let mut next = 4;
    let mut strength = None;
    if get(next)?.starts_with("strength") {
        strength = Some(header_parse::<u32>(get(next)?, "strength", next + 1)?);
        next += 1;
    }
    let count: usize = header_parse(get(next)?, "points", next + 1)?;
    next += 1;
    let block_line = next + 1;

    let mut body: Vec<(usize, &str)> = lines[next..]
        .iter()
        .enumerate()
        .map(|(i, l)| (block_line + i, *l))
        .collect();
    while body.last().is_some_and(|(_, l)| l.trim().is_empty()) {
        body.pop();
    }
    if body.len() != count {
        return Err(Error::PointCountMismatch {
            line: block_line,
            declared: count,
            found: body.len(),
        });
    }

    let mut points = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for (lineno, l) in body {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        if tokens.len() != dimension + 1 {
            return Err(Error::BadRow {
                line: lineno,
                reason: format!(
                    "expected weight and {dimension} coordinates, found {} tokens",
                    tokens.len()
                ),
            });
        }
        weights.push(parse_scalar(tokens[0], lineno)?);
        points.push(
            tokens[1..]
                .iter()
                .map(|t| parse_scalar(t, lineno))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    WeightedPointSet::new(dimension, measure, kind, points, weights, strength)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::number::{int, rat};

    const CROSS3: &str = "design v1
measure: sphere
dimension: 3
kind: unweighted
strength: 3
points: 6
1/6 1 0 0
1/6 -1 0 0
1/6 0 1 0
1/6 0 -1 0
1/6 0 0 1
1/6 0 0 -1
";

    #[test]
    fn cross_polytope_fixture_roundtrip() {
        let set = parse_design(CROSS3).unwrap();
        assert_eq!(set.len(), 6);
        assert_eq!(set.kind(), Kind::Unweighted);
        assert!(set.is_exact());
        assert!(set
            .weights()
            .iter()
            .all(|w| w.as_exact().unwrap().as_rational() == Some(&rat(1, 6))));
        assert_eq!(format_design(&set).unwrap(), CROSS3);
    }

    #[test]
    fn point_count_mismatch_names_line() {
        let text = "design v1
measure: gaussian
dimension: 1
kind: unweighted
strength: 1
points: 4
1/4 1
1/4 -1
1/4 0
";
        let err = parse_design(text).unwrap_err();
        assert_eq!(
            err,
            Error::PointCountMismatch {
                line: 7,
                declared: 4,
                found: 3
            }
        );
        assert!(err
            .to_string()
            .starts_with("point count mismatch at line 7"));
    }

    #[test]
    fn token_modes() {
        assert_eq!(parse_scalar("1/2", 1).unwrap(), Scalar::rational(rat(1, 2)));
        assert_eq!(parse_scalar("0.5", 1).unwrap(), Scalar::Float(0.5));
        assert_eq!(parse_scalar("-3", 1).unwrap(), Scalar::rational(int(-3)));
        assert_eq!(parse_scalar("1e-3", 1).unwrap(), Scalar::Float(1e-3));
    }

    #[test]
    fn distinct_parse_errors() {
        let base = "design v1\nmeasure: gaussian\ndimension: 1\nkind: signed\npoints: 1\n";
        let e = parse_design(&format!("{base}1 1/0\n")).unwrap_err();
        assert_eq!(
            e,
            Error::ZeroDenominator {
                line: 6,
                token: "1/0".into()
            }
        );
        let e = parse_design(&format!("{base}1.0 NaN\n")).unwrap_err();
        assert!(matches!(e, Error::NonFinite { line: 6, .. }));
        let e = parse_design(&format!("{base}1.0 inf\n")).unwrap_err();
        assert!(matches!(e, Error::NonFinite { line: 6, .. }));
        let e = parse_design("design v2\n").unwrap_err();
        assert!(matches!(e, Error::MalformedHeader { line: 1, .. }));
        let e = parse_design("design v1\nmeasure: torus\n").unwrap_err();
        assert!(matches!(e, Error::MalformedHeader { line: 2, .. }));
    }

    #[test]
    fn float_tokens_survive_roundtrip() {
        for x in [0.0, 1.0, -0.1, 1e-7, 123456.789, 5e-324, 1.0 / 3.0] {
            let s = format_float(x);
            assert_eq!(parse_scalar(&s, 1).unwrap(), Scalar::Float(x), "{s}");
        }
    }
}
