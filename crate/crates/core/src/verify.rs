//! Moment-residual verification of point sets on the monomial basis.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::number::KahanSum;
use crate::kernel::{enumerate_multi_indices, MultiIndex, PiSum, PiValue, WeightedPointSet};
use crate::moments::moment;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub strength_tested: u32,
    /// Entry `k` is the largest residual over monomials of degree `k`.
    pub per_degree_max_residual: Vec<f64>,
    /// Monomial with the largest residual (lexicographically greatest among
    /// ties); `None` when every residual is zero.
    pub worst_monomial: Option<MultiIndex>,
    pub worst_residual: f64,
    /// Signed exact residual `sum w x^alpha - moment` at the worst monomial.
    pub worst_residual_exact: Option<PiSum>,
    pub mode: Mode,
    pub pass: bool,
    pub tolerance: f64,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        self.per_degree_max_residual
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode: {}", self.mode)?;
        writeln!(f, "strength: {}", self.strength_tested)?;
        if self.mode == Mode::Float {
            writeln!(f, "tolerance: {:e}", self.tolerance)?;
        }
        for (k, r) in self.per_degree_max_residual.iter().enumerate() {
            writeln!(f, "degree {k}: max residual {r:e}")?;
        }
        match &self.worst_monomial {
            Some(a) => {
                write!(
                    f,
                    "worst: {} {a} residual {:e}",
                    a.monomial(),
                    self.worst_residual
                )?;
                if let Some(e) = &self.worst_residual_exact {
                    write!(f, " (exact {e})")?;
                }
                writeln!(f)?;
            }
            None => writeln!(f, "worst: none")?,
        }
        writeln!(f, "result: {}", if self.pass { "pass" } else { "fail" })
    }
}

/// `sum_x w(x) x^alpha` with exact arithmetic.
pub fn exact_monomial_sum(set: &WeightedPointSet, alpha: &MultiIndex) -> Result<PiSum> {
    let mut acc = PiSum::zero();
    for (p, w) in set.points().iter().zip(set.weights()) {
        let mut term = w
            .as_exact()
            .ok_or_else(|| Error::ExactUnsupported("set has float scalars".into()))?
            .clone();
        for (c, &e) in p.iter().zip(alpha.exponents()) {
            if e == 0 {
                continue;
            }
            let c = c
                .as_exact()
                .ok_or_else(|| Error::ExactUnsupported("set has float scalars".into()))?;
            term = &term * &c.pow(e);
            if term.is_zero() {
                break;
            }
        }
        acc.add_value(&term);
    }
    Ok(acc)
}

/// `sum_x w(x) x^alpha` in binary64, compensated, in point order.
pub fn float_monomial_sum(points: &[Vec<f64>], weights: &[f64], alpha: &MultiIndex) -> f64 {
    let mut acc = KahanSum::new();
    for (p, w) in points.iter().zip(weights) {
        let mut term = *w;
        for (c, &e) in p.iter().zip(alpha.exponents()) {
            if e != 0 {
                term *= c.powi(e as i32);
            }
        }
        acc.add(term);
    }
    acc.value()
}

/// Residuals of every monomial of degree at most `t`.
pub fn verify_design(
    set: &WeightedPointSet,
    t: u32,
    mode: Mode,
    tolerance: f64,
) -> Result<VerificationReport> {
    if mode == Mode::Exact && !set.is_exact() {
        return Err(Error::ExactUnsupported(
            "coordinates or weights are binary64; use float mode".into(),
        ));
    }
    let d = set.dimension();
    let (fp, fw) = (set.float_points(), set.float_weights());
    let mut per_degree = vec![0.0f64; t as usize + 1];
    let mut worst: Option<(f64, MultiIndex, Option<PiSum>)> = None;
    let mut all_exact_zero = true;

    for alpha in enumerate_multi_indices(d, t) {
        let target = moment(set.measure(), &alpha);
        let (r, exact) = match mode {
            Mode::Exact => {
                let mut s = exact_monomial_sum(set, &alpha)?;
                s.sub_value(&target);
                all_exact_zero &= s.is_zero();
                (s.to_f64().abs(), Some(s))
            }
            Mode::Float => {
                let s = float_monomial_sum(&fp, &fw, &alpha);
                ((s - target.to_f64()).abs(), None)
            }
        };
        let k = alpha.degree() as usize;
        per_degree[k] = per_degree[k].max(r);
        // lexicographic order means `>=` keeps the greatest index among ties
        if r > 0.0 && worst.as_ref().is_none_or(|(w, _, _)| r >= *w) {
            worst = Some((r, alpha, exact));
        }
    }
    let worst_residual = worst.as_ref().map_or(0.0, |w| w.0);
    let pass = match mode {
        Mode::Exact => all_exact_zero,
        Mode::Float => worst_residual <= tolerance,
    };
    let (worst_monomial, worst_residual_exact) = match worst {
        Some((_, a, e)) => (Some(a), e),
        None => (None, None),
    };
    Ok(VerificationReport {
        strength_tested: t,
        per_degree_max_residual: per_degree,
        worst_monomial,
        worst_residual,
        worst_residual_exact,
        mode,
        pass,
        tolerance,
    })
}

/// Outcome of [`verify_odd_vanishing`].
#[derive(Clone, Debug, PartialEq)]
pub struct OddVanishingReport {
    pub degree_cap: u32,
    pub checked: usize,
    /// First monomial (lexicographic) whose weighted sum is not zero.
    pub failure: Option<(MultiIndex, f64)>,
    pub exact: bool,
}

impl OddVanishingReport {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks that every monomial with an odd exponent and degree at most
/// `degree_cap` sums to zero: exactly for exact sets, within
/// [`DEFAULT_TOLERANCE`] otherwise.
pub fn verify_odd_vanishing(set: &WeightedPointSet, degree_cap: u32) -> OddVanishingReport {
    let (fp, fw) = (set.float_points(), set.float_weights());
    let mut checked = 0;
    for alpha in enumerate_multi_indices(set.dimension(), degree_cap) {
        if !alpha.has_odd() {
            continue;
        }
        checked += 1;
        let bad = if set.is_exact() {
            let s = exact_monomial_sum(set, &alpha).expect("exact set");
            (!s.is_zero()).then(|| s.to_f64())
        } else {
            let s = float_monomial_sum(&fp, &fw, &alpha);
            (s.abs() > DEFAULT_TOLERANCE).then_some(s)
        };
        if let Some(v) = bad {
            return OddVanishingReport {
                degree_cap,
                checked,
                failure: Some((alpha, v)),
                exact: set.is_exact(),
            };
        }
    }
    OddVanishingReport {
        degree_cap,
        checked,
        failure: None,
        exact: set.is_exact(),
    }
}

/// The exact moment as a value, for callers formatting reports.
pub fn target_moment(set: &WeightedPointSet, alpha: &MultiIndex) -> PiValue {
    moment(set.measure(), alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat, Kind, Measure, Rational};

    fn cross(d: usize) -> WeightedPointSet {
        let mut pts = Vec::new();
        for i in 0..d {
            for s in [1, -1] {
                let mut p = vec![int(0); d];
                p[i] = int(s);
                pts.push(p);
            }
        }
        WeightedPointSet::from_rational(Measure::Sphere, Kind::Unweighted, pts, None).unwrap()
    }

    #[test]
    fn cross_polytope_strength_three() {
        let r = verify_design(&cross(3), 3, Mode::Exact, DEFAULT_TOLERANCE).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_residual(), 0.0);
        assert!(r.worst_monomial.is_none());
    }

    #[test]
    fn cross_polytope_fails_at_four() {
        let r = verify_design(&cross(3), 4, Mode::Exact, DEFAULT_TOLERANCE).unwrap();
        assert!(!r.pass);
        let w = r.worst_monomial.clone().unwrap();
        assert_eq!(w, MultiIndex::new(vec![4, 0, 0]));
        assert_eq!(w.monomial(), "x1^4");
        assert_eq!(
            r.worst_residual_exact.clone().unwrap().as_value().unwrap(),
            PiValue::rational(rat(2, 15))
        );
        assert!(r.to_string().contains("worst: x1^4"));
    }

    #[test]
    fn float_agrees_with_exact() {
        for d in 1..=5 {
            for t in 0..=5 {
                let set = cross(d);
                let e = verify_design(&set, t, Mode::Exact, DEFAULT_TOLERANCE).unwrap();
                let f = verify_design(&set.to_float(), t, Mode::Float, DEFAULT_TOLERANCE).unwrap();
                assert_eq!(e.pass, f.pass, "d={d} t={t}");
            }
        }
    }

    #[test]
    fn exact_mode_needs_exact_scalars() {
        let err = verify_design(&cross(2).to_float(), 2, Mode::Exact, 1e-9).unwrap_err();
        assert!(matches!(err, Error::ExactUnsupported(_)));
    }

    #[test]
    fn monotone_in_strength() {
        let set = cross(4);
        let mut passed = true;
        for t in 0..=6 {
            let p = verify_design(&set, t, Mode::Exact, 1e-9).unwrap().pass;
            assert!(passed || !p, "pass at {t} after a failure");
            passed = p;
        }
    }

    #[test]
    fn permutation_invariance() {
        let pts = vec![
            vec![rat(3, 5), rat(4, 5), int(0)],
            vec![rat(-3, 5), rat(-4, 5), int(0)],
            vec![int(0), int(0), int(1)],
        ];
        let set =
            WeightedPointSet::from_rational(Measure::Sphere, Kind::Unweighted, pts, None).unwrap();
        let perm = set.permute_coordinates(&[2, 0, 1]).unwrap();
        for t in 0..=4 {
            let a = verify_design(&set, t, Mode::Exact, 1e-9).unwrap();
            let b = verify_design(&perm, t, Mode::Exact, 1e-9).unwrap();
            assert_eq!(a.pass, b.pass);
            assert_eq!(a.per_degree_max_residual, b.per_degree_max_residual);
        }
    }

    #[test]
    fn odd_vanishing() {
        assert!(verify_odd_vanishing(&cross(3), 5).pass());
        let single = WeightedPointSet::from_rational(
            Measure::Sphere,
            Kind::Unweighted,
            vec![vec![int(1), int(0)]],
            None,
        )
        .unwrap();
        let r = verify_odd_vanishing(&single, 1);
        assert_eq!(r.failure.unwrap().0, MultiIndex::new(vec![1, 0]));
    }

    #[test]
    fn gaussian_exact_residuals_mix_gradings() {
        // a single rational point cannot match pi-graded moments
        let set = WeightedPointSet::from_rational(
            Measure::Gaussian,
            Kind::Unweighted,
            vec![vec![Rational::from_integer(0.into())]],
            None,
        )
        .unwrap();
        assert!(verify_design(&set, 1, Mode::Exact, 1e-9).unwrap().pass);
        assert!(!verify_design(&set, 2, Mode::Exact, 1e-9).unwrap().pass);
    }
}
