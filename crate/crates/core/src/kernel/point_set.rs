use std::fmt;
use std::str::FromStr;

use super::number::{kahan_sum, PiSum, PiValue, Rational, Scalar};
use crate::error::{Error, Result};

/// Float tolerance for the weight-sum and unit-norm invariants.
pub const SET_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Normalized surface measure on the unit sphere.
    Sphere,
    /// `exp(-pi |x|^2) dx` on `R^d`.
    Gaussian,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Sphere => "sphere",
            Measure::Gaussian => "gaussian",
        })
    }
}

impl FromStr for Measure {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sphere" => Ok(Measure::Sphere),
            "gaussian" => Ok(Measure::Gaussian),
            other => Err(format!("unknown measure `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Unweighted,
    Weighted,
    Signed,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Unweighted => "unweighted",
            Kind::Weighted => "weighted",
            Kind::Signed => "signed",
        })
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "unweighted" => Ok(Kind::Unweighted),
            "weighted" => Ok(Kind::Weighted),
            "signed" => Ok(Kind::Signed),
            other => Err(format!("unknown kind `{other}`")),
        }
    }
}

/// Points in `R^d` carrying weights, tagged with the measure they average.
///
/// Invariants are checked on construction: uniform scalar mode, weights summing
/// to one, equal weights for `Unweighted`, positive weights for `Weighted`, and
/// unit norms for `Sphere`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPointSet {
    dimension: usize,
    measure: Measure,
    kind: Kind,
    points: Vec<Vec<Scalar>>,
    weights: Vec<Scalar>,
    claimed_strength: Option<u32>,
}

impl WeightedPointSet {
    pub fn new(
        dimension: usize,
        measure: Measure,
        kind: Kind,
        points: Vec<Vec<Scalar>>,
        weights: Vec<Scalar>,
        claimed_strength: Option<u32>,
    ) -> Result<Self> {
        let set = Self {
            dimension,
            measure,
            kind,
            points,
            weights,
            claimed_strength,
        };
        set.validate()?;
        Ok(set)
    }

    /// Float set; `Unweighted` gets weights `1/N`.
    pub fn from_f64(
        measure: Measure,
        kind: Kind,
        points: Vec<Vec<f64>>,
        weights: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = points.len();
        let dimension = points.first().map_or(0, |p| p.len());
        let weights = weights.unwrap_or_else(|| vec![1.0 / n as f64; n]);
        Self::new(
            dimension,
            measure,
            kind,
            points
                .into_iter()
                .map(|p| p.into_iter().map(Scalar::Float).collect())
                .collect(),
            weights.into_iter().map(Scalar::Float).collect(),
            None,
        )
    }

    /// Exact rational set; `None` weights means uniform `1/N`.
    pub fn from_rational(
        measure: Measure,
        kind: Kind,
        points: Vec<Vec<Rational>>,
        weights: Option<Vec<Rational>>,
    ) -> Result<Self> {
        let n = points.len();
        let dimension = points.first().map_or(0, |p| p.len());
        let weights =
            weights.unwrap_or_else(|| vec![Rational::new(1.into(), (n.max(1) as i64).into()); n]);
        Self::new(
            dimension,
            measure,
            kind,
            points
                .into_iter()
                .map(|p| p.into_iter().map(Scalar::rational).collect())
                .collect(),
            weights.into_iter().map(Scalar::rational).collect(),
            None,
        )
    }

    pub fn with_claimed_strength(mut self, t: Option<u32>) -> Self {
        self.claimed_strength = t;
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSet(msg));
        if self.dimension == 0 {
            return bad("dimension must be at least 1".into());
        }
        if self.points.is_empty() {
            return bad("a design needs at least one point".into());
        }
        if self.points.len() != self.weights.len() {
            return bad(format!(
                "{} points but {} weights",
                self.points.len(),
                self.weights.len()
            ));
        }
        if let Some(i) = self.points.iter().position(|p| p.len() != self.dimension) {
            return bad(format!(
                "point {i} does not have {} coordinates",
                self.dimension
            ));
        }
        let exact = self.weights[0].is_exact();
        let mixed = self
            .points
            .iter()
            .flatten()
            .chain(self.weights.iter())
            .any(|s| s.is_exact() != exact);
        if mixed {
            return bad("exact and float scalars are mixed".into());
        }
        if !exact {
            let non_finite = self
                .points
                .iter()
                .flatten()
                .chain(self.weights.iter())
                .any(|s| !s.to_f64().is_finite());
            if non_finite {
                return bad("non-finite coordinate or weight".into());
            }
        }

        let n = self.weights.len();
        match self.kind {
            Kind::Unweighted => {
                let ok = if exact {
                    let target = PiValue::rational(Rational::new(1.into(), (n as i64).into()));
                    self.weights.iter().all(|w| w.as_exact() == Some(&target))
                } else {
                    let target = 1.0 / n as f64;
                    self.weights
                        .iter()
                        .all(|w| (w.to_f64() - target).abs() <= SET_TOLERANCE)
                };
                if !ok {
                    return bad("unweighted set must have all weights equal to 1/N".into());
                }
            }
            Kind::Weighted => {
                if let Some(i) = self.weights.iter().position(|w| !w.is_positive()) {
                    return bad(format!("weighted set has non-positive weight at point {i}"));
                }
            }
            Kind::Signed => {}
        }

        if exact {
            let mut sum = PiSum::zero();
            for w in &self.weights {
                sum.add_value(w.as_exact().expect("mode checked"));
            }
            if sum != PiSum::from(PiValue::one()) {
                return bad(format!("weights sum to {sum}, not 1"));
            }
        } else {
            let sum = kahan_sum(self.weights.iter().map(Scalar::to_f64));
            if (sum - 1.0).abs() > SET_TOLERANCE {
                return bad(format!("weights sum to {sum}, not 1"));
            }
        }

        if self.measure == Measure::Sphere {
            for (i, p) in self.points.iter().enumerate() {
                let on_sphere = if exact {
                    let mut norm = PiSum::zero();
                    for c in p {
                        let c = c.as_exact().expect("mode checked");
                        norm.add_value(&(c * c));
                    }
                    norm == PiSum::from(PiValue::one())
                } else {
                    let norm = kahan_sum(p.iter().map(|c| c.to_f64() * c.to_f64()));
                    (norm - 1.0).abs() <= SET_TOLERANCE
                };
                if !on_sphere {
                    return bad(format!("point {i} is not on the unit sphere"));
                }
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn claimed_strength(&self) -> Option<u32> {
        self.claimed_strength
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn is_exact(&self) -> bool {
        self.weights[0].is_exact()
    }

    pub fn float_points(&self) -> Vec<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.iter().map(Scalar::to_f64).collect())
            .collect()
    }

    pub fn float_weights(&self) -> Vec<f64> {
        self.weights.iter().map(Scalar::to_f64).collect()
    }

    /// The same set converted to binary64.
    pub fn to_float(&self) -> WeightedPointSet {
        let mut out = self.clone();
        for p in &mut out.points {
            for c in p.iter_mut() {
                *c = Scalar::Float(c.to_f64());
            }
        }
        for w in &mut out.weights {
            *w = Scalar::Float(w.to_f64());
        }
        out
    }

    /// Coordinates permuted by `perm` (new coordinate `i` is old `perm[i]`).
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<WeightedPointSet> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.dimension).collect::<Vec<_>>() {
            return Err(Error::InvalidSet("not a coordinate permutation".into()));
        }
        let points = self
            .points
            .iter()
            .map(|p| perm.iter().map(|&j| p[j].clone()).collect())
            .collect();
        WeightedPointSet::new(
            self.dimension,
            self.measure,
            self.kind,
            points,
            self.weights.clone(),
            self.claimed_strength,
        )
    }
}

/// `Weighted` when every weight is positive, `Signed` otherwise.
pub fn kind_for_weights(weights: &[f64]) -> Kind {
    if weights.iter().all(|w| *w > 0.0) {
        Kind::Weighted
    } else {
        Kind::Signed
    }
}
