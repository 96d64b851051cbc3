//! Moving designs between the sphere and the Gaussian measure, and
//! projecting them to fewer coordinates.
//!
//! A spherical design times the radial Gauss rule is a Gaussian design;
//! normalizing a Gaussian design to the sphere with weights `w |x|^s` and
//! symmetrizing gives back a spherical design.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::kernel::{kind_for_weights, Kind, Measure, Scalar, WeightedPointSet};
use crate::moments::radial_moment;
use crate::quad1d::radial_design;
use crate::verify::{verify_design, Mode, DEFAULT_TOLERANCE};

/// Directions closer than this (max-norm) are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;

fn require_design(x: &WeightedPointSet, t: u32, measure: Measure) -> Result<()> {
    if x.measure() != measure {
        return Err(Error::InvalidSet(format!(
            "expected a {measure} point set, got {}",
            x.measure()
        )));
    }
    let report = verify_design(x, t, Mode::Float, DEFAULT_TOLERANCE)?;
    if !report.pass {
        return Err(Error::NotADesign {
            measure: measure.to_string(),
            t,
            residual: report.max_residual(),
        });
    }
    Ok(())
}

/// Gaussian `t`-design with at most `ceil((t+1)/2) N` points from a
/// spherical `t`-design of size `N`.
pub fn spherical_to_gaussian(x: &WeightedPointSet, t: u32) -> Result<WeightedPointSet> {
    require_design(x, t, Measure::Sphere)?;
    spherical_to_gaussian_unchecked(x, t)
}

/// [`spherical_to_gaussian`] without verifying the input first.
pub fn spherical_to_gaussian_unchecked(x: &WeightedPointSet, t: u32) -> Result<WeightedPointSet> {
    let rule = radial_design(x.dimension(), t)?;
    let pts = x.float_points();
    let ws = x.float_weights();
    let mut points = Vec::with_capacity(rule.len() * pts.len());
    let mut weights = Vec::with_capacity(rule.len() * pts.len());
    for (r, beta) in rule.nodes.iter().zip(&rule.weights) {
        for (p, w) in pts.iter().zip(&ws) {
            points.push(p.iter().map(|c| r * c).collect());
            weights.push(beta * w);
        }
    }
    let kind = kind_for_weights(&weights);
    Ok(
        WeightedPointSet::from_f64(Measure::Gaussian, kind, points, Some(weights))?
            .with_claimed_strength(Some(t)),
    )
}

fn cmp_points(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Sums the weights of points within [`MERGE_TOLERANCE`] of each other.
/// The first point of each cluster in sorted order represents it.
fn merge(points: Vec<Vec<f64>>, weights: Vec<f64>) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| cmp_points(&points[i], &points[j]));
    let mut reps: Vec<Vec<f64>> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    for i in order {
        let p = &points[i];
        let mut hit = None;
        for (k, r) in reps.iter().enumerate().rev() {
            if r[0] < p[0] - MERGE_TOLERANCE {
                break;
            }
            if r.iter()
                .zip(p)
                .all(|(a, b)| (a - b).abs() <= MERGE_TOLERANCE)
            {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => sums[k] += weights[i],
            None => {
                reps.push(p.clone());
                sums.push(weights[i]);
            }
        }
    }
    (reps, sums)
}

/// Spherical `t`-design with at most `2N` points from a Gaussian `t`-design
/// of size `N`.
///
/// Points go to `x/|x|` with weight proportional to `w |x|^s`,
/// `s = 2 floor(t/2)`. A point at the origin is an error when `s = 0`; for
/// `s > 0` its weight is exactly zero and it is dropped.
pub fn gaussian_to_spherical(x: &WeightedPointSet, t: u32) -> Result<WeightedPointSet> {
    if x.measure() != Measure::Gaussian {
        return Err(Error::InvalidSet(format!(
            "expected a gaussian point set, got {}",
            x.measure()
        )));
    }
    let d = x.dimension();
    let s = 2 * (t / 2);
    let normalizer = radial_moment(s, d).to_f64();
    let mut dirs = Vec::with_capacity(x.len());
    let mut weights = Vec::with_capacity(x.len());
    for (index, (p, w)) in x
        .float_points()
        .into_iter()
        .zip(x.float_weights())
        .enumerate()
    {
        let r = p.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r == 0.0 {
            if s == 0 {
                return Err(Error::OriginPoint { index });
            }
            continue;
        }
        dirs.push(p.iter().map(|c| c / r).collect::<Vec<f64>>());
        weights.push(w * r.powi(s as i32) / normalizer);
    }
    if dirs.is_empty() {
        return Err(Error::InvalidSet("every point is at the origin".into()));
    }
    let (dirs, weights) = merge(dirs, weights);
    let mut sym_points = Vec::with_capacity(2 * dirs.len());
    let mut sym_weights = Vec::with_capacity(2 * dirs.len());
    for (p, w) in dirs.iter().zip(&weights) {
        sym_points.push(p.clone());
        sym_weights.push(w / 2.0);
        sym_points.push(p.iter().map(|c| -c).collect());
        sym_weights.push(w / 2.0);
    }
    let (points, mut weights) = merge(sym_points, sym_weights);
    let (points, mut weights): (Vec<_>, Vec<_>) = points
        .into_iter()
        .zip(weights.drain(..))
        .filter(|(_, w)| *w != 0.0)
        .unzip();
    let total: f64 = crate::kernel::kahan_sum(weights.iter().copied());
    for w in &mut weights {
        *w /= total;
    }
    let n = weights.len();
    let uniform = weights
        .iter()
        .all(|w| (w - 1.0 / n as f64).abs() <= MERGE_TOLERANCE);
    let kind = if uniform {
        weights = vec![1.0 / n as f64; n];
        Kind::Unweighted
    } else {
        kind_for_weights(&weights)
    };
    Ok(
        WeightedPointSet::from_f64(Measure::Sphere, kind, points, Some(weights))?
            .with_claimed_strength(Some(t)),
    )
}

/// Keeps the first `k` coordinates. Exact sets stay exact.
pub fn project_gaussian(x: &WeightedPointSet, k: usize) -> Result<WeightedPointSet> {
    let d = x.dimension();
    if k == 0 || k > d {
        return Err(Error::BadDimension { k, d });
    }
    let points: Vec<Vec<Scalar>> = x.points().iter().map(|p| p[..k].to_vec()).collect();
    WeightedPointSet::new(
        k,
        x.measure(),
        x.kind(),
        points,
        x.weights().to_vec(),
        x.claimed_strength(),
    )
}

/// Spherical `t`-design in `R^k` from one in `R^d`, through the Gaussian
/// measure. At most `2 ceil((t+1)/2) N` points.
pub fn project_spherical(x: &WeightedPointSet, k: usize, t: u32) -> Result<WeightedPointSet> {
    let d = x.dimension();
    if k == 0 || k > d {
        return Err(Error::BadDimension { k, d });
    }
    let g = spherical_to_gaussian(x, t)?;
    gaussian_to_spherical(&project_gaussian(&g, k)?, t)
}
