//! Weighted designs by fitting nonnegative weights on a candidate pool, then
//! shrinking the support Carathéodory-style.

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gegenbauer::{dim_p_gaussian, dim_p_sphere};
use crate::kernel::number::kahan_sum;
use crate::kernel::{
    enumerate_multi_indices, Kind, Measure, MultiIndex, Rational, Scalar, WeightedPointSet,
};
use crate::linalg::{float_null_vector, nnls, rational_null_vector};
use crate::moments::moment;
use crate::verify::{verify_design, Mode};

/// Moment tolerance for fitted and pruned float designs.
pub const PRUNE_TOLERANCE: f64 = 1e-9;

/// Rows: monomials of degree at most `s` (lexicographic); columns: points.
pub fn moment_matrix(points: &[Vec<f64>], s: u32) -> (Vec<MultiIndex>, DMatrix<f64>) {
    let d = points.first().map_or(0, |p| p.len());
    let alphas = enumerate_multi_indices(d, s);
    let m = DMatrix::from_fn(alphas.len(), points.len(), |i, j| {
        points[j]
            .iter()
            .zip(alphas[i].exponents())
            .map(|(x, &e)| x.powi(e as i32))
            .product()
    });
    (alphas, m)
}

fn target_vector(measure: Measure, alphas: &[MultiIndex]) -> DVector<f64> {
    DVector::from_iterator(
        alphas.len(),
        alphas.iter().map(|a| moment(measure, a).to_f64()),
    )
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dim_p(measure: Measure, d: usize, s: u32) -> u128 {
    match measure {
        Measure::Sphere => dim_p_sphere(d, s as usize),
        Measure::Gaussian => dim_p_gaussian(d, s as usize),
    }
}

/// Nonnegative weights on `pool` matching every moment of degree at most `s`.
///
/// The fit is nonnegative least squares; zero-weight points are dropped and
/// the rest rescaled to total mass one. Fails when the residual exceeds
/// [`PRUNE_TOLERANCE`].
pub fn fit_weights_on_pool(
    pool: &[Vec<f64>],
    measure: Measure,
    s: u32,
) -> Result<WeightedPointSet> {
    if pool.is_empty() {
        return Err(Error::FitFailed {
            residual: f64::INFINITY,
            tolerance: PRUNE_TOLERANCE,
        });
    }
    let (alphas, a) = moment_matrix(pool, s);
    let b = target_vector(measure, &alphas);
    let w = nnls(&a, &b);
    let residual = max_abs(&(&a * &w - &b));
    if residual > PRUNE_TOLERANCE {
        return Err(Error::FitFailed {
            residual,
            tolerance: PRUNE_TOLERANCE,
        });
    }
    let keep: Vec<usize> = (0..pool.len()).filter(|&j| w[j] > 0.0).collect();
    let total = kahan_sum(keep.iter().map(|&j| w[j]));
    let points = keep.iter().map(|&j| pool[j].clone()).collect();
    let weights = keep.iter().map(|&j| w[j] / total).collect();
    Ok(
        WeightedPointSet::from_f64(measure, Kind::Weighted, points, Some(weights))?
            .with_claimed_strength(Some(s)),
    )
}

/// Shrinks the support of a nonnegative design while keeping every moment of
/// degree at most `s`: repeatedly take a null vector of the moment matrix on
/// the support and step until one weight reaches zero. The result has at most
/// `dim P_s` points. Exact sets are pruned in exact arithmetic.
pub fn caratheodory_prune(x: &WeightedPointSet, s: u32) -> Result<WeightedPointSet> {
    if x.weights().iter().any(Scalar::is_negative) {
        return Err(Error::InvalidSet(
            "pruning needs nonnegative weights".into(),
        ));
    }
    let mode = if x.is_exact() {
        Mode::Exact
    } else {
        Mode::Float
    };
    let report = verify_design(x, s, mode, PRUNE_TOLERANCE)?;
    if !report.pass {
        return Err(Error::NotADesign {
            measure: x.measure().to_string(),
            t: s,
            residual: report.max_residual(),
        });
    }
    let out = if x.is_exact() {
        prune_exact(x, s)?
    } else {
        prune_float(x, s)?
    };
    Ok(out.with_claimed_strength(Some(s)))
}

fn prune_float(x: &WeightedPointSet, s: u32) -> Result<WeightedPointSet> {
    let points = x.float_points();
    let mut w = x.float_weights();
    let (alphas, full) = moment_matrix(&points, s);
    let bound = dim_p(x.measure(), x.dimension(), s) as usize;
    let mut support: Vec<usize> = (0..points.len()).filter(|&j| w[j] > 0.0).collect();

    loop {
        // any `bound + 1` columns are dependent, so a window suffices
        let window: Vec<usize> = support.iter().copied().take(bound + 1).collect();
        let sub = full.select_columns(&window);
        let Some(mut v) = float_null_vector(&sub, 1e-10) else {
            break;
        };
        if v.iter().all(|c| *c <= 0.0) {
            v = -v;
        }
        let (k, theta) = window
            .iter()
            .enumerate()
            .filter(|(i, _)| v[*i] > 1e-14)
            .map(|(i, &j)| (i, w[j] / v[i]))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("a null vector with zero sum has a positive entry");
        for (i, &j) in window.iter().enumerate() {
            w[j] -= theta * v[i];
        }
        w[window[k]] = 0.0;
        support.retain(|&j| w[j] > 1e-15);
    }

    // re-fit on the final support to wash out accumulated rounding
    let sub = full.select_columns(&support);
    let b = target_vector(x.measure(), &alphas);
    let refit = nnls(&sub, &b);
    let drift = max_abs(&(&sub * &refit - &b));
    if drift > PRUNE_TOLERANCE {
        return Err(Error::PruneStall {
            support: support.len(),
            drift,
        });
    }
    let keep: Vec<usize> = (0..support.len()).filter(|&i| refit[i] > 0.0).collect();
    let total = kahan_sum(keep.iter().map(|&i| refit[i]));
    let pts = keep.iter().map(|&i| points[support[i]].clone()).collect();
    let ws = keep.iter().map(|&i| refit[i] / total).collect();
    WeightedPointSet::from_f64(x.measure(), Kind::Weighted, pts, Some(ws))
}

fn prune_exact(x: &WeightedPointSet, s: u32) -> Result<WeightedPointSet> {
    let unsupported =
        || Error::ExactUnsupported("pruning needs rational coordinates and weights".into());
    let points: Vec<Vec<Rational>> = x
        .points()
        .iter()
        .map(|p| {
            p.iter()
                .map(|c| c.as_exact().and_then(|v| v.as_rational()).cloned())
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<_>>()
        .ok_or_else(unsupported)?;
    let mut w: Vec<Rational> = x
        .weights()
        .iter()
        .map(|c| c.as_exact().and_then(|v| v.as_rational()).cloned())
        .collect::<Option<_>>()
        .ok_or_else(unsupported)?;
    let alphas = enumerate_multi_indices(x.dimension(), s);
    let column = |p: &[Rational]| -> Vec<Rational> {
        alphas
            .iter()
            .map(|a| {
                p.iter()
                    .zip(a.exponents())
                    .map(|(c, &e)| num_traits::pow(c.clone(), e as usize))
                    .product()
            })
            .collect()
    };
    let columns: Vec<Vec<Rational>> = points.iter().map(|p| column(p)).collect();
    let mut support: Vec<usize> = (0..points.len()).filter(|&j| w[j].is_positive()).collect();
    loop {
        let rows: Vec<Vec<Rational>> = (0..alphas.len())
            .map(|i| support.iter().map(|&j| columns[j][i].clone()).collect())
            .collect();
        let Some(mut v) = rational_null_vector(&rows) else {
            break;
        };
        if !v.iter().any(|c| c.is_positive()) {
            v = v.into_iter().map(|c| -c).collect();
        }
        let (k, theta) = support
            .iter()
            .enumerate()
            .filter(|(i, _)| v[*i].is_positive())
            .map(|(i, &j)| (i, &w[j] / &v[i]))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("positive entry");
        for (i, &j) in support.iter().enumerate() {
            w[j] -= &theta * &v[i];
        }
        w[support[k]] = Rational::zero();
        support.retain(|&j| w[j].is_positive());
    }
    let pts = support.iter().map(|&j| points[j].clone()).collect();
    let ws = support.iter().map(|&j| w[j].clone()).collect();
    WeightedPointSet::from_rational(x.measure(), Kind::Weighted, pts, Some(ws))
}
