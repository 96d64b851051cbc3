//! One-dimensional moment matching: Gauss quadrature from a moment sequence
//! (Golub-Welsch), the radial rule used by the sphere/Gaussian transfer, and a
//! restart search for equal-weight Gaussian rules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::MultiIndex;
use crate::moments::{gaussian_moment, radial_moment};
use crate::sampling::rng_from_seed;

/// Residual tolerance for a returned rule, relative to `max(1, |m_k|)`.
pub const QUAD_TOLERANCE: f64 = 1e-10;

/// Restart budget of [`unweighted_1d_gaussian_design`].
pub const SEARCH_RESTARTS: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub matched_degree: u32,
}

impl Quadrature {
    /// `sum_i w_i x_i^k`.
    pub fn moment(&self, k: u32) -> f64 {
        crate::kernel::kahan_sum(
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| w * x.powi(k as i32)),
        )
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss rule with `n` nodes for the measure whose moments are `moments[k]`.
///
/// Needs `m_0 .. m_{2n-1}`. The Jacobi matrix comes from a partial Cholesky
/// factor of the `(n+1) x (n+1)` Hankel matrix; nodes are its eigenvalues and
/// weights `m_0 v_0^2`. A short Newton polish on the moment equations follows.
pub fn gauss_quadrature(moments: &[f64], n: usize) -> Result<Quadrature> {
    if n == 0 || moments.len() < 2 * n {
        return Err(Error::TooFewMoments {
            needed: 2 * n.max(1),
            got: moments.len(),
        });
    }
    let h = |i: usize, j: usize| moments[i + j];

    // rows 0..n of the upper Cholesky factor, columns 0..=n
    let mut r = vec![vec![0.0f64; n + 1]; n];
    for i in 0..n {
        let diag = h(i, i) - (0..i).map(|k| r[k][i] * r[k][i]).sum::<f64>();
        if !(diag > 0.0) || diag <= 1e-14 * h(i, i).abs() {
            return Err(Error::HankelNotPD { order: i + 1 });
        }
        r[i][i] = diag.sqrt();
        for j in i + 1..=n {
            let s = h(i, j) - (0..i).map(|k| r[k][i] * r[k][j]).sum::<f64>();
            r[i][j] = s / r[i][i];
        }
    }

    let mut jac = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let prev = if j == 0 {
            0.0
        } else {
            r[j - 1][j] / r[j - 1][j - 1]
        };
        jac[(j, j)] = r[j][j + 1] / r[j][j] - prev;
        if j + 1 < n {
            let b = r[j + 1][j + 1] / r[j][j];
            jac[(j, j + 1)] = b;
            jac[(j + 1, j)] = b;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], moments[0] * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut quad = Quadrature {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        matched_degree: (2 * n - 1) as u32,
    };
    polish(&mut quad, &moments[..2 * n]);
    if quad.weights.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::HankelNotPD { order: n });
    }
    Ok(quad)
}

fn moment_residual(quad: &Quadrature, moments: &[f64]) -> f64 {
    moments
        .iter()
        .enumerate()
        .map(|(k, m)| (quad.moment(k as u32) - m).abs() / m.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Newton steps on `sum_i w_i x_i^k = m_k`, kept only while they help.
fn polish(quad: &mut Quadrature, moments: &[f64]) {
    let n = quad.nodes.len();
    let mut best = moment_residual(quad, moments);
    for _ in 0..8 {
        if best == 0.0 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(2 * n, 2 * n);
        let mut res = DVector::<f64>::zeros(2 * n);
        for k in 0..2 * n {
            res[k] = quad.moment(k as u32) - moments[k];
            for i in 0..n {
                let x = quad.nodes[i];
                jac[(k, i)] = if k == 0 {
                    0.0
                } else {
                    quad.weights[i] * k as f64 * x.powi(k as i32 - 1)
                };
                jac[(k, n + i)] = x.powi(k as i32);
            }
        }
        let Some(step) = jac.lu().solve(&res) else {
            break;
        };
        let mut trial = quad.clone();
        for i in 0..n {
            trial.nodes[i] -= step[i];
            trial.weights[i] -= step[n + i];
        }
        let r = moment_residual(&trial, moments);
        if r < best {
            best = r;
            *quad = trial;
        } else {
            break;
        }
    }
}

/// Gauss rule for the law of `|x|`, `x ~ exp(-pi|x|^2)dx` on `R^d`, with
/// `ceil((t+1)/2)` nodes. It matches radial moments `0..=t` and beyond.
pub fn radial_design(d: usize, t: u32) -> Result<Quadrature> {
    let n = (t as usize + 2) / 2;
    let moments: Vec<f64> = (0..2 * n as u32)
        .map(|k| radial_moment(k, d).to_f64())
        .collect();
    gauss_quadrature(&moments, n)
}

/// One-dimensional Gaussian moments `m_0 .. m_{len-1}` as floats.
pub fn gaussian_moments_1d(len: usize) -> Vec<f64> {
    (0..len as u32)
        .map(|k| gaussian_moment(&MultiIndex::new(vec![k])).to_f64())
        .collect()
}

/// Searches for `q` reals whose uniform average matches every Gaussian moment
/// of degree at most `t` (within [`QUAD_TOLERANCE`]).
///
/// Candidates are negation-symmetric: `z` zeros plus pairs `+-a_i`, with `z`
/// of the parity of `q`, so odd moments vanish by construction. Each restart
/// runs Levenberg-Marquardt from a seeded start for every admissible `z`; the
/// first success in restart order wins.
pub fn unweighted_1d_gaussian_design(t: u32, q: usize, seed: u64) -> Result<Vec<f64>> {
    if q == 0 {
        return Err(Error::NoSolution { t, q, restarts: 0 });
    }
    let targets: Vec<f64> = (1..=t / 2)
        .map(|j| gaussian_moment(&MultiIndex::new(vec![2 * j])).to_f64())
        .collect();
    let sd = (2.0 * std::f64::consts::PI).sqrt().recip();

    for restart in 0..SEARCH_RESTARTS {
        let mut rng = rng_from_seed(seed.wrapping_add(restart as u64));
        let mut z = q % 2;
        while z <= q {
            let pairs = (q - z) / 2;
            let start: Vec<f64> = (0..pairs)
                .map(|_| sd * rng.random_range(0.05..3.0))
                .collect();
            if let Some(a) = fit_pairs(start, q, &targets) {
                let mut out = Vec::with_capacity(q);
                out.extend(a.iter().map(|x| -x.abs()));
                out.extend(std::iter::repeat_n(0.0, z));
                out.extend(a.iter().map(|x| x.abs()));
                out.sort_by(f64::total_cmp);
                return Ok(out);
            }
            z += 2;
        }
    }
    Err(Error::NoSolution {
        t,
        q,
        restarts: SEARCH_RESTARTS,
    })
}

/// Residuals `(2/q) sum_i a_i^{2j} - m_{2j}`, `j = 1..=len`.
fn pair_residuals(a: &[f64], q: usize, targets: &[f64]) -> Vec<f64> {
    targets
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let e = 2 * (j as i32 + 1);
            2.0 / q as f64 * a.iter().map(|x| x.powi(e)).sum::<f64>() - m
        })
        .collect()
}

fn accepted(res: &[f64], targets: &[f64]) -> bool {
    res.iter()
        .zip(targets)
        .all(|(r, m)| r.abs() <= QUAD_TOLERANCE * m.abs().max(1.0))
}

fn fit_pairs(mut a: Vec<f64>, q: usize, targets: &[f64]) -> Option<Vec<f64>> {
    let p = a.len();
    let m = targets.len();
    let mut res = pair_residuals(&a, q, targets);
    let cost = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>();
    let mut c = cost(&res);
    let mut lambda = 1e-3;
    for _ in 0..300 {
        if accepted(&res, targets) {
            return Some(a);
        }
        if p == 0 {
            return None;
        }
        let jac = DMatrix::from_fn(m, p, |j, i| {
            let k = 2.0 * (j as f64 + 1.0);
            2.0 / q as f64 * k * a[i].powi(2 * j as i32 + 1)
        });
        let r = DVector::from_column_slice(&res);
        let jt = jac.transpose();
        let g = &jt * &r;
        let jtj = &jt * &jac;
        let mut improved = false;
        for _ in 0..20 {
            let mut lhs = jtj.clone();
            for i in 0..p {
                lhs[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
            }
            let Some(step) = lhs.cholesky().map(|ch| ch.solve(&g)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = a.iter().zip(step.iter()).map(|(x, s)| x - s).collect();
            let tres = pair_residuals(&trial, q, targets);
            let tc = cost(&tres);
            if tc < c {
                a = trial;
                res = tres;
                c = tc;
                lambda = (lambda / 3.0).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    accepted(&res, targets).then_some(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_one_node() {
        let q = gauss_quadrature(&gaussian_moments_1d(2), 1).unwrap();
        assert_eq!(q.nodes.len(), 1);
        assert!(q.nodes[0].abs() < 1e-15);
        assert!((q.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_two_nodes() {
        let q = gauss_quadrature(&gaussian_moments_1d(4), 2).unwrap();
        let a = (2.0 * PI).sqrt().recip();
        assert!((q.nodes[0] + a).abs() < 1e-14);
        assert!((q.nodes[1] - a).abs() < 1e-14);
        assert!(q.weights.iter().all(|w| (w - 0.5).abs() < 1e-14));
        assert_eq!(q.matched_degree, 3);
    }

    #[test]
    fn radial_one_node() {
        let q = radial_design(3, 1).unwrap();
        assert_eq!(q.len(), 1);
        assert!((q.nodes[0] - 2.0 / PI).abs() < 1e-14);
        assert!((q.weights[0] - 1.0).abs() < 1e-14);
        let q = radial_design(1, 0).unwrap();
        assert_eq!(q.len(), 1);
        assert!((q.weights[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn radial_two_nodes_match_moments() {
        let q = radial_design(3, 2).unwrap();
        assert_eq!(q.len(), 2);
        for k in 0..=3 {
            let m = radial_moment(k, 3).to_f64();
            assert!((q.moment(k) - m).abs() <= 1e-10 * m.max(1.0));
        }
    }

    #[test]
    fn not_a_positive_measure() {
        // m_2 < m_1^2
        let err = gauss_quadrature(&[1.0, 1.0, 0.5, 0.0], 2).unwrap_err();
        assert_eq!(err, Error::HankelNotPD { order: 2 });
        assert!(matches!(
            gauss_quadrature(&[1.0], 1),
            Err(Error::TooFewMoments { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn search_examples() {
        assert_eq!(unweighted_1d_gaussian_design(1, 1, 0).unwrap(), vec![0.0]);
        let a = unweighted_1d_gaussian_design(3, 2, 0).unwrap();
        let r = (2.0 * PI).sqrt().recip();
        assert!((a[0] + r).abs() < 1e-10 && (a[1] - r).abs() < 1e-10);
        assert_eq!(
            unweighted_1d_gaussian_design(5, 4, 0),
            Err(Error::NoSolution {
                t: 5,
                q: 4,
                restarts: SEARCH_RESTARTS
            })
        );
    }

    #[test]
    fn search_hits_all_moments() {
        let m = gaussian_moments_1d(6);
        for (t, q) in [(3, 4), (5, 6), (5, 8), (2, 2)] {
            let a = unweighted_1d_gaussian_design(t, q, 11).unwrap();
            assert_eq!(a.len(), q);
            for k in 0..=t as usize {
                let avg = a.iter().map(|x| x.powi(k as i32)).sum::<f64>() / q as f64;
                assert!(
                    (avg - m[k]).abs() <= 1e-10 * m[k].abs().max(1.0),
                    "t={t} q={q} k={k}"
                );
            }
        }
        // one pair plus a zero pins a^2 by m_2 and then misses m_4
        assert!(unweighted_1d_gaussian_design(5, 3, 0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn radial_rules_are_positive_and_exact(d in 1usize..10, t in 0u32..12) {
                let q = radial_design(d, t).unwrap();
                prop_assert_eq!(q.len(), (t as usize + 2) / 2);
                prop_assert!(q.len() <= t as usize + 1);
                prop_assert!(q.weights.iter().all(|w| *w > 0.0));
                prop_assert!((q.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
                for k in 0..=q.matched_degree {
                    let m = radial_moment(k, d).to_f64();
                    prop_assert!((q.moment(k) - m).abs() <= 1e-10 * m.abs().max(1.0),
                        "d={} t={} k={}", d, t, k);
                }
            }
        }
    }
}
