//! Gegenbauer polynomials `Q_k^d`, their linearization, and the lower bounds
//! built on them (Delsarte, dimension counts, the LP bound for approximate
//! designs).

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::number::{kahan_sum, rational_to_f64};
use crate::kernel::{binomial, int, Rational};

/// Grid size for the nonnegativity guard in [`lp_bound`].
pub const LP_GRID: usize = 10_000;

/// Dense monomial coefficients, index = power.
pub type MonomialPoly = Vec<Rational>;

pub fn poly_mul(a: &[Rational], b: &[Rational]) -> MonomialPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn poly_eval_f64(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn add_scaled(acc: &mut MonomialPoly, p: &[Rational], s: &Rational) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Rational::zero());
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += c * s;
    }
}

/// `C_k^lambda` from `C_n = (2x(n+lambda-1) C_{n-1} - (n+2 lambda-2) C_{n-2}) / n`.
pub fn gegenbauer_c(k: usize, lambda: &Rational) -> MonomialPoly {
    let mut prev = vec![Rational::one()];
    if k == 0 {
        return prev;
    }
    let two = int(2);
    let mut cur = vec![Rational::zero(), &two * lambda];
    for n in 2..=k {
        let nn = int(n as i64);
        let a = &two * (&nn + lambda - Rational::one()) / &nn;
        let b = (&nn + &two * lambda - &two) / &nn;
        let mut next = vec![Rational::zero(); n + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += &a * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= &b * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `(d + 2k - 2) / (d - 2)`, the factor turning `C_k^{(d-2)/2}` into `Q_k^d`.
fn q_scale(k: usize, d: usize) -> Rational {
    Rational::new(((d + 2 * k) as i64 - 2).into(), (d as i64 - 2).into())
}

fn lambda_of(d: usize) -> Rational {
    Rational::new((d as i64 - 2).into(), 2.into())
}

/// Monomial coefficients of `Q_k^d`, normalized so `Q_k^d(1) = dim W_k^d`.
pub fn gegenbauer_q(k: usize, d: usize) -> Result<MonomialPoly> {
    if d < 3 {
        return Err(Error::DimensionTooSmall(d));
    }
    let s = q_scale(k, d);
    Ok(gegenbauer_c(k, &lambda_of(d))
        .into_iter()
        .map(|c| c * &s)
        .collect())
}

/// `Q_0^d .. Q_kmax^d` for one dimension, built once.
#[derive(Clone, Debug, PartialEq)]
pub struct GegenbauerTable {
    d: usize,
    polys: Vec<MonomialPoly>,
    floats: Vec<Vec<f64>>,
}

impl GegenbauerTable {
    pub fn new(d: usize, kmax: usize) -> Result<Self> {
        let polys = (0..=kmax)
            .map(|k| gegenbauer_q(k, d))
            .collect::<Result<Vec<_>>>()?;
        let floats = polys
            .iter()
            .map(|p| p.iter().map(rational_to_f64).collect())
            .collect();
        Ok(Self { d, polys, floats })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn kmax(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, k: usize) -> &[Rational] {
        &self.polys[k]
    }

    pub fn eval(&self, k: usize, x: f64) -> f64 {
        poly_eval_f64(&self.floats[k], x)
    }

    /// `Q_{<=t}(x) = Q_1(x) + ... + Q_t(x)`.
    pub fn eval_sum(&self, t: usize, x: f64) -> f64 {
        (1..=t).map(|k| self.eval(k, x)).sum()
    }
}

fn binom_signed(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u64, k as u64)
    }
}

/// Dimension of the degree-`k` harmonics on `S^{d-1}`.
pub fn dim_w(d: usize, k: usize) -> u128 {
    let (d, k) = (d as i64, k as i64);
    binom_signed(d + k - 1, d - 1) - binom_signed(d + k - 3, d - 1)
}

/// Dimension of polynomials of degree at most `t` restricted to `S^{d-1}`.
pub fn dim_p_sphere(d: usize, t: usize) -> u128 {
    let (d, t) = (d as i64, t as i64);
    binom_signed(d + t - 1, d - 1) + binom_signed(d + t - 2, d - 1)
}

/// Dimension of polynomials of degree at most `t` on `R^d`.
pub fn dim_p_gaussian(d: usize, t: usize) -> u128 {
    binomial((d + t) as u64, t as u64)
}

/// Delsarte-Goethals-Seidel lower bound on the size of a spherical t-design.
pub fn delsarte_bound(d: usize, t: usize) -> u128 {
    let (d, e) = (d as i64, (t / 2) as i64);
    if t.is_multiple_of(2) {
        binom_signed(d + e - 1, d - 1) + binom_signed(d + e - 2, d - 1)
    } else {
        2 * binom_signed(d + e - 1, d - 1)
    }
}

/// Rising factorial `(x)_n`.
fn pochhammer(x: &Rational, n: usize) -> Rational {
    (0..n).fold(Rational::one(), |acc, i| acc * (x + int(i as i64)))
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

/// `a_{m,n}(k)` in `C_m C_n = sum_k a_{m,n}(k) C_{m+n-2k}` (Dougall's formula).
pub fn linearization_coeffs(m: usize, n: usize, lambda: &Rational) -> BTreeMap<usize, Rational> {
    let l = lambda;
    let two_l = l * int(2);
    (0..=m.min(n))
        .map(|k| {
            let s = m + n;
            let lead =
                (int(s as i64) + l - int(2 * k as i64)) / (int(s as i64) + l - int(k as i64));
            let a = pochhammer(l, k) * pochhammer(l, m - k) * pochhammer(l, n - k)
                / (factorial(k) * factorial(m - k) * factorial(n - k));
            let b = pochhammer(&two_l, s - k) / pochhammer(l, s - k);
            let c = factorial(s - 2 * k) / pochhammer(&two_l, s - 2 * k);
            (k, lead * a * b * c)
        })
        .collect()
}

/// `sum_k alpha_k Q_k^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyQ {
    pub d: usize,
    pub coeffs: BTreeMap<usize, Rational>,
}

impl PolyQ {
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// `g(1) = sum_k alpha_k dim W_k`, exact.
    pub fn value_at_one(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|(k, a)| a * Rational::from_integer(dim_w(self.d, *k).into()))
            .sum()
    }

    pub fn to_monomial(&self) -> Result<MonomialPoly> {
        let mut acc = Vec::new();
        for (k, a) in &self.coeffs {
            add_scaled(&mut acc, &gegenbauer_q(*k, self.d)?, a);
        }
        Ok(acc)
    }
}

/// Coefficients of `(Q_t^d)^2` in the `Q^d` basis.
pub fn expand_q_square(t: usize, d: usize) -> Result<PolyQ> {
    if d < 3 {
        return Err(Error::DimensionTooSmall(d));
    }
    let ct = q_scale(t, d);
    let coeffs = linearization_coeffs(t, t, &lambda_of(d))
        .into_iter()
        .map(|(k, a)| {
            let j = 2 * t - 2 * k;
            (j, &ct * &ct * a / q_scale(j, d))
        })
        .collect();
    Ok(PolyQ { d, coeffs })
}

/// Chebyshev nodes `cos((2i+1) pi / (2n))` on `[-1, 1]`.
pub fn chebyshev_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
        .collect()
}

fn check_conditions(g: &PolyQ, t: usize) -> Result<()> {
    if let Some((k, a)) = g.coeffs.iter().find(|(k, a)| **k > t && a.is_positive()) {
        return Err(Error::ConditionViolated(format!(
            "alpha_{k} = {a} is positive for k = {k} > t = {t}"
        )));
    }
    let table = GegenbauerTable::new(g.d, g.degree())?;
    let alphas: Vec<(usize, f64)> = g
        .coeffs
        .iter()
        .map(|(k, a)| (*k, rational_to_f64(a)))
        .collect();
    // |Q_k| <= Q_k(1) on [-1, 1], so this bounds |g| and the rounding in it
    let scale = alphas
        .iter()
        .map(|(k, a)| a.abs() * dim_w(g.d, *k) as f64)
        .sum::<f64>()
        .max(1.0);
    for s in chebyshev_grid(LP_GRID) {
        let v = kahan_sum(alphas.iter().map(|(k, a)| a * table.eval(*k, s)));
        if v < -1e-12 * scale {
            return Err(Error::ConditionViolated(format!(
                "g({s}) = {v:e} is negative"
            )));
        }
    }
    Ok(())
}

fn lp_denominator(g: &PolyQ, eps2: &Rational, t: usize) -> Rational {
    let top = (1..=t)
        .map(|k| g.coeff(k))
        .max()
        .unwrap_or_else(Rational::zero);
    g.coeff(0) + eps2 * top
}

/// `g(1) / (alpha_0 + eps^2 max_{1<=k<=t} alpha_k)`, after checking
/// `alpha_k <= 0` for `k > t` and `g >= 0` on a Chebyshev grid.
pub fn lp_bound(g: &PolyQ, epsilon: f64, t: usize) -> Result<f64> {
    check_conditions(g, t)?;
    let top = (1..=t)
        .map(|k| rational_to_f64(&g.coeff(k)))
        .fold(0.0f64, f64::max);
    let den = rational_to_f64(&g.coeff(0)) + epsilon * epsilon * top;
    Ok(rational_to_f64(&g.value_at_one()) / den)
}

/// [`lp_bound`] with a rational `eps^2`, evaluated exactly.
pub fn lp_bound_exact(g: &PolyQ, eps2: &Rational, t: usize) -> Result<Rational> {
    check_conditions(g, t)?;
    let den = lp_denominator(g, eps2, t);
    if !den.is_positive() {
        return Err(Error::ConditionViolated(format!(
            "denominator {den} is not positive"
        )));
    }
    Ok(g.value_at_one() / den)
}

/// Lower bound on the size of an `eps`-approximate spherical t-design from
/// the certificate `g = (Q_t^d)^2`.
pub fn approx_lower_bound(d: usize, t: usize, epsilon: f64) -> Result<f64> {
    lp_bound(&expand_q_square(t, d)?, epsilon, 2 * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;
    use crate::sampling::{rng_from_seed, uniform_sphere_points};

    fn r(v: &[(i64, i64)]) -> MonomialPoly {
        v.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn q_examples() {
        assert_eq!(gegenbauer_q(0, 5).unwrap(), r(&[(1, 1)]));
        for d in 3..8 {
            assert_eq!(gegenbauer_q(1, d).unwrap(), r(&[(0, 1), (d as i64, 1)]));
        }
        // (5/2)(3x^2 - 1)
        assert_eq!(gegenbauer_q(2, 3).unwrap(), r(&[(-5, 2), (0, 1), (15, 2)]));
        assert_eq!(gegenbauer_q(2, 2), Err(Error::DimensionTooSmall(2)));
    }

    #[test]
    fn q_at_one_is_harmonic_dimension() {
        for d in 3..=10 {
            for k in 0..=8 {
                let q = gegenbauer_q(k, d).unwrap();
                let want = binom_signed((d + k) as i64 - 1, d as i64 - 1)
                    - binom_signed((d + k) as i64 - 3, d as i64 - 1);
                assert_eq!(poly_eval(&q, &int(1)), Rational::from_integer(want.into()));
                assert_eq!(want, dim_w(d, k));
                assert!(q
                    .iter()
                    .enumerate()
                    .all(|(i, c)| (i + k) % 2 == 0 || c.is_zero()));
                assert_eq!(q.len(), k + 1);
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dim_w(3, 2), 5);
        assert_eq!(dim_p_sphere(3, 2), 9);
        assert_eq!(dim_p_gaussian(3, 2), 10);
        assert_eq!(delsarte_bound(3, 5), 12);
        assert_eq!(delsarte_bound(4, 4), 14);
        for d in 1..12 {
            assert_eq!(delsarte_bound(d, 3), 2 * d as u128);
            let sum: u128 = (0..=4).map(|k| dim_w(d, k)).sum();
            assert_eq!(sum, dim_p_sphere(d, 4));
        }
    }

    #[test]
    fn linearization_examples() {
        let a = linearization_coeffs(1, 1, &rat(1, 2));
        assert_eq!(a[&0], rat(2, 3));
        assert_eq!(a[&1], rat(1, 3));
        let a = linearization_coeffs(0, 3, &rat(1, 1));
        assert_eq!(a.len(), 1);
        assert_eq!(a[&0], rat(1, 1));
    }

    #[test]
    fn linearization_matches_products() {
        for lambda in [rat(1, 2), rat(1, 1), rat(3, 2)] {
            for m in 0..=4 {
                for n in 0..=4 {
                    let lhs = poly_mul(&gegenbauer_c(m, &lambda), &gegenbauer_c(n, &lambda));
                    let mut rhs = Vec::new();
                    for (k, a) in linearization_coeffs(m, n, &lambda) {
                        add_scaled(&mut rhs, &gegenbauer_c(m + n - 2 * k, &lambda), &a);
                    }
                    assert_eq!(lhs, rhs, "m={m} n={n} lambda={lambda}");
                }
            }
        }
    }

    #[test]
    fn square_expansion() {
        for d in 3..9usize {
            let g = expand_q_square(1, d).unwrap();
            assert_eq!(g.coeff(0), int(d as i64));
            assert_eq!(g.coeff(2), rat(2 * d as i64, d as i64 + 2));
            assert!(g.coeff(1).is_zero());
        }
        let g = expand_q_square(1, 3).unwrap();
        assert_eq!(g.coeff(2), rat(6, 5));
        for t in 1..=3 {
            let g = expand_q_square(t, 4).unwrap();
            let q1 = Rational::from_integer(dim_w(4, t).into());
            assert_eq!(g.value_at_one(), &q1 * &q1);
            for k in 0..=2 * t {
                if k % 2 == 1 {
                    assert!(g.coeff(k).is_zero());
                } else {
                    assert!(g.coeff(k).is_positive());
                }
            }
            let q = gegenbauer_q(t, 4).unwrap();
            assert_eq!(g.to_monomial().unwrap(), poly_mul(&q, &q));
        }
    }

    #[test]
    fn lp_examples() {
        let g = expand_q_square(1, 4).unwrap();
        assert_eq!(lp_bound_exact(&g, &int(1), 2).unwrap(), int(3));
        assert_eq!(lp_bound_exact(&g, &int(0), 2).unwrap(), int(4));
        assert!((lp_bound(&g, 1.0, 2).unwrap() - 3.0).abs() < 1e-14);
        assert!((lp_bound(&g, 0.0, 2).unwrap() - 4.0).abs() < 1e-14);
        assert!((approx_lower_bound(4, 1, 1.0).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn lp_conditions() {
        let mut g = expand_q_square(1, 4).unwrap();
        g.coeffs.insert(3, rat(1, 10));
        assert!(matches!(
            lp_bound(&g, 0.5, 2),
            Err(Error::ConditionViolated(_))
        ));
        // negative somewhere on [-1, 1]: g = Q_1
        let g = PolyQ {
            d: 4,
            coeffs: [(1, int(1))].into_iter().collect(),
        };
        assert!(matches!(
            lp_bound(&g, 0.0, 1),
            Err(Error::ConditionViolated(_))
        ));
    }

    #[test]
    fn lp_bound_is_classical_value_at_zero_and_monotone() {
        for d in [3, 5, 8] {
            for t in 1..=3 {
                let exact = rational_to_f64(
                    &lp_bound_exact(&expand_q_square(t, d).unwrap(), &int(0), 2 * t).unwrap(),
                );
                // (Q_t(1))^2 / alpha_0 = Q_t(1)
                assert!((exact - dim_w(d, t) as f64).abs() < 1e-9 * exact);
                let mut prev = f64::INFINITY;
                for eps in [0.0, 0.1, 0.5, 1.0, 2.0] {
                    let b = approx_lower_bound(d, t, eps).unwrap();
                    assert!(b <= prev + 1e-12);
                    prev = b;
                }
            }
        }
    }

    #[test]
    fn theta_scaling_for_t2() {
        let ratios: Vec<f64> = (6..=30)
            .map(|d| approx_lower_bound(d, 2, 0.0).unwrap() / (d * d) as f64)
            .collect();
        let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(hi / lo <= 3.0);
    }

    #[test]
    fn gegenbauer_kernels_are_positive_definite() {
        let mut rng = rng_from_seed(99);
        for trial in 0..50 {
            let d = 3 + trial % 3;
            let n = 1 + trial % 20;
            let table = GegenbauerTable::new(d, 6).unwrap();
            let pts = uniform_sphere_points(d, n, &mut rng);
            for k in 0..=6 {
                let mut s = 0.0;
                for x in &pts {
                    for y in &pts {
                        let ip: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                        s += table.eval(k, ip.clamp(-1.0, 1.0));
                    }
                }
                assert!(s >= -1e-9, "d={d} n={n} k={k} sum={s}");
            }
        }
    }
}
