//! Approximate designs: L2 certificates through Gegenbauer pair sums, tensor
//! discrepancies through the Gram identity `<x^{(2t)}, y^{(2t)}> = <x,y>^{2t}`,
//! random constructions with acceptance loops, and the tensor lower bound.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gegenbauer::{dim_p_sphere, GegenbauerTable};
use crate::kernel::number::ceil_tolerant;
use crate::kernel::{
    rational_to_f64, KahanSum, Kind, Measure, MultiIndex, Rational, WeightedPointSet,
};
use crate::moments::sphere_moment;
use crate::sampling::{rng_from_seed, uniform_sphere_points};

/// Acceptance-loop budget of the random constructions.
pub const APPROX_RETRIES: usize = 50;

/// Largest brute-force tensor (exclusive), in entries.
pub const BRUTEFORCE_LIMIT: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    L2Gegenbauer,
    TensorGram,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::L2Gegenbauer => "l2-gegenbauer",
            Method::TensorGram => "tensor-gram",
        })
    }
}

/// `epsilon_achieved = sqrt(max(pair_sum, 0))`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonCertificate {
    pub epsilon_achieved: f64,
    pub t: u32,
    pub pair_sum: f64,
    pub method: Method,
}

impl EpsilonCertificate {
    fn new(pair_sum: f64, t: u32, method: Method) -> Self {
        Self {
            epsilon_achieved: pair_sum.max(0.0).sqrt(),
            t,
            pair_sum,
            method,
        }
    }
}

impl fmt::Display for EpsilonCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "method: {}\nt: {}\npair_sum: {:e}\nepsilon: {:e}",
            self.method, self.t, self.pair_sum, self.epsilon_achieved
        )
    }
}

/// A random approximate design with the certificates that accepted it.
#[derive(Clone, Debug)]
pub struct ApproxOutcome {
    pub design: WeightedPointSet,
    pub certificates: Vec<EpsilonCertificate>,
    pub attempts: usize,
}

fn require_sphere(x: &WeightedPointSet) -> Result<()> {
    if x.measure() != Measure::Sphere {
        return Err(Error::InvalidSet(format!(
            "expected a sphere point set, got {}",
            x.measure()
        )));
    }
    Ok(())
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::BadEpsilon(eps))
    }
}

/// `sum_{x,y} w(x) w(y) f(<x,y>)`, row-wise compensated.
fn pair_sum(points: &[Vec<f64>], weights: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mut total = KahanSum::new();
    for (i, (x, wx)) in points.iter().zip(weights).enumerate() {
        let mut row = KahanSum::new();
        row.add(wx * f(dot(x, x)));
        for (y, wy) in points[i + 1..].iter().zip(&weights[i + 1..]) {
            row.add(2.0 * wy * f(dot(x, y)));
        }
        total.add(wx * row.value());
    }
    total.value()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// L2 certificate: `pair_sum = sum w w Q_{<=t}(<x,y>)`, zero exactly for
/// designs. Needs `d >= 3`.
pub fn epsilon_l2(x: &WeightedPointSet, t: u32) -> Result<EpsilonCertificate> {
    require_sphere(x)?;
    let table = GegenbauerTable::new(x.dimension(), t as usize)?;
    let s = pair_sum(&x.float_points(), &x.float_weights(), |c| {
        table.eval_sum(t as usize, c.clamp(-1.0, 1.0))
    });
    Ok(EpsilonCertificate::new(s, t, Method::L2Gegenbauer))
}

/// `c(d, t) = E[x_1^{2t}] = (2t-1)!! / (d (d+2) ... (d+2t-2))`.
pub fn tensor_constant(d: usize, t: u32) -> Rational {
    sphere_moment(&MultiIndex::axis(d, 0, 2 * t), d)
}

fn tensor_pair_sum(x: &WeightedPointSet, t: u32) -> f64 {
    let s = pair_sum(&x.float_points(), &x.float_weights(), |c| {
        c.powi(2 * t as i32)
    });
    s - rational_to_f64(&tensor_constant(x.dimension(), t))
}

/// Frobenius distance between the order-`2t` moment tensors of `x` and of
/// the sphere, via the Gram expansion.
pub fn tensor_discrepancy(x: &WeightedPointSet, t: u32) -> Result<f64> {
    Ok(tensor_certificate(x, t)?.epsilon_achieved)
}

pub fn tensor_certificate(x: &WeightedPointSet, t: u32) -> Result<EpsilonCertificate> {
    require_sphere(x)?;
    Ok(EpsilonCertificate::new(
        tensor_pair_sum(x, t),
        t,
        Method::TensorGram,
    ))
}

/// [`tensor_discrepancy`] by materializing both tensors entry by entry.
pub fn tensor_discrepancy_bruteforce(x: &WeightedPointSet, t: u32) -> Result<f64> {
    require_sphere(x)?;
    let d = x.dimension();
    let order = 2 * t as usize;
    let entries = (d as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
    if entries >= BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge {
            entries,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let points = x.float_points();
    let weights = x.float_weights();
    let mut cache: HashMap<Vec<u32>, f64> = HashMap::new();
    let mut beta = vec![0usize; order];
    let mut total = KahanSum::new();
    for _ in 0..entries {
        let mut alpha = vec![0u32; d];
        for &b in &beta {
            alpha[b] += 1;
        }
        let diff = *cache.entry(alpha.clone()).or_insert_with(|| {
            let empirical: f64 = points
                .iter()
                .zip(&weights)
                .map(|(p, w)| w * beta.iter().map(|&b| p[b]).product::<f64>())
                .sum();
            let alpha = MultiIndex::new(alpha);
            empirical - rational_to_f64(&sphere_moment(&alpha, d))
        });
        total.add(diff * diff);
        // next index in [d]^order
        for b in beta.iter_mut() {
            *b += 1;
            if *b < d {
                break;
            }
            *b = 0;
        }
    }
    Ok(total.value().max(0.0).sqrt())
}

/// Samples `k` uniform points with seeds `seed, seed+1, ...` until `accept`
/// returns certificates that all meet `eps`.
fn acceptance_loop<F>(
    d: usize,
    k: usize,
    eps: f64,
    seed: u64,
    retries: usize,
    certify: F,
) -> Result<ApproxOutcome>
where
    F: Fn(&WeightedPointSet) -> Result<Vec<EpsilonCertificate>>,
{
    for attempt in 0..retries {
        let mut rng = rng_from_seed(seed.wrapping_add(attempt as u64));
        let points = uniform_sphere_points(d, k, &mut rng);
        let design = WeightedPointSet::from_f64(Measure::Sphere, Kind::Unweighted, points, None)?;
        let certificates = certify(&design)?;
        if certificates.iter().all(|c| c.epsilon_achieved <= eps) {
            return Ok(ApproxOutcome {
                design,
                certificates,
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::RetriesExhausted(retries))
}

/// Sample size `ceil((r-1)/eps^2)`, `r = dim P_t` on the sphere.
pub fn l2_sample_size(d: usize, t: u32, eps: f64) -> usize {
    let r = dim_p_sphere(d, t as usize) as f64;
    (ceil_tolerant((r - 1.0) / (eps * eps)) as usize).max(1)
}

/// Uniform random points forming an `eps`-approximate `t`-design in the L2
/// sense.
pub fn construct_l2_approx(
    d: usize,
    t: u32,
    eps: f64,
    seed: u64,
    max_retries: usize,
) -> Result<ApproxOutcome> {
    check_epsilon(eps)?;
    if d < 3 {
        return Err(Error::DimensionTooSmall(d));
    }
    let k = l2_sample_size(d, t, eps);
    acceptance_loop(d, k, eps, seed, max_retries, |x| {
        Ok(vec![epsilon_l2(x, t)?])
    })
}

/// Sample size `ceil(eps^-2)`.
pub fn tensor_sample_size(eps: f64) -> usize {
    (ceil_tolerant(1.0 / (eps * eps)) as usize).max(1)
}

pub fn construct_tensor_approx(d: usize, t: u32, eps: f64, seed: u64) -> Result<ApproxOutcome> {
    check_epsilon(eps)?;
    if d == 0 {
        return Err(Error::BadDimension { k: 0, d });
    }
    let k = tensor_sample_size(eps);
    acceptance_loop(d, k, eps, seed, APPROX_RETRIES, |x| {
        Ok(vec![tensor_certificate(x, t)?])
    })
}

/// `ceil(t eps^-2)` points whose tensor discrepancy is at most `eps` at
/// every order `2s`, `1 <= s <= t`.
pub fn multi_strength_tensor_construct(
    d: usize,
    t: u32,
    eps: f64,
    seed: u64,
) -> Result<ApproxOutcome> {
    check_epsilon(eps)?;
    if d == 0 {
        return Err(Error::BadDimension { k: 0, d });
    }
    let k = (ceil_tolerant(t.max(1) as f64 / (eps * eps)) as usize).max(1);
    acceptance_loop(d, k, eps, seed, APPROX_RETRIES, |x| {
        (1..=t.max(1)).map(|s| tensor_certificate(x, s)).collect()
    })
}

/// Any set with tensor discrepancy at most `eps` has at least
/// `ceil(1/(eps^2 + c(d,t)))` points.
pub fn tensor_lower_bound(d: usize, t: u32, eps: f64) -> u64 {
    let c = rational_to_f64(&tensor_constant(d, t));
    let b = 1.0 / (eps * eps + c);
    if b.is_finite() {
        (ceil_tolerant(b) as u64).max(1)
    } else {
        1
    }
}
