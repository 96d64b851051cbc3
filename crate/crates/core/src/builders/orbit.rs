//! Signed designs from orbits of the hyperoctahedral group. The orbit of
//! `a in R^t` is `Y_t(a) = { sum_i e_i a_i e_psi(i) }` over injective
//! `psi: [t] -> [d]` and signs `e`, a multiset of `2^t d!/(d-t)!` points.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::{
    binomial, int, rat, Kind, Measure, MultiIndex, PiPoly, Rational, Scalar, WeightedPointSet,
};
use crate::linalg::rational_inverse;
use crate::moments::{gaussian_moment, sphere_moment};
use crate::sampling::rng_from_seed;

/// Resample budget of [`signed_design`].
pub const SIGNED_RETRIES: usize = 100;

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    pub parts: Vec<u32>,
}

impl Partition {
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `2 lambda` padded with zeros to length `d`.
    pub fn doubled_index(&self, d: usize) -> MultiIndex {
        let mut e: Vec<u32> = self.parts.iter().map(|p| 2 * p).collect();
        e.resize(d, 0);
        MultiIndex::new(e)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", p.join(","))
    }
}

fn partitions_into(
    n: u32,
    max_part: u32,
    max_len: usize,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if n == 0 {
        out.push(Partition {
            parts: prefix.clone(),
        });
        return;
    }
    if prefix.len() == max_len {
        return;
    }
    for p in (1..=n.min(max_part)).rev() {
        prefix.push(p);
        partitions_into(n - p, p, max_len, prefix, out);
        prefix.pop();
    }
}

/// Partitions of exactly `n` into at most `d` parts, reverse lexicographic.
pub fn partitions_of(n: u32, d: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    partitions_into(n, n, d, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `0, 1, ..., t` into at most `d` parts, graded.
pub fn partitions_up_to(t: u32, d: usize) -> Vec<Partition> {
    (0..=t).flat_map(|n| partitions_of(n, d)).collect()
}

pub fn partition_count(t: u32, d: usize) -> usize {
    partitions_up_to(t, d).len()
}

/// Injective maps `[k] -> [n]` in lexicographic order.
fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    let mut used = vec![false; n];
    fn rec(k: usize, n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(k, n, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(k, n, &mut cur, &mut used, &mut out);
    out
}

/// `|Y_t(a)| = 2^t d! / (d-t)!`.
pub fn orbit_size(t: usize, d: usize) -> u128 {
    if t > d {
        return 0;
    }
    (d - t + 1..=d).fold(1u128 << t, |acc, k| acc * k as u128)
}

/// The multiset `Y_t(a)` in `R^d`.
pub fn orbit_points<T>(a: &[T], d: usize) -> Result<Vec<Vec<T>>>
where
    T: Clone + Zero + std::ops::Neg<Output = T>,
{
    let t = a.len();
    if t > d {
        return Err(Error::TooManyParts { t, d });
    }
    let mut out = Vec::with_capacity(orbit_size(t, d) as usize);
    for psi in injections(t, d) {
        for signs in 0..(1u32 << t) {
            let mut p = vec![T::zero(); d];
            for (i, &j) in psi.iter().enumerate() {
                p[j] = if signs >> i & 1 == 1 {
                    -a[i].clone()
                } else {
                    a[i].clone()
                };
            }
            out.push(p);
        }
    }
    Ok(out)
}

/// Counting data for `b_alpha`: `2^t (d-s)!/(d-t)!` and the support of
/// `alpha`, or `None` when `b_alpha = 0` structurally.
fn orbit_structure(alpha: &MultiIndex, t: usize) -> Result<Option<(u128, Vec<(usize, u32)>)>> {
    let d = alpha.dim();
    if t > d {
        return Err(Error::TooManyParts { t, d });
    }
    if alpha.has_odd() {
        return Ok(None);
    }
    let support: Vec<(usize, u32)> = alpha
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(j, &e)| (j, e))
        .collect();
    let s = support.len();
    if s > t {
        return Ok(None);
    }
    let factor = (d - t + 1..=d - s).fold(1u128 << t, |acc, k| acc * k as u128);
    Ok(Some((factor, support)))
}

/// `b_alpha(a) = sum_{y in Y_t(a)} y^alpha`, by counting instead of
/// materializing: only even `alpha` survive the sign sum, and each injection
/// of the support of `alpha` into `[t]` contributes `prod a_i^{alpha_j}`.
pub fn orbit_moment(alpha: &MultiIndex, a: &[Rational]) -> Result<Rational> {
    let Some((factor, support)) = orbit_structure(alpha, a.len())? else {
        return Ok(Rational::zero());
    };
    let mut sum = Rational::zero();
    for phi in injections(support.len(), a.len()) {
        let mut term = Rational::one();
        for (&(_, e), &i) in support.iter().zip(&phi) {
            term *= num_traits::pow(a[i].clone(), e as usize);
        }
        sum += term;
    }
    Ok(sum * Rational::from_integer(factor.into()))
}

/// Binary64 version of [`orbit_moment`].
pub fn orbit_moment_f64(alpha: &MultiIndex, a: &[f64]) -> Result<f64> {
    let Some((factor, support)) = orbit_structure(alpha, a.len())? else {
        return Ok(0.0);
    };
    let sum: f64 = injections(support.len(), a.len())
        .iter()
        .map(|phi| {
            support
                .iter()
                .zip(phi)
                .map(|(&(_, e), &i)| a[i].powi(e as i32))
                .product::<f64>()
        })
        .sum();
    Ok(sum * factor as f64)
}

/// Generators with weights; every point of the orbit of `generators[j]`
/// carries `weights[j]` (a polynomial in `1/pi`).
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitDesign {
    pub dimension: usize,
    pub measure: Measure,
    pub strength: u32,
    pub generators: Vec<Vec<Rational>>,
    pub weights: Vec<PiPoly>,
}

impl OrbitDesign {
    /// Length of each generator.
    pub fn orbit_rank(&self) -> usize {
        self.generators.first().map_or(0, Vec::len)
    }

    pub fn materialized_len(&self) -> u128 {
        self.generators.len() as u128 * orbit_size(self.orbit_rank(), self.dimension)
    }

    /// Rational weights, when none involves `pi`.
    pub fn rational_weights(&self) -> Option<Vec<Rational>> {
        self.weights
            .iter()
            .map(|w| match w.degree() {
                None => Some(Rational::zero()),
                Some(0) => Some(w.coeff(0)),
                Some(_) => None,
            })
            .collect()
    }

    fn kind(&self) -> Kind {
        if self.weights.iter().all(|w| w.to_f64() > 0.0) {
            Kind::Weighted
        } else {
            Kind::Signed
        }
    }

    /// The orbit multiset as a point set: exact when the weights are
    /// rational, binary64 otherwise.
    pub fn materialize(&self) -> Result<WeightedPointSet> {
        let Some(ws) = self.rational_weights() else {
            return self.materialize_float();
        };
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (a, w) in self.generators.iter().zip(ws) {
            for p in orbit_points(a, self.dimension)? {
                points.push(p.into_iter().map(Scalar::rational).collect());
                weights.push(Scalar::rational(w.clone()));
            }
        }
        WeightedPointSet::new(
            self.dimension,
            self.measure,
            self.kind(),
            points,
            weights,
            Some(self.strength),
        )
    }

    pub fn materialize_float(&self) -> Result<WeightedPointSet> {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (a, w) in self.generators.iter().zip(&self.weights) {
            let af: Vec<f64> = a.iter().map(crate::kernel::rational_to_f64).collect();
            let wf = w.to_f64();
            for p in orbit_points(&af, self.dimension)? {
                points.push(p);
                weights.push(wf);
            }
        }
        Ok(
            WeightedPointSet::from_f64(self.measure, self.kind(), points, Some(weights))?
                .with_claimed_strength(Some(self.strength)),
        )
    }
}

/// Target moment of `x^{2 lambda}` as a polynomial in `u = 1/pi`.
fn target(measure: Measure, alpha: &MultiIndex) -> PiPoly {
    match measure {
        Measure::Sphere => PiPoly::constant(sphere_moment(alpha, alpha.dim())),
        Measure::Gaussian => PiPoly::from_pi_value(&gaussian_moment(alpha))
            .expect("even moments have integer pi powers"),
    }
}

fn random_entry<R: Rng>(rng: &mut R) -> Rational {
    // k/12 in [1/2, 2]
    rat(rng.random_range(6..=24), 12)
}

/// Rational point of `S^{t-1}` with nonnegative entries, from inverse
/// stereographic projection of a random rational `u in Q^{t-1}`.
fn random_sphere_generator<R: Rng>(t: usize, rng: &mut R) -> Vec<Rational> {
    let u: Vec<Rational> = (0..t - 1)
        .map(|_| rat(rng.random_range(1..=12), 6))
        .collect();
    let n2: Rational = u.iter().map(|x| x * x).sum();
    let den = &n2 + Rational::one();
    let mut p: Vec<Rational> = u.iter().map(|x| x * int(2) / &den).collect();
    p.push((&n2 - Rational::one()) / &den);
    p.into_iter().map(|x| x.abs()).collect()
}

/// Signed design of strength `2t`, with one orbit per moment condition.
///
/// Gaussian: one generator per partition of `0..=t`, entries in `[1/2, 2]`,
/// weights in `Q[1/pi]`. Sphere: on the sphere the degree-`2t` even moments
/// imply all lower ones, so one generator per partition of exactly `t`,
/// generators rational points of `S^{t-1}`, weights rational.
pub fn signed_design(d: usize, t: u32, measure: Measure, seed: u64) -> Result<OrbitDesign> {
    signed_design_with_retries(d, t, measure, seed, SIGNED_RETRIES)
}

pub fn signed_design_with_retries(
    d: usize,
    t: u32,
    measure: Measure,
    seed: u64,
    retries: usize,
) -> Result<OrbitDesign> {
    let tu = t as usize;
    if tu > d {
        return Err(Error::TooManyParts { t: tu, d });
    }
    let parts = match measure {
        Measure::Gaussian => partitions_up_to(t, d),
        Measure::Sphere => {
            if t == 0 {
                return Err(Error::BadStrength(
                    "a signed spherical design needs t >= 1".into(),
                ));
            }
            partitions_of(t, d)
        }
    };
    let mut rng = rng_from_seed(seed);
    let (generators, weights) = solve_orbits(
        d,
        tu,
        &parts,
        retries,
        |a| target(measure, a),
        |k| match measure {
            Measure::Gaussian => (0..k).map(|_| random_entry(&mut rng)).collect(),
            Measure::Sphere => random_sphere_generator(k, &mut rng),
        },
    )?;
    Ok(OrbitDesign {
        dimension: d,
        measure,
        strength: 2 * t,
        generators,
        weights,
    })
}

/// Orbit generators and weights matching a caller-supplied permutation- and
/// sign-invariant moment functional `moment(2 lambda)` for every partition
/// `lambda` of `0..=t`. Generator entries are seeded rationals in `[1/2, 2]`.
pub fn signed_design_for_functional<F>(
    d: usize,
    t: u32,
    seed: u64,
    retries: usize,
    moment: F,
) -> Result<(Vec<Vec<Rational>>, Vec<PiPoly>)>
where
    F: Fn(&MultiIndex) -> PiPoly,
{
    if t as usize > d {
        return Err(Error::TooManyParts { t: t as usize, d });
    }
    let mut rng = rng_from_seed(seed);
    solve_orbits(
        d,
        t as usize,
        &partitions_up_to(t, d),
        retries,
        moment,
        |k| (0..k).map(|_| random_entry(&mut rng)).collect(),
    )
}

/// Draws one generator per partition until `[b_{2 lambda}(a_j)]` is
/// invertible, then solves for the weights exactly.
fn solve_orbits<F, G>(
    d: usize,
    t: usize,
    parts: &[Partition],
    retries: usize,
    moment: F,
    mut draw: G,
) -> Result<(Vec<Vec<Rational>>, Vec<PiPoly>)>
where
    F: Fn(&MultiIndex) -> PiPoly,
    G: FnMut(usize) -> Vec<Rational>,
{
    let alphas: Vec<MultiIndex> = parts.iter().map(|p| p.doubled_index(d)).collect();
    let rhs: Vec<PiPoly> = alphas.iter().map(&moment).collect();
    for _ in 0..retries.max(1) {
        let generators: Vec<Vec<Rational>> = (0..parts.len()).map(|_| draw(t)).collect();
        let b: Vec<Vec<Rational>> = alphas
            .iter()
            .map(|a| {
                generators
                    .iter()
                    .map(|g| orbit_moment(a, g))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let Some(inv) = rational_inverse(&b) else {
            continue;
        };
        let weights = inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&rhs)
                    .fold(PiPoly::zero(), |acc, (c, m)| acc + m.scale(c))
            })
            .collect();
        return Ok((generators, weights));
    }
    Err(Error::SingularAfterRetries(retries.max(1)))
}

/// Exact moment check of an [`OrbitDesign`], by orbit counting.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitVerification {
    pub degree: u32,
    pub checked: usize,
    /// First monomial (lexicographic) whose sum differs from its target,
    /// with the difference.
    pub failure: Option<(MultiIndex, PiPoly)>,
}

impl OrbitVerification {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }
}

impl OrbitDesign {
    /// `sum_j w_j b_alpha(a_j)` as a polynomial in `1/pi`.
    pub fn moment(&self, alpha: &MultiIndex) -> Result<PiPoly> {
        let mut acc = PiPoly::zero();
        for (a, w) in self.generators.iter().zip(&self.weights) {
            let b = orbit_moment(alpha, a)?;
            if !b.is_zero() {
                acc = acc + w.scale(&b);
            }
        }
        Ok(acc)
    }

    /// Compares every monomial of degree at most `degree` with the target
    /// moment as exact values.
    pub fn verify_exact(&self, degree: u32) -> Result<OrbitVerification> {
        self.check(degree, |_| true)
    }

    /// Checks that every monomial with an odd exponent and degree at most
    /// `degree` sums to exactly zero.
    pub fn verify_odd_vanishing(&self, degree: u32) -> Result<OrbitVerification> {
        self.check(degree, MultiIndex::has_odd)
    }

    fn check(
        &self,
        degree: u32,
        select: impl Fn(&MultiIndex) -> bool,
    ) -> Result<OrbitVerification> {
        let mut checked = 0;
        for alpha in crate::kernel::enumerate_multi_indices(self.dimension, degree) {
            if !select(&alpha) {
                continue;
            }
            checked += 1;
            let diff = self.moment(&alpha)? - target(self.measure, &alpha);
            if !diff.is_zero() {
                return Ok(OrbitVerification {
                    degree,
                    checked,
                    failure: Some((alpha, diff)),
                });
            }
        }
        Ok(OrbitVerification {
            degree,
            checked,
            failure: None,
        })
    }
}

/// Result of [`reflection_family_check`].
#[derive(Clone, Debug, PartialEq)]
pub enum ReflectionOutcome {
    Pass,
    /// 0-based coordinates whose sign product has nonzero mean.
    Counterexample {
        indices: Vec<usize>,
        expectation: Rational,
    },
}

/// Checks `E[e(i_1) ... e(i_r)] = 0` for every set of `r <= 2t` distinct
/// coordinates, the signs drawn from `family` with the given probabilities.
pub fn reflection_family_check(
    family: &[Vec<i8>],
    probabilities: &[Rational],
    t: u32,
) -> Result<ReflectionOutcome> {
    if family.len() != probabilities.len() || family.is_empty() {
        return Err(Error::InvalidSet(
            "need one probability per sign vector".into(),
        ));
    }
    let total: Rational = probabilities.iter().sum();
    if total != Rational::one() || probabilities.iter().any(|p| p.is_negative()) {
        return Err(Error::InvalidSet("probabilities must sum to 1".into()));
    }
    let d = family[0].len();
    if family
        .iter()
        .any(|e| e.len() != d || e.iter().any(|s| s.abs() != 1))
    {
        return Err(Error::InvalidSet(
            "sign vectors must have equal length and entries +-1".into(),
        ));
    }
    for r in 1..=(2 * t as usize).min(d) {
        for idx in crate::ffield::subsets(d, r) {
            let expectation: Rational = family
                .iter()
                .zip(probabilities)
                .map(|(e, p)| {
                    let sign: i64 = idx.iter().map(|&i| e[i] as i64).product();
                    p * int(sign)
                })
                .sum();
            if !expectation.is_zero() {
                return Ok(ReflectionOutcome::Counterexample {
                    indices: idx,
                    expectation,
                });
            }
        }
    }
    Ok(ReflectionOutcome::Pass)
}

/// Lower bound `binom(d, t)` on the size of a mean-zero reflection family.
pub fn sauermann_bound(d: usize, t: usize) -> u128 {
    binomial(d as u64, t as u64)
}
