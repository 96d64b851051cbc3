//! Exact monomial moments of the sphere, the Gaussian `exp(-pi|x|^2)dx` and the
//! radial law of `|x|` under that Gaussian.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::kernel::{enumerate_multi_indices, int, Measure, MultiIndex, PiValue, Rational};

/// `n!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// `int_{S^{d-1}} x^alpha dmu` for normalized surface measure.
pub fn sphere_moment(alpha: &MultiIndex, d: usize) -> Rational {
    assert_eq!(
        alpha.dim(),
        d,
        "multi-index length must equal the dimension"
    );
    if alpha.has_odd() {
        return Rational::from_integer(BigInt::from(0));
    }
    let num: BigInt = alpha
        .exponents()
        .iter()
        .map(|&k| double_factorial(k as i64 - 1))
        .product();
    let k = alpha.degree() as i64;
    let mut den = BigInt::one();
    let mut j = 0;
    while j < k {
        den *= d as i64 + j;
        j += 2;
    }
    Rational::new(num, den)
}

/// `int_{R^d} x^alpha exp(-pi |x|^2) dx`, graded with `pi^(-|alpha|/2)`.
pub fn gaussian_moment(alpha: &MultiIndex) -> PiValue {
    if alpha.has_odd() {
        return PiValue::zero();
    }
    let num: BigInt = alpha
        .exponents()
        .iter()
        .map(|&k| double_factorial(k as i64 - 1))
        .product();
    let k = alpha.degree();
    let den = BigInt::one() << (k / 2);
    PiValue::new(Rational::new(num, den), -(k as i32))
}

/// `Gamma(n/2)` for `n >= 1`, exact.
pub fn gamma_half(n: u32) -> PiValue {
    assert!(n >= 1, "Gamma has a pole at 0");
    if n.is_multiple_of(2) {
        let m = n / 2;
        let f: BigInt = (1..m as i64).map(BigInt::from).product();
        PiValue::rational(Rational::from_integer(f))
    } else {
        // Gamma(n/2) = (n-2)!! / 2^((n-1)/2) * sqrt(pi)
        let num = double_factorial(n as i64 - 2);
        let den = BigInt::one() << ((n - 1) / 2);
        PiValue::new(Rational::new(num, den), 1)
    }
}

/// `E[r^k]` for `r = |x|`, `x ~ exp(-pi|x|^2) dx` on `R^d`:
/// `Gamma((k+d)/2) / (Gamma(d/2) pi^(k/2))`.
pub fn radial_moment(k: u32, d: usize) -> PiValue {
    let d = d as u32;
    let ratio = &gamma_half(k + d) * &gamma_half(d).recip().expect("Gamma is nonzero");
    &ratio * &PiValue::new(Rational::one(), -(k as i32))
}

/// Surface area `2 pi^(d/2) / Gamma(d/2)` of `S^{d-1}`.
pub fn sphere_area(d: usize) -> PiValue {
    let g = gamma_half(d as u32).recip().expect("Gamma is nonzero");
    &PiValue::new(int(2), d as i32) * &g
}

/// The moment of `x^alpha` under `measure`, as an exact value.
pub fn moment(measure: Measure, alpha: &MultiIndex) -> PiValue {
    match measure {
        Measure::Sphere => PiValue::rational(sphere_moment(alpha, alpha.dim())),
        Measure::Gaussian => gaussian_moment(alpha),
    }
}

/// Every moment of degree at most `max_deg`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    measure: Measure,
    d: usize,
    max_deg: u32,
    entries: BTreeMap<MultiIndex, PiValue>,
}

impl MomentTable {
    pub fn new(measure: Measure, d: usize, max_deg: u32) -> Self {
        let entries = enumerate_multi_indices(d, max_deg)
            .into_iter()
            .map(|a| {
                let m = moment(measure, &a);
                (a, m)
            })
            .collect();
        Self {
            measure,
            d,
            max_deg,
            entries,
        }
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<&PiValue> {
        self.entries.get(alpha)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &PiValue)> {
        self.entries.iter()
    }
}
