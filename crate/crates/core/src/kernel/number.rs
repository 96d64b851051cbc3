//! Exact scalars: rationals, rationals times half-integer powers of pi, and
//! polynomials in 1/pi.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand for a small rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q` or `p`. Returns `None` for a zero denominator or bad digits.
pub fn parse_rational(token: &str) -> Option<Rational> {
    match token.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => token.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact value `coeff * pi^(pi_half_power / 2)`.
///
/// Zero is canonical: a zero coefficient always carries power 0, so zero can be
/// added to anything. Nonzero values of different grading never add.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiValue {
    coeff: Rational,
    pi_half_power: i32,
}

impl PiValue {
    pub fn new(coeff: Rational, pi_half_power: i32) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            Self {
                coeff,
                pi_half_power,
            }
        }
    }

    pub fn rational(coeff: Rational) -> Self {
        Self::new(coeff, 0)
    }

    pub fn zero() -> Self {
        Self {
            coeff: Rational::zero(),
            pi_half_power: 0,
        }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn pi_half_power(&self) -> i32 {
        self.pi_half_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// The rational value, if the grading is zero.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.pi_half_power == 0).then_some(&self.coeff)
    }

    pub fn checked_add(&self, other: &PiValue) -> Result<PiValue> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_half_power != other.pi_half_power {
            return Err(Error::GradingMismatch {
                left: self.pi_half_power,
                right: other.pi_half_power,
            });
        }
        Ok(PiValue::new(&self.coeff + &other.coeff, self.pi_half_power))
    }

    pub fn checked_sub(&self, other: &PiValue) -> Result<PiValue> {
        self.checked_add(&-other.clone())
    }

    pub fn recip(&self) -> Option<PiValue> {
        if self.is_zero() {
            None
        } else {
            Some(PiValue::new(self.coeff.recip(), -self.pi_half_power))
        }
    }

    pub fn pow(&self, exp: u32) -> PiValue {
        if exp == 0 {
            return PiValue::one();
        }
        PiValue::new(
            num_traits::pow(self.coeff.clone(), exp as usize),
            self.pi_half_power * exp as i32,
        )
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.coeff) * std::f64::consts::PI.powf(self.pi_half_power as f64 / 2.0)
    }
}

impl From<Rational> for PiValue {
    fn from(q: Rational) -> Self {
        PiValue::rational(q)
    }
}

impl Mul for &PiValue {
    type Output = PiValue;
    fn mul(self, rhs: &PiValue) -> PiValue {
        PiValue::new(
            &self.coeff * &rhs.coeff,
            self.pi_half_power + rhs.pi_half_power,
        )
    }
}

impl Mul for PiValue {
    type Output = PiValue;
    fn mul(self, rhs: PiValue) -> PiValue {
        &self * &rhs
    }
}

impl Neg for PiValue {
    type Output = PiValue;
    fn neg(self) -> PiValue {
        PiValue::new(-self.coeff, self.pi_half_power)
    }
}

fn fmt_pi_power(e: i32) -> String {
    if e % 2 == 0 {
        format!("pi^{}", e / 2)
    } else {
        format!("pi^{}/2", e)
    }
}

impl fmt::Display for PiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_half_power == 0 {
            write!(f, "{}", format_rational(&self.coeff))
        } else {
            write!(
                f,
                "{}*{}",
                format_rational(&self.coeff),
                fmt_pi_power(self.pi_half_power)
            )
        }
    }
}

/// A finite sum of [`PiValue`]s with possibly different gradings, keyed by
/// half-power. Used to accumulate exact residuals without coercion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PiSum {
    terms: BTreeMap<i32, Rational>,
}

impl PiSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_value(&mut self, v: &PiValue) {
        if v.is_zero() {
            return;
        }
        let e = v.pi_half_power();
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += v.coeff();
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn sub_value(&mut self, v: &PiValue) {
        self.add_value(&-v.clone());
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = PiValue> + '_ {
        self.terms.iter().map(|(e, c)| PiValue::new(c.clone(), *e))
    }

    /// The single homogeneous term, if there is at most one.
    pub fn as_value(&self) -> Option<PiValue> {
        match self.terms.len() {
            0 => Some(PiValue::zero()),
            1 => self.terms().next(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms().map(|v| v.to_f64()).sum()
    }
}

impl From<PiValue> for PiSum {
    fn from(v: PiValue) -> Self {
        let mut s = PiSum::zero();
        s.add_value(&v);
        s
    }
}

impl fmt::Display for PiSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Polynomial in `u = 1/pi` with rational coefficients: `sum_j c_j u^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PiPoly {
    coeffs: BTreeMap<u32, Rational>,
}

impl PiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * pi^(-j)`.
    pub fn monomial(c: Rational, j: u32) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.coeffs.insert(j, c);
        }
        p
    }

    /// Converts `q * pi^(e/2)` when `e` is even and non-positive.
    pub fn from_pi_value(v: &PiValue) -> Option<Self> {
        if v.is_zero() {
            return Some(Self::zero());
        }
        let e = v.pi_half_power();
        (e <= 0 && e % 2 == 0).then(|| Self::monomial(v.coeff().clone(), (-e / 2) as u32))
    }

    pub fn coeff(&self, j: u32) -> Rational {
        self.coeffs.get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(j, c)| (*j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, s: &Rational) -> PiPoly {
        let mut out = PiPoly::zero();
        if s.is_zero() {
            return out;
        }
        for (j, c) in &self.coeffs {
            out.coeffs.insert(*j, c * s);
        }
        out
    }

    fn add_term(&mut self, j: u32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(j).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    pub fn to_f64(&self) -> f64 {
        let u = 1.0 / std::f64::consts::PI;
        self.coeffs
            .iter()
            .map(|(j, c)| rational_to_f64(c) * u.powi(*j as i32))
            .sum()
    }

    pub fn is_negative_at_pi(&self) -> bool {
        self.to_f64() < 0.0
    }
}

impl Add for &PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: &PiPoly) -> PiPoly {
        let mut out = self.clone();
        for (j, c) in &rhs.coeffs {
            out.add_term(*j, c);
        }
        out
    }
}

impl Add for PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: PiPoly) -> PiPoly {
        &self + &rhs
    }
}

impl Neg for PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        self.scale(&-Rational::one())
    }
}

impl Sub for &PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: &PiPoly) -> PiPoly {
        self + &(-rhs.clone())
    }
}

impl Sub for PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: PiPoly) -> PiPoly {
        &self - &rhs
    }
}

impl Mul for &PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: &PiPoly) -> PiPoly {
        let mut out = PiPoly::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                out.add_term(i + j, &(a * b));
            }
        }
        out
    }
}

impl Mul for PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: PiPoly) -> PiPoly {
        &self * &rhs
    }
}

/// Written as `c0 + c1*u + c2*u^2`, `u = 1/pi`.
impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(j, c)| match j {
                0 => format_rational(c),
                1 => format!("{}*u", format_rational(c)),
                _ => format!("{}*u^{}", format_rational(c), j),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for PiPoly {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let mut out = PiPoly::zero();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let term = term.trim();
            let (c, j) = match term.split_once('*') {
                None => (term, 0u32),
                Some((c, "u")) => (c, 1),
                Some((c, pow)) => {
                    let j = pow
                        .strip_prefix("u^")
                        .and_then(|p| p.parse::<u32>().ok())
                        .ok_or_else(|| format!("bad term `{term}`"))?;
                    (c, j)
                }
            };
            let c = parse_rational(c).ok_or_else(|| format!("bad coefficient in `{term}`"))?;
            out.add_term(j, &c);
        }
        Ok(out)
    }
}

/// A coordinate or weight: exact or binary64. One point set uses one mode.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(PiValue),
    Float(f64),
}

impl Scalar {
    pub fn rational(q: Rational) -> Self {
        Scalar::Exact(PiValue::rational(q))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(v) => v.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&PiValue> {
        match self {
            Scalar::Exact(v) => Some(v),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(v) => v.coeff().is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(v) => v.coeff().is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }
}

/// Neumaier-compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum in iteration order.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<KahanSum>().value()
}

/// `ceil(x)` that forgives binary64 noise just above an integer.
pub(crate) fn ceil_tolerant(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_canonical() {
        let z = PiValue::new(Rational::zero(), -4);
        assert_eq!(z.pi_half_power(), 0);
        let a = PiValue::new(rat(1, 2), -2);
        assert_eq!(z.checked_add(&a).unwrap(), a);
    }

    #[test]
    fn mismatched_gradings_do_not_add() {
        let a = PiValue::new(rat(1, 2), -2);
        let b = PiValue::new(rat(1, 3), -4);
        assert_eq!(
            a.checked_add(&b),
            Err(Error::GradingMismatch {
                left: -2,
                right: -4
            })
        );
    }

    #[test]
    fn pivalue_float_value() {
        let v = PiValue::new(rat(1, 2), -2);
        assert!((v.to_f64() - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-16);
        assert_eq!(v.to_string(), "1/2*pi^-1");
        assert_eq!(PiValue::new(int(2), -1).to_string(), "2*pi^-1/2");
    }

    #[test]
    fn pipoly_text_roundtrip() {
        let p = PiPoly::monomial(rat(3, 4), 0) + PiPoly::monomial(rat(-5, 7), 2);
        let s = p.to_string();
        assert_eq!(s, "3/4 + -5/7*u^2");
        assert_eq!(s.parse::<PiPoly>().unwrap(), p);
        assert_eq!("0".parse::<PiPoly>().unwrap(), PiPoly::zero());
        assert_eq!(
            "2*u".parse::<PiPoly>().unwrap(),
            PiPoly::monomial(int(2), 1)
        );
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/2"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-6/4"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("0.5"), None);
    }

    #[test]
    fn kahan_beats_naive() {
        let xs = std::iter::once(1.0).chain(std::iter::repeat_n(1e-16, 10_000));
        assert!((kahan_sum(xs) - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn tolerant_ceil() {
        assert_eq!(ceil_tolerant(1.0 / (0.1f64 * 0.1)), 100.0);
        assert_eq!(ceil_tolerant(100.5), 101.0);
        assert_eq!(ceil_tolerant(3.0000000001), 3.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = Rational> {
            (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
        }

        fn small_poly() -> impl Strategy<Value = PiPoly> {
            proptest::collection::vec((0u32..4, small_rat()), 0..4).prop_map(|terms| {
                terms
                    .into_iter()
                    .fold(PiPoly::zero(), |acc, (j, c)| acc + PiPoly::monomial(c, j))
            })
        }

        proptest! {
            #[test]
            fn rational_field_laws(a in small_rat(), b in small_rat()) {
                prop_assert_eq!(&(&a + &b) - &b, a.clone());
                if !a.is_zero() {
                    prop_assert_eq!(&a * &a.recip(), Rational::one());
                }
            }

            #[test]
            fn pipoly_ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&(&a + &b) - &b, a.clone());
                prop_assert_eq!(a.to_string().parse::<PiPoly>().unwrap(), a);
            }
        }
    }
}
