//! Exact probabilities.
//!
//! [`Prob`] is an arbitrary-precision rational confined to `[0, 1]`, stored
//! in lowest terms. Every measure value, predictor output, and weight in
//! this crate is a `Prob`; nothing is ever rounded. Decimal renderings are
//! display-only and never participate in a comparison.
//!
//! Text form is `num/den` in lowest terms (`1/1`, `0/1`, `3/4`, ...).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbError {
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(BigRational),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as num/den")]
    Parse(String),
}

/// An exact rational probability in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Prob(BigRational);

impl Prob {
    pub fn zero() -> Prob {
        Prob(BigRational::zero())
    }

    pub fn one() -> Prob {
        Prob(BigRational::one())
    }

    pub fn half() -> Prob {
        Prob::new(1, 2).unwrap()
    }

    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Prob, ProbError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ProbError::ZeroDenominator);
        }
        Prob::from_ratio(BigRational::new(numer.into(), denom))
    }

    pub fn from_ratio(r: BigRational) -> Result<Prob, ProbError> {
        if r.is_negative() || r > BigRational::one() {
            return Err(ProbError::OutOfRange(r));
        }
        Ok(Prob(r))
    }

    /// `2^-k`, the uniform weight of a `k`-bit string.
    pub fn pow2_neg(k: usize) -> Prob {
        Prob(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `1 - p`.
    pub fn complement(&self) -> Prob {
        Prob(BigRational::one() - &self.0)
    }

    /// `p^k` with `p^0 = 1`.
    pub fn pow(&self, k: usize) -> Prob {
        if k == 0 {
            return Prob::one();
        }
        if self.is_zero() {
            return Prob::zero();
        }
        let numer = num::pow::pow(self.0.numer().clone(), k);
        let denom = num::pow::pow(self.0.denom().clone(), k);
        // already in lowest terms since the base is
        Prob(BigRational::new_raw(numer, denom))
    }

    /// `None` when the sum leaves `[0, 1]`.
    pub fn checked_add(&self, other: &Prob) -> Option<Prob> {
        Prob::from_ratio(&self.0 + &other.0).ok()
    }

    /// Exact quotient. `None` when `denom` is zero; panics if the ratio
    /// exceeds 1, which a conforming (semi-)measure cannot produce.
    pub fn checked_div(&self, denom: &Prob) -> Option<Prob> {
        if denom.is_zero() {
            return None;
        }
        let q = &self.0 / &denom.0;
        Some(Prob::from_ratio(q).expect("conditional exceeded 1: semi-measure contract violated"))
    }

    pub fn abs_diff(&self, other: &Prob) -> Prob {
        if self >= other {
            Prob(&self.0 - &other.0)
        } else {
            Prob(&other.0 - &self.0)
        }
    }

    /// Display-only decimal at `sig` significant digits.
    pub fn decimal(&self, sig: usize) -> String {
        decimal_str(&self.0, sig)
    }

    /// Display-only `-log2(p)` in bits; `f64::INFINITY` when `p = 0`.
    pub fn neg_log2(&self) -> f64 {
        if self.is_zero() {
            f64::INFINITY
        } else {
            -log2_f64(&self.0)
        }
    }
}

impl Add<&Prob> for &Prob {
    type Output = Prob;

    /// Panics when the sum exceeds 1; use [`Prob::checked_add`] where the
    /// inputs are not known to be sub-additive.
    fn add(self, rhs: &Prob) -> Prob {
        self.checked_add(rhs).expect("probability sum exceeded 1")
    }
}

impl Mul<&Prob> for &Prob {
    type Output = Prob;

    fn mul(self, rhs: &Prob) -> Prob {
        Prob(&self.0 * &rhs.0)
    }
}

impl Sum<Prob> for Prob {
    fn sum<I: Iterator<Item = Prob>>(iter: I) -> Prob {
        iter.fold(Prob::zero(), |acc, p| &acc + &p)
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Prob {
    type Err = ProbError;

    fn from_str(s: &str) -> Result<Prob, ProbError> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let numer: BigInt = num.trim().parse().map_err(|_| ProbError::Parse(s.to_string()))?;
        let denom: BigInt = den.trim().parse().map_err(|_| ProbError::Parse(s.to_string()))?;
        Prob::new(numer, denom)
    }
}

impl Serialize for Prob {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Prob {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Prob, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// `log2` of a positive rational, accurate to f64 precision even when the
/// integers involved are far beyond f64 range.
pub fn log2_f64(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log2 of a non-positive rational");
    log2_bigint(r.numer()) - log2_bigint(r.denom())
}

fn log2_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().expect("small BigInt fits f64").log2();
    }
    let shift = bits - 53;
    let top: BigInt = n >> shift;
    top.to_f64().expect("53-bit mantissa fits f64").log2() + shift as f64
}

/// Renders a rational as a decimal with `sig` significant digits, rounding
/// half away from zero. Uses plain notation for exponents in `[-4, sig)`
/// and scientific notation (`m.mmme-17`) otherwise. Trailing zeros in the
/// fraction are stripped, so the output is canonical for a given value.
pub fn decimal_str(r: &BigRational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let n = r.numer().abs();
    let d = r.denom().abs();

    // Decimal exponent e with 10^e <= n/d < 10^(e+1).
    let mut e: i64 =
        ((n.bits() as i64 - d.bits() as i64) as f64 * std::f64::consts::LOG10_2).round() as i64;
    let ten = BigInt::from(10);
    loop {
        // compare n/d against 10^e
        let (lhs, rhs) = if e >= 0 {
            (n.clone(), &d * ten.pow(e as u32))
        } else {
            (&n * ten.pow((-e) as u32), d.clone())
        };
        if lhs < rhs {
            e -= 1;
            continue;
        }
        let (lhs2, rhs2) = if e + 1 >= 0 {
            (n.clone(), &d * ten.pow((e + 1) as u32))
        } else {
            (&n * ten.pow((-(e + 1)) as u32), d.clone())
        };
        if lhs2 >= rhs2 {
            e += 1;
            continue;
        }
        break;
    }

    // First sig digits of n/d, rounded half away from zero.
    let scale = sig as i64 - 1 - e;
    let (num, den) = if scale >= 0 {
        (&n * ten.pow(scale as u32), d.clone())
    } else {
        (n.clone(), &d * ten.pow((-scale) as u32))
    };
    let mut q = &num / &den;
    let rem = &num - &q * &den;
    if &rem * 2 >= den {
        q += 1;
    }
    let mut digits = q.to_string();
    if digits.len() > sig {
        // rounding carried into an extra digit (e.g. 0.999... -> 1.00)
        digits.truncate(sig);
        e += 1;
    }
    debug_assert_eq!(digits.len(), sig);

    let body = if e >= -4 && (e as i128) < sig as i128 {
        if e >= 0 {
            let (int_part, frac_part) = digits.split_at(e as usize + 1);
            let frac = frac_part.trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            let frac = format!("{zeros}{digits}");
            let frac = frac.trim_end_matches('0');
            format!("0.{frac}")
        }
    } else {
        let (head, tail) = digits.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{head}e{e}")
        } else {
            format!("{head}.{tail}e{e}")
        }
    };
    format!("{sign}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Prob {
        s.parse().unwrap()
    }

    #[test]
    fn stored_in_lowest_terms() {
        let x = Prob::new(2, 4).unwrap();
        assert_eq!(x.to_string(), "1/2");
        assert_eq!(x, Prob::half());
    }

    #[test]
    fn range_is_enforced() {
        assert!(Prob::new(3, 2).is_err());
        assert!(Prob::new(-1, 2).is_err());
        assert!(Prob::new(1, 0).is_err());
        assert_eq!(Prob::new(1, 1).unwrap(), Prob::one());
    }

    #[test]
    fn parse_accepts_bare_integers() {
        assert_eq!(p("1"), Prob::one());
        assert_eq!(p("0"), Prob::zero());
        assert_eq!(p("9/64").to_string(), "9/64");
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&p("1/4") + &p("1/4"), p("1/2"));
        assert_eq!(&p("3/4") * &p("3/4"), p("9/16"));
        assert_eq!(p("3/4").checked_add(&p("1/2")), None);
        assert_eq!(p("9/64").checked_div(&p("3/4")), Some(p("3/16")));
        assert_eq!(p("1/2").checked_div(&Prob::zero()), None);
        assert_eq!(p("1/3").abs_diff(&p("1/2")), p("1/6"));
        assert_eq!(p("3/4").complement(), p("1/4"));
        assert_eq!(p("1/2").pow(10), Prob::pow2_neg(10));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(p("3/4").decimal(12), "0.75");
        assert_eq!(p("1/3").decimal(12), "0.333333333333");
        assert_eq!(p("2/3").decimal(12), "0.666666666667");
        assert_eq!(p("16/17").decimal(12), "0.941176470588");
        assert_eq!(Prob::one().decimal(12), "1");
        assert_eq!(Prob::zero().decimal(12), "0");
        assert_eq!(Prob::pow2_neg(10).decimal(12), "0.0009765625");
        assert_eq!(Prob::pow2_neg(64).decimal(12), "5.42101086243e-20");
        assert_eq!(decimal_str(&BigRational::new(999999.into(), 1000.into()), 3), "1e3");
    }

    #[test]
    fn log2_display() {
        assert_eq!(p("1/2").neg_log2(), 1.0);
        assert_eq!(Prob::pow2_neg(100).neg_log2(), 100.0);
        assert!(Prob::zero().neg_log2().is_infinite());
        let l = p("9/64").neg_log2();
        assert!((l - (64f64 / 9.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn log2_of_huge_values() {
        let big = BigRational::new(BigInt::one(), BigInt::one() << 4000);
        assert_eq!(log2_f64(&big), -4000.0);
    }
}
