//! Coefficient fields used by the series algebra.
//!
//! Two implementations exist: `f64` for numeric work and [`BigRational`]
//! for exact regression tests of coefficient recursions.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// A real coefficient type closed under the ring operations and division by
/// nonzero integers.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    /// Converts a float. Rational coefficients take the exact binary value.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn div_int(&self, d: i64) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn is_nonnegative(&self) -> bool;
    /// Short mode label written into reports.
    fn mode_name() -> &'static str;
    fn to_json(&self) -> serde_json::Value;
    /// Accepts a JSON number or a `"p/q"` string.
    fn from_json(v: &serde_json::Value) -> Option<Self>;
}

fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!Zero::is_zero(&q)).then(|| BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn div_int(&self, d: i64) -> Self {
        *self / d as f64
    }
    fn div(&self, other: &Self) -> Self {
        *self / *other
    }
    fn is_nonnegative(&self) -> bool {
        *self >= 0.0
    }
    fn mode_name() -> &'static str {
        "double"
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(*self)
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::Number(n) => n.as_f64(),
            serde_json::Value::String(s) => s
                .trim()
                .parse::<f64>()
                .ok()
                .or_else(|| parse_ratio(s).map(|r| Scalar::to_f64(&r))),
            _ => None,
        }
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn div_int(&self, d: i64) -> Self {
        self / BigRational::from_integer(BigInt::from(d))
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn is_nonnegative(&self) -> bool {
        !Signed::is_negative(self)
    }
    fn mode_name() -> &'static str {
        "rational"
    }
    fn to_json(&self) -> serde_json::Value {
        if self.is_integer() {
            if let Some(i) = self.to_integer().to_i64() {
                return serde_json::Value::from(i);
            }
        }
        serde_json::Value::from(format!("{}/{}", self.numer(), self.denom()))
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::Number(n) => match n.as_i64() {
                Some(i) => Some(Scalar::from_i64(i)),
                None => n.as_f64().and_then(BigRational::from_float),
            },
            serde_json::Value::String(s) => parse_ratio(s),
            _ => None,
        }
    }
}

/// `n!` as a scalar.
pub fn factorial<C: Scalar>(n: u32) -> C {
    (1..=n as i64).fold(C::one(), |acc, k| acc * C::from_i64(k))
}
