//! Scalar backends.
//!
//! Every algorithm in this crate is generic over [`Field`], which has two
//! implementations: [`Rational`] (arbitrary precision, exact) and `f64`.
//! A pipeline is monomorphized for one backend, so values of the two kinds
//! can never be mixed by accident. Literals that come from user input
//! (JSON, CSV, CLI flags) are carried as the backend-tagged [`Scalar`]
//! enum and converted explicitly with [`Field::from_literal`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::determinant::{bareiss_det, pivoted_det, Matrix};
use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

/// Transcendental builtins. Only the float backend can evaluate these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transcendental {
    Cos,
    Sin,
    Exp,
    /// `-cot(x)`.
    NegCot,
}

impl fmt::Display for Transcendental {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Transcendental::Cos => "cos",
            Transcendental::Sin => "sin",
            Transcendental::Exp => "exp",
            Transcendental::NegCot => "neg_cot",
        };
        f.write_str(name)
    }
}

pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;

    /// Converts a user literal into this backend.
    ///
    /// Float literals entering the exact backend are read through their
    /// shortest round-trip decimal form, so `0.1` becomes `1/10`.
    fn from_literal(s: &Scalar) -> Result<Self>;
    fn to_scalar(&self) -> Scalar;
    fn to_f64(&self) -> f64;

    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    fn powi(&self, k: u32) -> Self;
    fn apply(&self, op: Transcendental) -> Result<Self>;

    /// Determinant of a square matrix. Exact: fraction-free elimination;
    /// float: row-pivoted Gaussian elimination.
    fn determinant(m: &Matrix<Self>) -> Self;

    fn signum_i8(&self) -> i8 {
        match self.partial_cmp(&Self::zero()) {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    }
}

impl Field for f64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_literal(s: &Scalar) -> Result<Self> {
        Ok(s.to_f64())
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn powi(&self, k: u32) -> Self {
        // exponents beyond i32 are meaningless in f64 anyway
        f64::powi(*self, k.min(i32::MAX as u32) as i32)
    }
    fn apply(&self, op: Transcendental) -> Result<Self> {
        Ok(match op {
            Transcendental::Cos => self.cos(),
            Transcendental::Sin => self.sin(),
            Transcendental::Exp => self.exp(),
            Transcendental::NegCot => -self.cos() / self.sin(),
        })
    }
    fn determinant(m: &Matrix<Self>) -> Self {
        pivoted_det(m)
    }
}

impl Field for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_literal(s: &Scalar) -> Result<Self> {
        s.to_exact()
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn powi(&self, k: u32) -> Self {
        num_traits::pow(self.clone(), k as usize)
    }
    fn apply(&self, op: Transcendental) -> Result<Self> {
        Err(Error::BackendMismatch {
            backend: Backend::Exact,
            detail: format!("`{op}` has no exact rational evaluation"),
        })
    }
    fn determinant(m: &Matrix<Self>) -> Self {
        bareiss_det(m)
    }
}

fn ratio_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        return v;
    }
    // huge numerator/denominator: scale down both before dividing
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// A backend-tagged number as it appears in input files and reports.
///
/// Serialized as a JSON number for the float backend and as a `"p/q"`
/// string (or `"p"` for integers) for the exact backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Exact(Rational::from_i64(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ratio_to_f64(r),
            Scalar::Float(v) => *v,
        }
    }

    pub fn to_exact(&self) -> Result<Rational> {
        match self {
            Scalar::Exact(r) => Ok(r.clone()),
            Scalar::Float(v) => {
                if !v.is_finite() {
                    return Err(Error::BackendMismatch {
                        backend: Backend::Exact,
                        detail: format!("non-finite literal {v}"),
                    });
                }
                parse_decimal(&format!("{v:?}")).ok_or_else(|| Error::InvalidInput(format!("cannot read {v} exactly")))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(v) => write!(f, "{v:?}"),
        }
    }
}

/// Parses `"p/q"`, an integer, or a decimal such as `"-1.25e-3"` exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 10_000 {
        return None;
    }
    let ten = BigInt::from(10);
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Some(if scale >= 0 {
        Rational::from_integer(numer * factor)
    } else {
        Rational::new(numer, factor)
    })
}

impl FromStr for Scalar {
    type Err = Error;

    /// Integers, fractions and exact decimals parse as exact; anything else
    /// that `f64` accepts (e.g. `inf`) is rejected.
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s)
            .map(Scalar::Exact)
            .ok_or_else(|| Error::InvalidInput(format!("not a number: {s:?}")))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Float(v) => serializer.serialize_f64(*v),
            Scalar::Exact(r) => {
                if r.is_integer() {
                    serializer.serialize_str(&r.numer().to_string())
                } else {
                    serializer.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
                }
            }
        }
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::Exact(Rational::from_integer(BigInt::from(v))))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::Float(v))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
        parse_rational(v)
            .map(Scalar::Exact)
            .ok_or_else(|| E::custom(format!("not a rational: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Float(v)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::Exact(v)
    }
}

/// Shorthand for building exact values in tests and examples.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// How a computed value sits relative to zero once a float tolerance band
/// is applied. The exact backend never yields `Band`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    Positive,
    Zero,
    Band,
    Negative,
}

/// Classifies `value` against a tolerance band of half-width `tol`.
/// On the float backend zero falls inside the band.
pub fn classify<T: Field>(value: &T, tol: f64) -> SignClass {
    match T::BACKEND {
        Backend::Exact => match value.signum_i8() {
            1 => SignClass::Positive,
            0 => SignClass::Zero,
            _ => SignClass::Negative,
        },
        Backend::Float => {
            let v = value.to_f64();
            if v > tol {
                SignClass::Positive
            } else if v < -tol {
                SignClass::Negative
            } else {
                SignClass::Band
            }
        }
    }
}
