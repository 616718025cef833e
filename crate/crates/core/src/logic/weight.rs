//! Predicate weights and the numeric fields counts are computed in.
//!
//! Weights are stored symbolically: either an exact rational or `e^r` for a
//! rational `r` (the form Markov logic weights take). A count is evaluated in
//! exactly one [`Scalar`] field, chosen by the caller; exact mode refuses
//! weights that have no rational value.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest decimal exponent accepted in numeric literals (`1e4096`).
const MAX_DECIMAL_EXPONENT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weight {0} is irrational; evaluate it in float mode")]
    NotRational(Weight),
    #[error("weight {0} does not fit in a 64-bit float")]
    NotFinite(Weight),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weight {
    Rational(BigRational),
    /// `e^r`.
    Exp(BigRational),
}

impl Weight {
    pub fn one() -> Self {
        Weight::Rational(BigRational::one())
    }

    pub fn zero() -> Self {
        Weight::Rational(BigRational::zero())
    }

    pub fn int(n: i64) -> Self {
        Weight::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Weight::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The exact value, if this weight has one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Weight::Rational(r) => Some(r.clone()),
            Weight::Exp(r) if r.is_zero() => Some(BigRational::one()),
            Weight::Exp(_) => None,
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        let v = match self {
            Weight::Rational(r) => r.to_f64()?,
            Weight::Exp(r) => r.to_f64()?.exp(),
        };
        v.is_finite().then_some(v)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Rational(r) => f.write_str(&format_rational(r)),
            Weight::Exp(r) => write!(f, "exp({})", format_rational(r)),
        }
    }
}

impl From<BigRational> for Weight {
    fn from(r: BigRational) -> Self {
        Weight::Rational(r)
    }
}

/// Numeric field a count is evaluated in.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_weight(w: &Weight) -> Result<Self, WeightError>;

    fn from_count(n: u64) -> Self;

    /// `None` when dividing by zero.
    fn checked_div(&self, other: &Self) -> Option<Self>;

    fn pow_u64(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_weight(w: &Weight) -> Result<Self, WeightError> {
        w.as_rational()
            .ok_or_else(|| WeightError::NotRational(w.clone()))
    }

    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self / other)
    }
}

impl Scalar for f64 {
    fn from_weight(w: &Weight) -> Result<Self, WeightError> {
        w.to_f64().ok_or_else(|| WeightError::NotFinite(w.clone()))
    }

    fn from_count(n: u64) -> Self {
        n as f64
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        (*other != 0.0).then(|| self / other)
    }
}

/// Arithmetic a count is carried out in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

/// A count or probability in whichever mode produced it.
#[derive(Debug, Clone, PartialEq)]
pub enum Count {
    Exact(BigRational),
    Float(f64),
}

impl Count {
    pub fn to_f64(&self) -> f64 {
        match self {
            Count::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Count::Float(v) => *v,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Count::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Count::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Parses `-12`, `0.3`, `1.5e-3` or `3/10` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = parse_plain_int(n)?;
        let d: BigInt = parse_plain_int(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = body[i + 1..].parse().ok()?;
            (&body[..i], e)
        }
        None => (body, 0),
    };
    if exponent.abs() > MAX_DECIMAL_EXPONENT {
        return None;
    }
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if !frac_part.bytes().all(|b| b.is_ascii_digit()) || mantissa.ends_with('.') {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

fn parse_plain_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Renders a rational as a terminating decimal when one exists, else `num/den`.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut den = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}
