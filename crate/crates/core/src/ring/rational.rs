use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use super::{parse_err, Domain, Ring, RingKind, Scalar, TextCodec};
use crate::error::{Error, Result};

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if Zero::is_zero(a) || Zero::is_zero(b) {
            return;
        }
        *self += a * b;
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// The rationals form a field, so every division by a nonzero element is
/// exact and fractions collapse to `q / 1`.
impl Domain for BigRational {
    fn exact_div(&self, d: &Self) -> Result<Self> {
        if Zero::is_zero(d) {
            return Err(Error::DivisionByZero);
        }
        Ok(self / d)
    }

    fn gcd(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(self) && Zero::is_zero(other) {
            Some(Zero::zero())
        } else {
            Some(One::one())
        }
    }

    fn normalize_fraction(num: Self, den: Self) -> (Self, Self) {
        (num / den, One::one())
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if Zero::is_zero(&d) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub(crate) fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl TextCodec for BigRational {
    fn to_json(&self) -> Value {
        Value::String(rational_to_string(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s).ok_or_else(|| parse_err("rational", v)),
            Value::Number(n) => parse_rational(&n.to_string()).ok_or_else(|| parse_err("rational", v)),
            _ => Err(parse_err("rational", v)),
        }
    }
}

impl Scalar for BigRational {
    const RING: RingKind = RingKind::Rational;

    fn encode_fraction(num: &Self, den: &Self) -> Value {
        (num / den).to_json()
    }

    fn decode_fraction(v: &Value) -> Result<(Self, Self)> {
        Ok((BigRational::from_json(v)?, One::one()))
    }
}
