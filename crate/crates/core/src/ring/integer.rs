use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::Value;

use super::{parse_err, Domain, Ring, RingKind, Scalar, TextCodec};
use crate::error::{Error, Result};

impl Ring for BigInt {
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

    fn sub_assign(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if Zero::is_zero(a) || Zero::is_zero(b) {
            return;
        }
        *self += a * b;
    }

    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl Domain for BigInt {
    fn exact_div(&self, d: &Self) -> Result<Self> {
        if Zero::is_zero(d) {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = self.div_rem(d);
        if !Zero::is_zero(&r) {
            return Err(Error::InexactDivision(format!("{self} / {d}")));
        }
        Ok(q)
    }

    fn gcd(&self, other: &Self) -> Option<Self> {
        Some(Integer::gcd(self, other))
    }

    fn normalize_fraction(num: Self, den: Self) -> (Self, Self) {
        if Zero::is_zero(&num) {
            return (num, One::one());
        }
        let g = Integer::gcd(&num, &den);
        let (mut n, mut d) = if One::is_one(&g) { (num, den) } else { (num / &g, den / &g) };
        if d.sign() == Sign::Minus {
            n = -n;
            d = -d;
        }
        (n, d)
    }
}

impl TextCodec for BigInt {
    fn to_json(&self) -> Value {
        Value::String(self.to_str_radix(10))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => s.trim().parse().map_err(|_| parse_err("integer", v)),
            Value::Number(n) => n.to_string().parse().map_err(|_| parse_err("integer", v)),
            _ => Err(parse_err("integer", v)),
        }
    }
}

impl Scalar for BigInt {
    const RING: RingKind = RingKind::Int;

    fn encode_fraction(num: &Self, den: &Self) -> Value {
        if One::is_one(den) {
            num.to_json()
        } else {
            Value::String(format!("{num}/{den}"))
        }
    }

    fn decode_fraction(v: &Value) -> Result<(Self, Self)> {
        if let Value::String(s) = v {
            if let Some((n, d)) = s.split_once('/') {
                let n: BigInt = n.trim().parse().map_err(|_| parse_err("fraction", v))?;
                let d: BigInt = d.trim().parse().map_err(|_| parse_err("fraction", v))?;
                if Zero::is_zero(&d) {
                    return Err(Error::DivisionByZero);
                }
                return Ok((n, d));
            }
        }
        Ok((BigInt::from_json(v)?, One::one()))
    }
}
