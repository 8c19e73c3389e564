use std::fmt;

use num_rational::BigRational;
use serde_json::Value;

use super::rational::rational_to_string;
use super::{parse_err, Domain, Ring, RingKind, Scalar, TextCodec};
use crate::error::{Error, Result};

/// A univariate polynomial with rational coefficients.
///
/// Coefficients are stored lowest degree first with no trailing zero, so the
/// empty vector is the zero polynomial.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        QPoly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        QPoly::from_i64s(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    fn scale(&self, c: &BigRational) -> Self {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        let dl = d.leading().ok_or(Error::DivisionByZero)?.clone();
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((QPoly::new(quot), QPoly::new(rem)))
    }

    fn monic(&self) -> Self {
        match self.leading() {
            Some(l) if !l.is_one() => {
                let inv = l.recip();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }
}

impl Ring for QPoly {
    fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    fn one() -> Self {
        QPoly::from_i64s(&[1])
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    fn neg(&self) -> Self {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn from_i64(v: i64) -> Self {
        QPoly::from_i64s(&[v])
    }
}

impl Domain for QPoly {
    fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!("{self} / {d}")));
        }
        Ok(q)
    }

    /// Monic gcd by the Euclidean algorithm.
    fn gcd(&self, other: &Self) -> Option<Self> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).ok()?;
            a = b;
            b = r;
        }
        Some(a.monic())
    }

    fn normalize_fraction(num: Self, den: Self) -> (Self, Self) {
        if num.is_zero() {
            return (num, QPoly::one());
        }
        let (mut n, mut d) = (num, den);
        if let Some(g) = n.gcd(&d) {
            if g.degree().unwrap_or(0) > 0 {
                n = n.exact_div(&g).expect("gcd divides numerator");
                d = d.exact_div(&g).expect("gcd divides denominator");
            }
        }
        if let Some(l) = d.leading().cloned() {
            if !l.is_one() {
                let inv = l.recip();
                n = n.scale(&inv);
                d = d.scale(&inv);
            }
        }
        (n, d)
    }
}

impl TextCodec for QPoly {
    fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| Value::String(rational_to_string(c))).collect())
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(items) => Ok(QPoly::new(
                items.iter().map(BigRational::from_json).collect::<Result<Vec<_>>>()?,
            )),
            // bare scalars are accepted as constants
            Value::String(_) | Value::Number(_) => Ok(QPoly::constant(BigRational::from_json(v)?)),
            _ => Err(parse_err("polynomial", v)),
        }
    }
}

impl Scalar for QPoly {
    const RING: RingKind = RingKind::PolyQ;

    fn encode_fraction(num: &Self, den: &Self) -> Value {
        if den.is_one() {
            num.to_json()
        } else {
            serde_json::json!({ "num": num.to_json(), "den": den.to_json() })
        }
    }

    fn decode_fraction(v: &Value) -> Result<(Self, Self)> {
        if let Value::Object(map) = v {
            let num = map.get("num").ok_or_else(|| parse_err("fraction", v))?;
            let den = map.get("den").ok_or_else(|| parse_err("fraction", v))?;
            return Ok((QPoly::from_json(num)?, QPoly::from_json(den)?));
        }
        Ok((QPoly::from_json(v)?, QPoly::one()))
    }
}

impl fmt::Display for QPoly {
    /// Highest degree first, e.g. `x^2 - 1/2x + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = *c < BigRational::zero();
            let mag = if negative { c.neg() } else { c.clone() };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            let coef = if mag.is_one() && i > 0 { String::new() } else { rational_to_string(&mag) };
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}x")?,
                _ => write!(f, "{coef}x^{i}")?,
            }
        }
        Ok(())
    }
}
