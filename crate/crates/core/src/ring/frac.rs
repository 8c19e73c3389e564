use std::fmt;

use super::{Domain, Field, Ring, Scalar};
use crate::error::{Error, Result};

/// An element `num / den` of the quotient field of a domain `R`.
///
/// The denominator is never zero. Pairs are kept in the canonical form given
/// by [`Domain::normalize_fraction`]; equality is cross-multiplication, so it
/// does not depend on how far an instance reduces.
#[derive(Clone, Debug)]
pub struct Frac<R> {
    num: R,
    den: R,
}

impl<R: Domain> Frac<R> {
    pub fn new(num: R, den: R) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = R::normalize_fraction(num, den);
        Ok(Frac { num, den })
    }

    pub fn from_domain(a: R) -> Self {
        Frac { num: a, den: R::one() }
    }

    /// `1 / a`
    pub fn recip_of(a: &R) -> Result<Self> {
        Frac::new(R::one(), a.clone())
    }

    pub fn num(&self) -> &R {
        &self.num
    }

    pub fn den(&self) -> &R {
        &self.den
    }

    /// The element as a member of `R`, when it is one.
    pub fn to_domain(&self) -> Result<R> {
        self.num.exact_div(&self.den)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::norm(self.num.mul(c), self.den.clone())
    }

    pub fn div_domain(&self, c: &R) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::norm(self.num.clone(), self.den.mul(c)))
    }

    fn norm(num: R, den: R) -> Self {
        let (num, den) = R::normalize_fraction(num, den);
        Frac { num, den }
    }
}

impl<R: Domain> PartialEq for Frac<R> {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl<R: Domain> Ring for Frac<R> {
    fn zero() -> Self {
        Frac { num: R::zero(), den: R::one() }
    }

    fn one() -> Self {
        Frac { num: R::one(), den: R::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.num == self.den
    }

    fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::norm(self.num.add(&rhs.num), self.den.clone());
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Self::norm(num, self.den.mul(&rhs.den))
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::norm(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    fn neg(&self) -> Self {
        Frac { num: self.num.neg(), den: self.den.clone() }
    }
}

impl<R: Domain> Field for Frac<R> {
    fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::norm(self.den.clone(), self.num.clone()))
    }
}

impl<R: Scalar> Frac<R> {
    pub fn to_json(&self) -> serde_json::Value {
        R::encode_fraction(&self.num, &self.den)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let (n, d) = R::decode_fraction(v)?;
        Frac::new(n, d)
    }
}

impl<R: Domain + fmt::Display> fmt::Display for Frac<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
