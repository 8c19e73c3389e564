//! Commutative rings, commutative domains with checked exact division, and
//! their quotient fields.
//!
//! Three domains are provided: arbitrary-precision integers ([`BigInt`]),
//! rationals ([`BigRational`], a field viewed as a domain) and univariate
//! polynomials with rational coefficients ([`QPoly`]).

mod frac;
mod integer;
mod poly;
mod rational;

use std::fmt::{self, Debug};

pub use frac::Frac;
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::QPoly;

use crate::error::{Error, Result};

/// A commutative ring with identity.
///
/// Elements are immutable values; every operation returns a new element.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self = Ring::add(self, rhs);
    }

    fn sub_assign(&mut self, rhs: &Self) {
        *self = Ring::sub(self, rhs);
    }

    /// `self += a * b`
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self = Ring::add(self, &Ring::mul(a, b));
    }

    fn from_i64(v: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        for _ in 0..v.unsigned_abs() {
            acc.add_assign(&one);
        }
        if v < 0 {
            acc.neg()
        } else {
            acc
        }
    }
}

/// A commutative domain: a ring without zero divisors, with a checked exact
/// division.
pub trait Domain: Ring {
    /// Returns `q` with `q * d == self`, or [`Error::InexactDivision`] when no
    /// such `q` exists in the domain.
    fn exact_div(&self, d: &Self) -> Result<Self>;

    /// Greatest common divisor, when the domain supplies one.
    fn gcd(&self, _other: &Self) -> Option<Self> {
        None
    }

    /// Canonical form of the pair `num / den` (`den` nonzero).
    ///
    /// The default cancels a gcd when one is available. Instances override
    /// this to also normalize the unit of the denominator.
    fn normalize_fraction(num: Self, den: Self) -> (Self, Self) {
        if num.is_zero() {
            return (num, Self::one());
        }
        match num.gcd(&den) {
            Some(g) if !g.is_one() && !g.is_zero() => {
                let n = num.exact_div(&g).expect("gcd divides numerator");
                let d = den.exact_div(&g).expect("gcd divides denominator");
                (n, d)
            }
            _ => (num, den),
        }
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Result<Self>;

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }
}

/// Element text encodings used by the file formats.
///
/// Integers are decimal strings, rationals `"p/q"` or `"p"`, polynomials
/// arrays `[c0, c1, ...]` of rational strings, lowest degree first.
pub trait TextCodec: Sized {
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self>;
}

/// A domain usable in every part of the toolkit, including file I/O.
pub trait Scalar: Domain + TextCodec + fmt::Display {
    /// Selector name used in the JSON documents.
    const RING: RingKind;

    /// Encodes the fraction `num / den` of two elements.
    fn encode_fraction(num: &Self, den: &Self) -> serde_json::Value;
    fn decode_fraction(v: &serde_json::Value) -> Result<(Self, Self)>;
}

/// The concrete domains supported by the file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingKind {
    Int,
    Rational,
    PolyQ,
}

impl RingKind {
    pub fn name(self) -> &'static str {
        match self {
            RingKind::Int => "int",
            RingKind::Rational => "rational",
            RingKind::PolyQ => "polyq",
        }
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "int" => Ok(RingKind::Int),
            "rational" => Ok(RingKind::Rational),
            "polyq" => Ok(RingKind::PolyQ),
            other => Err(Error::Parse(format!("unknown ring '{other}'"))),
        }
    }
}

/// `a / 1`.
pub fn frac_of<R: Domain>(a: R) -> Frac<R> {
    Frac::from_domain(a)
}

/// Multiplicative inverse in the quotient field.
pub fn frac_inv<R: Domain>(a: &Frac<R>) -> Result<Frac<R>> {
    a.inv()
}

/// Exact division in `R`.
pub fn exact_div<R: Domain>(a: &R, b: &R) -> Result<R> {
    a.exact_div(b)
}

pub(crate) fn parse_err(what: &str, v: &serde_json::Value) -> Error {
    Error::Parse(format!("cannot parse {what} from {v}"))
}
