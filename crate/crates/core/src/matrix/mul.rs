use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use super::DMatrix;
use crate::error::{Error, Result};
use crate::ring::{Domain, Ring};

/// Square blocks smaller than this are multiplied by the schoolbook method.
pub const STRASSEN_CUTOFF: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MulStrategy {
    #[default]
    Schoolbook,
    Strassen,
}

impl MulStrategy {
    pub fn name(self) -> &'static str {
        match self {
            MulStrategy::Schoolbook => "schoolbook",
            MulStrategy::Strassen => "strassen",
        }
    }
}

impl fmt::Display for MulStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MulStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schoolbook" => Ok(MulStrategy::Schoolbook),
            "strassen" => Ok(MulStrategy::Strassen),
            other => Err(Error::Parse(format!("unknown multiplication strategy '{other}'"))),
        }
    }
}

/// Tallies of ring-level multiplications, additions (including
/// subtractions) and exact divisions.
///
/// Counters are atomic so concurrent branches of one computation can share a
/// single instance.
#[derive(Debug, Default)]
pub struct OpCounter {
    mul: AtomicU64,
    add: AtomicU64,
    div: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpCounts {
    pub mul_count: u64,
    pub add_count: u64,
    pub div_count: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&self, muls: u64, adds: u64, divs: u64) {
        if muls > 0 {
            self.mul.fetch_add(muls, Ordering::Relaxed);
        }
        if adds > 0 {
            self.add.fetch_add(adds, Ordering::Relaxed);
        }
        if divs > 0 {
            self.div.fetch_add(divs, Ordering::Relaxed);
        }
    }

    pub fn counts(&self) -> OpCounts {
        OpCounts {
            mul_count: self.mul.load(Ordering::Relaxed),
            add_count: self.add.load(Ordering::Relaxed),
            div_count: self.div.load(Ordering::Relaxed),
        }
    }
}

/// Matrix arithmetic under a chosen multiplication strategy, optionally
/// counting ring operations.
#[derive(Debug, Clone, Copy)]
pub struct Arith<'a> {
    strategy: MulStrategy,
    counter: Option<&'a OpCounter>,
}

impl Arith<'static> {
    pub fn plain(strategy: MulStrategy) -> Self {
        Arith { strategy, counter: None }
    }
}

impl Default for Arith<'static> {
    fn default() -> Self {
        Arith::plain(MulStrategy::Schoolbook)
    }
}

impl<'a> Arith<'a> {
    pub fn counted(strategy: MulStrategy, counter: &'a OpCounter) -> Self {
        Arith { strategy, counter: Some(counter) }
    }

    pub fn strategy(&self) -> MulStrategy {
        self.strategy
    }

    pub fn record(&self, muls: usize, adds: usize, divs: usize) {
        if let Some(c) = self.counter {
            c.record(muls as u64, adds as u64, divs as u64);
        }
    }

    pub fn mul<T: Ring>(&self, a: &DMatrix<T>, b: &DMatrix<T>) -> Result<DMatrix<T>> {
        if a.cols != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        Ok(match self.strategy {
            MulStrategy::Schoolbook => self.schoolbook(a, b),
            MulStrategy::Strassen => self.blocked_strassen(a, b),
        })
    }

    /// Product of a chain of matrices, left to right.
    pub fn mul_chain<T: Ring>(&self, first: &DMatrix<T>, rest: &[&DMatrix<T>]) -> Result<DMatrix<T>> {
        let mut acc = first.clone();
        for m in rest {
            acc = self.mul(&acc, m)?;
        }
        Ok(acc)
    }

    pub fn add<T: Ring>(&self, a: &DMatrix<T>, b: &DMatrix<T>) -> Result<DMatrix<T>> {
        let r = a.add(b)?;
        self.record(0, a.data.len(), 0);
        Ok(r)
    }

    pub fn sub<T: Ring>(&self, a: &DMatrix<T>, b: &DMatrix<T>) -> Result<DMatrix<T>> {
        let r = a.sub(b)?;
        self.record(0, a.data.len(), 0);
        Ok(r)
    }

    pub fn scale<T: Ring>(&self, a: &DMatrix<T>, c: &T) -> DMatrix<T> {
        if c.is_one() {
            return a.clone();
        }
        self.record(a.data.len(), 0, 0);
        a.scale(c)
    }

    pub fn div_exact<R: Domain>(&self, a: &DMatrix<R>, d: &R) -> Result<DMatrix<R>> {
        if d.is_one() {
            return Ok(a.clone());
        }
        self.record(0, 0, a.data.len());
        a.div_exact(d)
    }

    fn schoolbook<T: Ring>(&self, a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
        let (m, k, p) = (a.rows, a.cols, b.cols);
        self.record(m * k * p, m * p * k.saturating_sub(1), 0);
        let mut out = DMatrix::<T>::zeros(m, p);
        for i in 0..m {
            let orow = &mut out.data[i * p..(i + 1) * p];
            for kk in 0..k {
                let aik = &a.data[i * k + kk];
                if aik.is_zero() {
                    continue;
                }
                let brow = &b.data[kk * p..(kk + 1) * p];
                for (o, bv) in orow.iter_mut().zip(brow) {
                    o.mul_add_assign(aik, bv);
                }
            }
        }
        out
    }

    /// Strassen on a grid of equal square blocks when the shapes allow it.
    fn blocked_strassen<T: Ring>(&self, a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
        let (m, k, p) = (a.rows, a.cols, b.cols);
        let s = m.min(k).min(p);
        if s < STRASSEN_CUTOFF || !s.is_power_of_two() || m % s != 0 || k % s != 0 || p % s != 0 {
            return self.schoolbook(a, b);
        }
        if m == s && k == s && p == s {
            return self.strassen(a, b);
        }
        let mut out = DMatrix::zeros(m, p);
        for bi in 0..m / s {
            for bj in 0..p / s {
                let mut acc: Option<DMatrix<T>> = None;
                for bk in 0..k / s {
                    let prod = self.strassen(&a.block(bi * s, bk * s, s, s), &b.block(bk * s, bj * s, s, s));
                    acc = Some(match acc {
                        None => prod,
                        Some(c) => self.add(&c, &prod).expect("equal block shapes"),
                    });
                }
                out.set_block(bi * s, bj * s, &acc.expect("at least one block"));
            }
        }
        out
    }

    fn strassen<T: Ring>(&self, a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
        let n = a.rows;
        if n < STRASSEN_CUTOFF || !n.is_multiple_of(2) {
            return self.schoolbook(a, b);
        }
        let [a11, a12, a21, a22] = a.split4().expect("even size");
        let [b11, b12, b21, b22] = b.split4().expect("even size");
        let add = |x: &DMatrix<T>, y: &DMatrix<T>| self.add(x, y).expect("equal shapes");
        let sub = |x: &DMatrix<T>, y: &DMatrix<T>| self.sub(x, y).expect("equal shapes");

        let m1 = self.strassen(&add(&a11, &a22), &add(&b11, &b22));
        let m2 = self.strassen(&add(&a21, &a22), &b11);
        let m3 = self.strassen(&a11, &sub(&b12, &b22));
        let m4 = self.strassen(&a22, &sub(&b21, &b11));
        let m5 = self.strassen(&add(&a11, &a12), &b22);
        let m6 = self.strassen(&sub(&a21, &a11), &add(&b11, &b12));
        let m7 = self.strassen(&sub(&a12, &a22), &add(&b21, &b22));

        let c11 = add(&sub(&add(&m1, &m4), &m5), &m7);
        let c12 = add(&m3, &m5);
        let c21 = add(&m2, &m4);
        let c22 = add(&add(&sub(&m1, &m2), &m3), &m6);
        DMatrix::join4(&c11, &c12, &c21, &c22).expect("quadrants tile")
    }
}

/// `A·B` with the given strategy, adding the ring operations performed to
/// `counter`.
pub fn mat_mul<T: Ring>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    strategy: MulStrategy,
    counter: &OpCounter,
) -> Result<DMatrix<T>> {
    Arith::counted(strategy, counter).mul(a, b)
}
