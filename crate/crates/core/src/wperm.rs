//! Weighted permutation matrices: square matrices with at most one nonzero
//! entry in each row and each column, stored as a sparse pivot set.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matrix::{Arith, DMatrix};
use crate::ring::{Domain, Field, Frac, Ring};

#[derive(Clone, PartialEq, Debug)]
pub struct WPerm<T> {
    n: usize,
    /// `(col, value)` of the pivot in each row.
    by_row: Vec<Option<(usize, T)>>,
    /// Row of the pivot in each column.
    by_col: Vec<Option<usize>>,
}

impl<T: Ring> WPerm<T> {
    pub fn zero(n: usize) -> Self {
        WPerm { n, by_row: vec![None; n], by_col: vec![None; n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, T::one())
    }

    /// `c·I`, or the zero matrix when `c = 0`.
    pub fn scalar(n: usize, c: T) -> Self {
        let mut w = Self::zero(n);
        if !c.is_zero() {
            for i in 0..n {
                w.by_row[i] = Some((i, c.clone()));
                w.by_col[i] = Some(i);
            }
        }
        w
    }

    /// Builds from `(row, col, value)` triples. Zero values are dropped.
    pub fn from_pivots(n: usize, pivots: impl IntoIterator<Item = (usize, usize, T)>) -> Result<Self> {
        let mut w = Self::zero(n);
        for (r, c, v) in pivots {
            w.insert(r, c, v)?;
        }
        Ok(w)
    }

    fn insert(&mut self, r: usize, c: usize, v: T) -> Result<()> {
        if r >= self.n || c >= self.n {
            return Err(Error::InvalidPermutation(format!("pivot ({r}, {c}) outside {0}x{0}", self.n)));
        }
        if v.is_zero() {
            return Ok(());
        }
        if self.by_row[r].is_some() || self.by_col[c].is_some() {
            return Err(Error::InvalidPermutation(format!("second pivot in row {r} or column {c}")));
        }
        self.by_row[r] = Some((c, v));
        self.by_col[c] = Some(r);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of pivots, which is also the rank.
    pub fn rank(&self) -> usize {
        self.by_row.iter().filter(|e| e.is_some()).count()
    }

    /// Pivots in increasing row order.
    pub fn pivots(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.by_row.iter().enumerate().filter_map(|(r, e)| e.as_ref().map(|(c, v)| (r, *c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&T> {
        match self.by_row.get(r) {
            Some(Some((cc, v))) if *cc == c => Some(v),
            _ => None,
        }
    }

    pub fn row_entry(&self, r: usize) -> Option<(usize, &T)> {
        self.by_row[r].as_ref().map(|(c, v)| (*c, v))
    }

    pub fn col_entry(&self, c: usize) -> Option<(usize, &T)> {
        self.by_col[c].map(|r| (r, &self.by_row[r].as_ref().expect("consistent index").1))
    }

    pub fn map<U: Ring>(&self, mut f: impl FnMut(&T) -> U) -> WPerm<U> {
        let mut w = WPerm::zero(self.n);
        for (r, c, v) in self.pivots() {
            w.insert(r, c, f(v)).expect("same pattern");
        }
        w
    }

    pub fn try_map<U: Ring>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<WPerm<U>> {
        let mut w = WPerm::zero(self.n);
        for (r, c, v) in self.pivots() {
            w.insert(r, c, f(v)?)?;
        }
        Ok(w)
    }

    /// Values in `S_p`: every pivot equal to one.
    pub fn is_unit(&self) -> bool {
        self.pivots().all(|(_, _, v)| v.is_one())
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.n
    }

    /// A full-rank matrix whose pivots all equal one.
    pub fn is_permutation(&self) -> bool {
        self.is_full_rank() && self.is_unit()
    }

    pub fn is_diagonal(&self) -> bool {
        self.pivots().all(|(r, c, _)| r == c)
    }

    /// Unit mapping: same pattern, every value one.
    pub fn unit_map(&self) -> Self {
        self.pattern()
    }

    /// The pattern as a matrix over another ring.
    pub fn pattern<U: Ring>(&self) -> WPerm<U> {
        self.map(|_| U::one())
    }

    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.n).filter(|&r| self.by_row[r].is_none()).collect()
    }

    pub fn zero_cols(&self) -> Vec<usize> {
        (0..self.n).filter(|&c| self.by_col[c].is_none()).collect()
    }

    /// Complementary matrix: ones pairing the k-th zero row with the k-th
    /// zero column, both ascending.
    pub fn complement_map(&self) -> Self {
        let pairs = self.zero_rows().into_iter().zip(self.zero_cols());
        WPerm::from_pivots(self.n, pairs.map(|(r, c)| (r, c, T::one()))).expect("rows and columns are free")
    }

    /// Extended mapping: `S` completed to full rank by its complement.
    pub fn extended_map(&self) -> Self {
        self.add_disjoint(&self.complement_map()).expect("complement has disjoint support")
    }

    /// Sum of two matrices whose pivots share no row and no column.
    pub fn add_disjoint(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let mut w = self.clone();
        for (r, c, v) in other.pivots() {
            w.insert(r, c, v.clone())?;
        }
        Ok(w)
    }

    pub fn transpose(&self) -> Self {
        let mut w = Self::zero(self.n);
        for (r, c, v) in self.pivots() {
            w.insert(c, r, v.clone()).expect("transposed pattern");
        }
        w
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        self.map(|v| v.mul(c))
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{0}x{0} and {1}x{1}", self.n, other.n)));
        }
        Ok(())
    }

    /// Semigroup product; the result is again a weighted permutation.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let mut w = Self::zero(self.n);
        for (r, k, v) in self.pivots() {
            if let Some((c, u)) = other.row_entry(k) {
                w.insert(r, c, v.mul(u))?;
            }
        }
        Ok(w)
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (r, c, v) in self.pivots() {
            m[(r, c)] = v.clone();
        }
        m
    }

    /// Row and column idempotents `I = E·Eᵀ`, `J = Eᵀ·E`.
    pub fn row_idem(&self) -> DiagIdempotent {
        DiagIdempotent { active: self.by_row.iter().map(Option::is_some).collect() }
    }

    pub fn col_idem(&self) -> DiagIdempotent {
        DiagIdempotent { active: self.by_col.iter().map(Option::is_some).collect() }
    }

    /// Quadrants `[S11, S12, S21, S22]`.
    pub fn split4(&self) -> Result<[Self; 4]> {
        if !self.n.is_multiple_of(2) {
            return Err(Error::OddDimension { rows: self.n, cols: self.n });
        }
        let h = self.n / 2;
        let mut q = [Self::zero(h), Self::zero(h), Self::zero(h), Self::zero(h)];
        for (r, c, v) in self.pivots() {
            let idx = 2 * usize::from(r >= h) + usize::from(c >= h);
            q[idx].insert(r % h, c % h, v.clone())?;
        }
        Ok(q)
    }

    pub fn join4(s11: &Self, s12: &Self, s21: &Self, s22: &Self) -> Result<Self> {
        let h = s11.n;
        if [s12.n, s21.n, s22.n].iter().any(|&k| k != h) {
            return Err(Error::DimensionMismatch("join4 blocks differ in size".into()));
        }
        let mut w = Self::zero(2 * h);
        for (blk, (dr, dc)) in [s11, s12, s21, s22].into_iter().zip([(0, 0), (0, h), (h, 0), (h, h)]) {
            for (r, c, v) in blk.pivots() {
                w.insert(r + dr, c + dc, v.clone())?;
            }
        }
        Ok(w)
    }

    /// `self · A`
    pub fn mul_dense(&self, ar: &Arith<'_>, a: &DMatrix<T>) -> Result<DMatrix<T>> {
        if a.rows() != self.n {
            return Err(Error::DimensionMismatch(format!("{0}x{0} times {1}x{2}", self.n, a.rows(), a.cols())));
        }
        let mut out = DMatrix::zeros(self.n, a.cols());
        let mut muls = 0;
        for (r, k, v) in self.pivots() {
            for j in 0..a.cols() {
                out[(r, j)] = if v.is_one() { a[(k, j)].clone() } else { v.mul(&a[(k, j)]) };
            }
            if !v.is_one() {
                muls += a.cols();
            }
        }
        ar.record(muls, 0, 0);
        Ok(out)
    }

    /// `A · self`
    pub fn dense_mul(&self, ar: &Arith<'_>, a: &DMatrix<T>) -> Result<DMatrix<T>> {
        if a.cols() != self.n {
            return Err(Error::DimensionMismatch(format!("{0}x{1} times {2}x{2}", a.rows(), a.cols(), self.n)));
        }
        let mut out = DMatrix::zeros(a.rows(), self.n);
        let mut muls = 0;
        for (k, c, v) in self.pivots() {
            for i in 0..a.rows() {
                out[(i, c)] = if v.is_one() { a[(i, k)].clone() } else { a[(i, k)].mul(v) };
            }
            if !v.is_one() {
                muls += a.rows();
            }
        }
        ar.record(muls, 0, 0);
        Ok(out)
    }
}

impl<T: Field> WPerm<T> {
    /// Moore–Penrose inverse: transposed pattern, inverted values.
    pub fn mp_inverse(&self) -> Self {
        let mut w = Self::zero(self.n);
        for (r, c, v) in self.pivots() {
            w.insert(c, r, v.inv().expect("pivots are nonzero")).expect("transposed pattern");
        }
        w
    }
}

impl<R: Domain> WPerm<R> {
    pub fn to_frac(&self) -> WPerm<Frac<R>> {
        self.map(|v| Frac::from_domain(v.clone()))
    }
}

/// `Ŝ = (α·S + S̄) / α_r`
pub fn shat_of<R: Domain>(s: &WPerm<Frac<R>>, alpha: &R, alpha_r: &R) -> Result<WPerm<Frac<R>>> {
    if alpha.is_zero() || alpha_r.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let scaled = s.map(|v| v.scale(alpha));
    let full = scaled.add_disjoint(&s.complement_map())?;
    full.try_map(|v| v.div_domain(alpha_r))
}

/// `Ŝ⁻¹ = (α_r/α)·(S⁺ + α·S̄ᵀ)`
pub fn shat_inverse<R: Domain>(s: &WPerm<Frac<R>>, alpha: &R, alpha_r: &R) -> Result<WPerm<Frac<R>>> {
    if alpha.is_zero() || alpha_r.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let sbar_t = s.complement_map().transpose().map(|v| v.scale(alpha));
    let sum = s.mp_inverse().add_disjoint(&sbar_t)?;
    let ratio = Frac::new(alpha_r.clone(), alpha.clone())?;
    Ok(sum.scale(&ratio))
}

/// A diagonal 0/1 matrix, given by its active positions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagIdempotent {
    active: Vec<bool>,
}

impl DiagIdempotent {
    pub fn new(n: usize, active: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut flags = vec![false; n];
        for i in active {
            if i >= n {
                return Err(Error::DimensionMismatch(format!("index {i} outside size {n}")));
            }
            flags[i] = true;
        }
        Ok(DiagIdempotent { active: flags })
    }

    pub fn n(&self) -> usize {
        self.active.len()
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    pub fn active(&self) -> BTreeSet<usize> {
        (0..self.n()).filter(|&i| self.active[i]).collect()
    }

    /// `D̄ = I − D`
    pub fn complement(&self) -> Self {
        DiagIdempotent { active: self.active.iter().map(|a| !a).collect() }
    }

    pub fn to_wperm<T: Ring>(&self) -> WPerm<T> {
        WPerm::from_pivots(self.n(), self.active().into_iter().map(|i| (i, i, T::one()))).expect("diagonal")
    }

    pub fn to_dense<T: Ring>(&self) -> DMatrix<T> {
        self.to_wperm().to_dense()
    }

    /// `μ·D + D̄` as a dense matrix.
    pub fn blend<T: Field>(&self, mu: &T) -> Result<DMatrix<T>> {
        if mu.is_zero() {
            return Err(Error::ZeroScale);
        }
        let mut m = DMatrix::identity(self.n());
        for i in self.active() {
            m[(i, i)] = mu.clone();
        }
        Ok(m)
    }
}

/// `μ·D + D̄`
pub fn idem_blend<T: Field>(d: &DiagIdempotent, mu: &T) -> Result<DMatrix<T>> {
    d.blend(mu)
}
