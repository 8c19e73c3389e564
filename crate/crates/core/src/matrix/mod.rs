//! Dense row-major matrices over a ring, with 2×2 block structure.

mod mul;
mod solve;

use std::fmt;
use std::ops::{Index, IndexMut};

pub use mul::{mat_mul, Arith, MulStrategy, OpCounter, OpCounts, STRASSEN_CUTOFF};
pub use solve::{solve_left_upper, solve_right_lower};

use crate::error::{Error, Result};
use crate::ring::{Domain, Frac, Ring};

#[derive(Clone, PartialEq, Debug)]
pub struct DMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> DMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(n, &T::one())
    }

    /// `c·I`
    pub fn diagonal(n: usize, c: &T) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(DMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::from_i64(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> DMatrix<U> {
        DMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Ring>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<DMatrix<U>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(DMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    fn same_shape(&self, rhs: &Self, op: &str) -> Result<()> {
        if self.dims() != rhs.dims() {
            return Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "add")?;
        Ok(self.zip(rhs, Ring::add))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "sub")?;
        Ok(self.zip(rhs, Ring::sub))
    }

    pub(crate) fn zip(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        DMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::neg)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_one() {
            return self.clone();
        }
        self.map(|a| a.mul(c))
    }

    /// Schoolbook product, uncounted.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        Arith::plain(MulStrategy::Schoolbook).mul(self, rhs)
    }

    /// Copy of the `r`×`c` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, r: usize, c: usize) -> Self {
        Self::from_fn(r, c, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Writes `b` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// The four equal quadrants `[A11, A12, A21, A22]`.
    pub fn split4(&self) -> Result<[Self; 4]> {
        if !self.rows.is_multiple_of(2) || !self.cols.is_multiple_of(2) {
            return Err(Error::OddDimension { rows: self.rows, cols: self.cols });
        }
        let (h, w) = (self.rows / 2, self.cols / 2);
        Ok([self.block(0, 0, h, w), self.block(0, w, h, w), self.block(h, 0, h, w), self.block(h, w, h, w)])
    }

    pub fn join4(a11: &Self, a12: &Self, a21: &Self, a22: &Self) -> Result<Self> {
        if a11.rows != a12.rows || a21.rows != a22.rows || a11.cols != a21.cols || a12.cols != a22.cols {
            return Err(Error::DimensionMismatch("join4 blocks do not tile".into()));
        }
        let mut m = Self::zeros(a11.rows + a21.rows, a11.cols + a12.cols);
        m.set_block(0, 0, a11);
        m.set_block(0, a11.cols, a12);
        m.set_block(a11.rows, 0, a21);
        m.set_block(a11.rows, a11.cols, a22);
        Ok(m)
    }

    pub fn vstack(top: &Self, bottom: &Self) -> Result<Self> {
        if top.cols != bottom.cols {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut data = top.data.clone();
        data.extend_from_slice(&bottom.data);
        Ok(DMatrix { rows: top.rows + bottom.rows, cols: top.cols, data })
    }

    pub fn hstack(left: &Self, right: &Self) -> Result<Self> {
        if left.rows != right.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let mut m = Self::zeros(left.rows, left.cols + right.cols);
        m.set_block(0, 0, left);
        m.set_block(0, left.cols, right);
        Ok(m)
    }

    /// Zero-pads bottom/right to the smallest `m×m`, `m` a power of two, that
    /// holds the matrix. Returns the original dimensions alongside.
    pub fn pad_to_pow2(&self) -> (Self, (usize, usize)) {
        let dims = self.dims();
        let big = self.rows.max(self.cols);
        if big == 0 {
            return (self.clone(), dims);
        }
        let m = big.next_power_of_two();
        if self.rows == m && self.cols == m {
            return (self.clone(), dims);
        }
        let mut p = Self::zeros(m, m);
        p.set_block(0, 0, self);
        (p, dims)
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn has_nonzero_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| !self[(i, i)].is_zero())
    }
}

impl<R: Domain> DMatrix<R> {
    /// Entrywise exact division by `d`.
    pub fn div_exact(&self, d: &R) -> Result<Self> {
        if d.is_one() {
            return Ok(self.clone());
        }
        self.try_map(|a| a.exact_div(d))
    }

    pub fn to_frac(&self) -> DMatrix<Frac<R>> {
        self.map(|a| Frac::from_domain(a.clone()))
    }
}

impl<R: Domain> DMatrix<Frac<R>> {
    /// The matrix over `R`, when every entry lies in `R`.
    pub fn to_domain(&self) -> Result<DMatrix<R>> {
        self.try_map(Frac::to_domain)
    }
}

impl<T> Index<(usize, usize)> for DMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for DMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}
