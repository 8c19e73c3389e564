//! Exact triangular solves whose solutions are known to lie in the domain.
//!
//! Large systems recurse on 2×2 blocks so the bulk of the work goes through
//! the configured multiplication strategy; small ones use substitution with
//! checked exact division.

use super::{Arith, DMatrix};
use crate::error::{Error, Result};
use crate::ring::Domain;

const BLOCK_MIN: usize = 16;

/// `X` with `X·L = B` for lower triangular `L`.
pub fn solve_right_lower<R: Domain>(ar: &Arith<'_>, b: &DMatrix<R>, l: &DMatrix<R>) -> Result<DMatrix<R>> {
    let h = l.rows();
    if !l.is_square() || b.cols() != h {
        return Err(Error::DimensionMismatch(format!(
            "X·L = B with L {}x{} and B {}x{}",
            l.rows(),
            l.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if h >= BLOCK_MIN && h.is_multiple_of(2) {
        let k = h / 2;
        let m = b.rows();
        let [l11, _, l21, l22] = l.split4()?;
        let (b1, b2) = (b.block(0, 0, m, k), b.block(0, k, m, k));
        let x2 = solve_right_lower(ar, &b2, &l22)?;
        let rhs = ar.sub(&b1, &ar.mul(&x2, &l21)?)?;
        let x1 = solve_right_lower(ar, &rhs, &l11)?;
        return DMatrix::hstack(&x1, &x2);
    }
    let m = b.rows();
    let mut x = DMatrix::<R>::zeros(m, h);
    for j in (0..h).rev() {
        let d = &l[(j, j)];
        for a in 0..m {
            let mut s = b[(a, j)].clone();
            for i in j + 1..h {
                s.sub_assign(&x[(a, i)].mul(&l[(i, j)]));
            }
            x[(a, j)] = s.exact_div(d)?;
        }
    }
    let tail = h * h.saturating_sub(1) / 2;
    ar.record(m * tail, m * tail, m * h);
    Ok(x)
}

/// `X` with `U·X = B` for upper triangular `U`.
pub fn solve_left_upper<R: Domain>(ar: &Arith<'_>, u: &DMatrix<R>, b: &DMatrix<R>) -> Result<DMatrix<R>> {
    let h = u.rows();
    if !u.is_square() || b.rows() != h {
        return Err(Error::DimensionMismatch(format!(
            "U·X = B with U {}x{} and B {}x{}",
            u.rows(),
            u.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if h >= BLOCK_MIN && h.is_multiple_of(2) {
        let k = h / 2;
        let m = b.cols();
        let [u11, u12, _, u22] = u.split4()?;
        let (b1, b2) = (b.block(0, 0, k, m), b.block(k, 0, k, m));
        let x2 = solve_left_upper(ar, &u22, &b2)?;
        let rhs = ar.sub(&b1, &ar.mul(&u12, &x2)?)?;
        let x1 = solve_left_upper(ar, &u11, &rhs)?;
        return DMatrix::vstack(&x1, &x2);
    }
    let m = b.cols();
    let mut x = DMatrix::<R>::zeros(h, m);
    for i in (0..h).rev() {
        let d = &u[(i, i)];
        for c in 0..m {
            let mut s = b[(i, c)].clone();
            for j in i + 1..h {
                s.sub_assign(&u[(i, j)].mul(&x[(j, c)]));
            }
            x[(i, c)] = s.exact_div(d)?;
        }
    }
    let tail = h * h.saturating_sub(1) / 2;
    ar.record(m * tail, m * tail, m * h);
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::MulStrategy;
    use crate::ring::BigInt;

    fn lower(n: usize) -> DMatrix<BigInt> {
        DMatrix::from_fn(n, n, |i, j| {
            if j > i {
                BigInt::from(0)
            } else if i == j {
                BigInt::from((i % 3) as i64 + 1)
            } else {
                BigInt::from(((i * 3 + j) % 11) as i64 - 5)
            }
        })
    }

    #[test]
    fn recovers_known_solution() {
        for n in [1, 3, 16, 32] {
            let l = lower(n);
            let x = DMatrix::<BigInt>::from_fn(5, n, |i, j| BigInt::from((i * 7 + j) as i64 % 13 - 6));
            for strategy in [MulStrategy::Schoolbook, MulStrategy::Strassen] {
                let ar = Arith::plain(strategy);
                let b = x.mul(&l).unwrap();
                assert_eq!(solve_right_lower(&ar, &b, &l).unwrap(), x);
                let u = l.transpose();
                let y = x.transpose();
                let c = u.mul(&y).unwrap();
                assert_eq!(solve_left_upper(&ar, &u, &c).unwrap(), y);
            }
        }
    }

    #[test]
    fn non_integral_solution_is_an_error() {
        let l = DMatrix::<BigInt>::from_i64(&[vec![2]]).unwrap();
        let b = DMatrix::<BigInt>::from_i64(&[vec![3]]).unwrap();
        assert!(matches!(solve_right_lower(&Arith::default(), &b, &l), Err(Error::InexactDivision(_))));
    }
}
