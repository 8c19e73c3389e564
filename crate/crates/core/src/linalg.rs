//! Quantities derived from a factor bundle: rank, determinant, the
//! generalized inverse `P`, inverses and exact solves.

use crate::error::{Error, Result};
use crate::lsu::LsuFactors;
use crate::matrix::{Arith, DMatrix};
use crate::oracle::reconstruct;
use crate::ring::{Domain, Frac, Ring};

/// Number of pivots of `S`.
pub fn rank_of<R: Domain>(f: &LsuFactors<R>) -> usize {
    f.s.rank()
}

/// `α_r` for a full-rank bundle. Its absolute value is `|det A|`; the sign
/// can differ, see [`det_signed`].
pub fn det_of<R: Domain>(f: &LsuFactors<R>) -> Result<R> {
    full_rank(f)?;
    Ok(f.alpha_r.clone())
}

/// `det A = αⁿ·det L·det S·det U`, with the sign of the permutation in `S`.
pub fn det_signed<R: Domain>(f: &LsuFactors<R>) -> Result<R> {
    let n = f.n();
    if f.s.rank() < n {
        return Ok(R::zero());
    }
    let mut acc = Frac::from_domain(R::one());
    let alpha = Frac::from_domain(f.alpha.clone());
    for i in 0..n {
        acc = acc.mul(&alpha).mul(&Frac::from_domain(f.l[(i, i)].mul(&f.u[(i, i)])));
    }
    let mut perm = Vec::with_capacity(n);
    for (_, c, v) in f.s.pivots() {
        perm.push(c);
        acc = acc.mul(v);
    }
    if permutation_is_odd(&perm) {
        acc = acc.neg();
    }
    acc.to_domain()
}

fn permutation_is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut odd = false;
    for start in 0..p.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

fn full_rank<R: Domain>(f: &LsuFactors<R>) -> Result<()> {
    let (rank, n) = (f.s.rank(), f.n());
    if rank < n {
        return Err(Error::NotFullRank { rank, n });
    }
    Ok(())
}

/// `P = α·W·S·M / α_r²`, which satisfies `A·P·A = A` and `P·A·P = P`.
pub fn pseudo_inverse<R: Domain>(f: &LsuFactors<R>) -> Result<DMatrix<Frac<R>>> {
    let ar = Arith::default();
    let ws = f.s.dense_mul(&ar, &f.w_scaled.to_frac())?;
    let wsm = ws.mul(&f.m_scaled.to_frac())?;
    let scale = Frac::new(R::one(), f.alpha.mul(&f.alpha_r).mul(&f.alpha_r))?;
    Ok(wsm.scale(&scale))
}

/// `A⁻¹` of a full-rank matrix.
pub fn inverse<R: Domain>(f: &LsuFactors<R>) -> Result<DMatrix<Frac<R>>> {
    full_rank(f)?;
    pseudo_inverse(f)
}

/// `L⁻¹ = Ŝ·M`
pub fn l_inverse<R: Domain>(f: &LsuFactors<R>) -> Result<DMatrix<Frac<R>>> {
    f.shat.mul_dense(&Arith::default(), &f.m_frac())
}

/// `U⁻¹ = W·Ŝ`
pub fn u_inverse<R: Domain>(f: &LsuFactors<R>) -> Result<DMatrix<Frac<R>>> {
    f.shat.dense_mul(&Arith::default(), &f.w_frac())
}

/// `x = P·b`, accepted only when `A·x = b` holds exactly for the matrix
/// `A = α·L·S·U` the bundle describes.
pub fn solve<R: Domain>(f: &LsuFactors<R>, b: &DMatrix<R>) -> Result<DMatrix<Frac<R>>> {
    if b.rows() != f.n() {
        return Err(Error::DimensionMismatch(format!("right-hand side has {} rows, expected {}", b.rows(), f.n())));
    }
    let bf = b.to_frac();
    let x = pseudo_inverse(f)?.mul(&bf)?;
    if reconstruct(f)?.mul(&x)? != bf {
        return Err(Error::NoSolution);
    }
    Ok(x)
}
