//! Brute-force reference computations for checking the factorization on
//! small inputs. Nothing here shares code with the recursive algorithm.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lsu::{recover_minors, LsuFactors};
use crate::matrix::DMatrix;
use crate::ring::{Domain, Frac, Ring};
use crate::wperm::shat_of;

/// Largest size for which [`verify_bundle`] runs the exhaustive rank check.
pub const RANK_CHECK_MAX: usize = 8;
/// Largest size for which [`verify_bundle`] runs the minor-membership scan.
pub const MINOR_SCAN_MAX: usize = 4;

/// Row and column index sets of a square submatrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinorSpec {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>, bounds: (usize, usize)) -> Result<Self> {
        let ascending = |v: &[usize], max: usize| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&i| i < max);
        if rows.len() != cols.len() || !ascending(&rows, bounds.0) || !ascending(&cols, bounds.1) {
            return Err(Error::DimensionMismatch(format!("invalid minor {rows:?} x {cols:?}")));
        }
        Ok(MinorSpec { rows, cols })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn minor<T: Ring>(&self, a: &DMatrix<T>) -> T {
        det_of_indices(a, &self.rows, &self.cols)
    }
}

/// Determinant by cofactor expansion along the first row, memoized over the
/// set of columns still available.
pub fn det_bruteforce<T: Ring>(a: &DMatrix<T>) -> Result<T> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let idx: Vec<usize> = (0..a.rows()).collect();
    Ok(det_of_indices(a, &idx, &idx))
}

/// Determinant of the submatrix on `rows × cols` (equal lengths, at most 63).
fn det_of_indices<T: Ring>(a: &DMatrix<T>, rows: &[usize], cols: &[usize]) -> T {
    assert_eq!(rows.len(), cols.len());
    let mut memo = HashMap::new();
    expand(a, rows, cols, 0, (1u64 << cols.len()) - 1, &mut memo)
}

fn expand<T: Ring>(a: &DMatrix<T>, rows: &[usize], cols: &[usize], depth: usize, free: u64, memo: &mut HashMap<u64, T>) -> T {
    if depth == rows.len() {
        return T::one();
    }
    if let Some(v) = memo.get(&free) {
        return v.clone();
    }
    let mut acc = T::zero();
    let mut sign_pos = true;
    for (k, &c) in cols.iter().enumerate() {
        if free & (1 << k) == 0 {
            continue;
        }
        let entry = &a[(rows[depth], c)];
        if !entry.is_zero() {
            let sub = expand(a, rows, cols, depth + 1, free & !(1 << k), memo);
            let term = entry.mul(&sub);
            acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
        }
        sign_pos = !sign_pos;
    }
    memo.insert(free, acc.clone());
    acc
}

/// All ascending `k`-subsets of `0..n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Largest `k` such that some `k×k` minor is nonzero.
pub fn rank_bruteforce<T: Ring>(a: &DMatrix<T>) -> usize {
    for k in (1..=a.rows().min(a.cols())).rev() {
        let rs = subsets(a.rows(), k);
        let cs = subsets(a.cols(), k);
        if rs.iter().any(|r| cs.iter().any(|c| !det_of_indices(a, r, c).is_zero())) {
            return k;
        }
    }
    0
}

/// Every minor of every size, including the empty minor 1, with rows and
/// columns taken in ascending order. Reordering the rows of a submatrix only
/// flips the sign.
pub fn all_minors<T: Ring>(a: &DMatrix<T>) -> Vec<T> {
    let mut out = vec![T::one()];
    for k in 1..=a.rows().min(a.cols()) {
        for r in subsets(a.rows(), k) {
            for c in subsets(a.cols(), k) {
                out.push(det_of_indices(a, &r, &c));
            }
        }
    }
    out
}

/// Transpose of the cofactor matrix.
pub fn adjugate<T: Ring>(a: &DMatrix<T>) -> Result<DMatrix<T>> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let all: Vec<usize> = (0..n).collect();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        // cofactor (j, i)
        let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
        let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
        let d = det_of_indices(a, &rows, &cols);
        if (i + j) % 2 == 0 {
            d
        } else {
            d.neg()
        }
    }))
}

/// Determinant of rows `block_rows ∪ {r}` by cols `block_cols ∪ {c}` of `m`,
/// evaluated both directly and as `det(A_k)·ω − row·A_k*·col`.
pub fn surrounding_minor_at<T: Ring>(
    m: &DMatrix<T>,
    block_rows: &[usize],
    block_cols: &[usize],
    r: usize,
    c: usize,
) -> Result<T> {
    let k = block_rows.len();
    if block_cols.len() != k || block_rows.contains(&r) || block_cols.contains(&c) {
        return Err(Error::DimensionMismatch("surrounding row/column overlaps the block".into()));
    }
    let ak = DMatrix::from_fn(k, k, |i, j| m[(block_rows[i], block_cols[j])].clone());
    let det_k = det_bruteforce(&ak)?;
    if det_k.is_zero() {
        return Err(Error::SingularLeadingBlock);
    }
    let mut rows: Vec<usize> = block_rows.to_vec();
    rows.push(r);
    let mut cols: Vec<usize> = block_cols.to_vec();
    cols.push(c);
    let direct = det_of_indices(m, &rows, &cols);

    let adj = adjugate(&ak)?;
    let row = DMatrix::from_fn(1, k, |_, j| m[(r, block_cols[j])].clone());
    let col = DMatrix::from_fn(k, 1, |i, _| m[(block_rows[i], c)].clone());
    let rac = if k == 0 { T::zero() } else { row.mul(&adj)?.mul(&col)?[(0, 0)].clone() };
    let formula = det_k.mul(&m[(r, c)]).sub(&rac);
    if formula != direct {
        return Err(Error::OracleDisagreement(format!("surrounding minor at ({r}, {c})")));
    }
    Ok(direct)
}

/// Surrounding minor of the leading `k×k` block with row `r` and column `c`.
pub fn surrounding_minor<T: Ring>(m: &DMatrix<T>, k: usize, r: usize, c: usize) -> Result<T> {
    if r < k || c < k || r >= m.rows() || c >= m.cols() {
        return Err(Error::DimensionMismatch(format!("({r}, {c}) does not surround a {k}x{k} block")));
    }
    let lead: Vec<usize> = (0..k).collect();
    surrounding_minor_at(m, &lead, &lead, r, c)
}

/// The matrix of all surrounding minors of the leading `k×k` block.
pub fn surrounding_minor_matrix<T: Ring>(a: &DMatrix<T>, k: usize) -> Result<DMatrix<T>> {
    let (p, q) = (a.rows() - k, a.cols() - k);
    let mut out = DMatrix::zeros(p, q);
    for i in 0..p {
        for j in 0..q {
            out[(i, j)] = surrounding_minor(a, k, k + i, k + j)?;
        }
    }
    Ok(out)
}

/// Every bordered minor of the nested pivot blocks: for each prefix of
/// `pivots` (paired rows and columns, in order), the surrounding minors with
/// one further row and column appended last. Includes 1 for the empty block.
pub fn pivot_bordered_minors<T: Ring>(a: &DMatrix<T>, pivots: &[(usize, usize)]) -> Result<Vec<T>> {
    let mut out = vec![T::one()];
    for k in 0..=pivots.len() {
        let rows: Vec<usize> = pivots[..k].iter().map(|p| p.0).collect();
        let cols: Vec<usize> = pivots[..k].iter().map(|p| p.1).collect();
        for r in (0..a.rows()).filter(|r| !rows.contains(r)) {
            for c in (0..a.cols()).filter(|c| !cols.contains(c)) {
                out.push(surrounding_minor_at(a, &rows, &cols, r, c)?);
            }
        }
    }
    Ok(out)
}

/// `det(A_k)·D − C·A_k*·B` for the partition of `a` at `k`.
pub fn block_surrounding_minors<T: Ring>(a: &DMatrix<T>, k: usize) -> Result<DMatrix<T>> {
    let (p, q) = (a.rows() - k, a.cols() - k);
    let ak = a.block(0, 0, k, k);
    let det_k = det_bruteforce(&ak)?;
    if det_k.is_zero() {
        return Err(Error::SingularLeadingBlock);
    }
    let b = a.block(0, k, k, q);
    let c = a.block(k, 0, p, k);
    let d = a.block(k, k, p, q);
    let cab = c.mul(&adjugate(&ak)?)?.mul(&b)?;
    d.scale(&det_k).sub(&cab)
}

/// Both sides of the block identity agree.
pub fn check_block_identity<T: Ring>(a: &DMatrix<T>, k: usize) -> Result<bool> {
    Ok(surrounding_minor_matrix(a, k)? == block_surrounding_minors(a, k)?)
}

#[derive(Clone, PartialEq, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    fn push_result(&mut self, name: &str, r: Result<bool>, fail_detail: &str) {
        match r {
            Ok(true) => self.push(name, true, "ok"),
            Ok(false) => self.push(name, false, fail_detail),
            Err(e) => self.push(name, false, e.to_string()),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "pass": c.pass,
                "detail": c.detail,
            })).collect::<Vec<_>>()
        })
    }
}

fn shapes_ok<R: Domain>(f: &LsuFactors<R>) -> Result<()> {
    let n = f.n();
    let dense = [&f.l, &f.u, &f.m_scaled, &f.w_scaled];
    if dense.iter().any(|m| m.dims() != (n, n)) || f.s.n() != n || f.shat.n() != n {
        return Err(Error::DimensionMismatch("factor sizes disagree".into()));
    }
    Ok(())
}

/// `α·L·S·U` over the quotient field.
pub fn reconstruct<R: Domain>(f: &LsuFactors<R>) -> Result<DMatrix<Frac<R>>> {
    let ar = crate::matrix::Arith::default();
    let ls = f.s.dense_mul(&ar, &f.l.to_frac())?;
    let lsu = ls.mul(&f.u.to_frac())?;
    let alpha = Frac::from_domain(f.alpha.clone());
    Ok(lsu.scale(&alpha))
}

/// Runs every identity and structural check on a factor bundle of `a`. `a`
/// is padded to the bundle's size when smaller.
pub fn verify_bundle<R: Domain>(a: &DMatrix<R>, f: &LsuFactors<R>) -> Report {
    let mut rep = Report::default();
    if let Err(e) = shapes_ok(f) {
        rep.push("shapes", false, e.to_string());
        return rep;
    }
    let n = f.n();
    let a = if a.dims() == (n, n) {
        a.clone()
    } else if a.rows() <= n && a.cols() <= n {
        let mut p = DMatrix::zeros(n, n);
        p.set_block(0, 0, a);
        p
    } else {
        rep.push("shapes", false, format!("matrix {}x{} larger than factors {n}x{n}", a.rows(), a.cols()));
        return rep;
    };
    rep.push("shapes", true, "ok");
    let ar = crate::matrix::Arith::default();
    let id = DMatrix::<Frac<R>>::identity(n);

    rep.push_result("alpha_lsu_eq_a", reconstruct(f).map(|p| p == a.to_frac()), "alpha*L*S*U differs from A");

    let lsm = (|| -> Result<bool> {
        let ls = f.shat.dense_mul(&ar, &f.l.to_frac())?;
        Ok(ls.mul(&f.m_frac())? == id)
    })();
    rep.push_result("l_shat_m_eq_i", lsm, "L*Shat*M differs from I");

    let wsu = (|| -> Result<bool> {
        let ws = f.shat.dense_mul(&ar, &f.w_frac())?;
        Ok(ws.mul(&f.u.to_frac())? == id)
    })();
    rep.push_result("w_shat_u_eq_i", wsu, "W*Shat*U differs from I");

    rep.push(
        "l_lower_triangular",
        f.l.is_lower_triangular() && f.l.has_nonzero_diagonal(),
        "L must be lower triangular with nonzero diagonal",
    );
    rep.push(
        "u_upper_triangular",
        f.u.is_upper_triangular() && f.u.has_nonzero_diagonal(),
        "U must be upper triangular with nonzero diagonal",
    );

    let in_domain = f.m().is_ok() && f.w().is_ok();
    rep.push("m_w_in_domain", in_domain, if in_domain { "ok" } else { "M or W has entries outside the domain" });

    let idem = (|| -> Result<bool> {
        let ibar = f.s.row_idem().complement().to_dense::<R>();
        let jbar = f.s.col_idem().complement().to_dense::<R>();
        Ok(f.l.mul(&ibar)? == ibar && jbar.mul(&f.u)? == jbar)
    })();
    rep.push_result("idempotent_conditions", idem, "L*Ibar != Ibar or Jbar*U != Jbar");

    let counted = f.rank == f.s.rank() && f.rank == f.pivot_order.len();
    let mut order_sorted = f.pivot_order.clone();
    order_sorted.sort_unstable();
    let mut pivots: Vec<(usize, usize)> = f.s.pivots().map(|(r, c, _)| (r, c)).collect();
    pivots.sort_unstable();
    rep.push(
        "rank_consistent",
        counted && order_sorted == pivots,
        format!("rank {}, {} pivots in S, pivot order of length {}", f.rank, f.s.rank(), f.pivot_order.len()),
    );

    let chain = (|| -> Result<bool> {
        let minors = recover_minors(f)?;
        Ok(minors.last().unwrap_or(&f.alpha) == &f.alpha_r)
    })();
    rep.push_result("minor_chain", chain, "nested minors do not end at alpha_r");

    rep.push_result(
        "shat_formula",
        shat_of(&f.s, &f.alpha, &f.alpha_r).map(|s| s == f.shat),
        "Shat differs from (alpha*S + Sbar)/alpha_r",
    );

    if n <= RANK_CHECK_MAX {
        let r = rank_bruteforce(&a);
        rep.push("rank_bruteforce", r == f.rank, format!("brute-force rank {r}, factor rank {}", f.rank));
    } else {
        rep.push("rank_bruteforce", true, format!("skipped for n = {n}"));
    }

    if n <= MINOR_SCAN_MAX {
        let minors = all_minors(&a);
        let bad = f
            .l
            .data()
            .iter()
            .chain(f.u.data())
            .filter(|v| !v.is_zero() && !minors.contains(v) && !minors.contains(&v.neg()))
            .count();
        rep.push("lu_entries_are_minors", bad == 0, format!("{bad} entries of L, U are not minors of A"));
    } else {
        rep.push("lu_entries_are_minors", true, format!("skipped for n = {n}"));
    }
    rep
}
