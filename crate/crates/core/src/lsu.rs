//! The recursive LSU factorization `α·L·S·U = A` together with the
//! inverse factors `M`, `W` satisfying `L·Ŝ·M = I` and `W·Ŝ·U = I`.
//!
//! Everything except `S`, `Ŝ` and `λ` stays in the domain `R`. `M` and `W`
//! are carried scaled by `α` (`m_scaled = α·M`, `w_scaled = α·W`) because for
//! an inner call with `α ≠ 1` they can have denominators dividing `α`; at the
//! top level `α = 1` and the scaled matrices are `M` and `W` themselves.

use crate::error::{Error, Result};
use crate::matrix::{solve_left_upper, solve_right_lower, Arith, DMatrix};
use crate::ring::{Domain, Frac, Ring};
use crate::wperm::{shat_of, WPerm};

/// Halves at least this large factor their two middle blocks on separate
/// rayon tasks.
const PARALLEL_MIN: usize = 32;

#[derive(Clone, PartialEq, Debug)]
pub struct LsuFactors<R: Domain> {
    pub l: DMatrix<R>,
    pub u: DMatrix<R>,
    pub s: WPerm<Frac<R>>,
    pub shat: WPerm<Frac<R>>,
    /// `α·M`
    pub m_scaled: DMatrix<R>,
    /// `α·W`
    pub w_scaled: DMatrix<R>,
    pub alpha: R,
    pub alpha_r: R,
    pub rank: usize,
    /// Global pivot positions in nested-minor order.
    pub pivot_order: Vec<(usize, usize)>,
}

impl<R: Domain> LsuFactors<R> {
    pub fn n(&self) -> usize {
        self.l.rows()
    }

    pub fn m(&self) -> Result<DMatrix<R>> {
        self.m_scaled.div_exact(&self.alpha)
    }

    pub fn w(&self) -> Result<DMatrix<R>> {
        self.w_scaled.div_exact(&self.alpha)
    }

    /// `M` over the quotient field, defined for every `α`.
    pub fn m_frac(&self) -> DMatrix<Frac<R>> {
        scaled_down(&self.m_scaled, &self.alpha)
    }

    pub fn w_frac(&self) -> DMatrix<Frac<R>> {
        scaled_down(&self.w_scaled, &self.alpha)
    }

    /// Complementary matrix `S̄` as a 0/1 pattern.
    pub fn sbar(&self) -> WPerm<Frac<R>> {
        self.s.complement_map()
    }

    fn zero(n: usize, alpha: &R) -> Result<Self> {
        let a2 = alpha.mul(alpha);
        let inv = Frac::recip_of(alpha)?;
        Ok(LsuFactors {
            l: DMatrix::identity(n),
            u: DMatrix::identity(n),
            s: WPerm::zero(n),
            shat: WPerm::scalar(n, inv),
            m_scaled: DMatrix::diagonal(n, &a2),
            w_scaled: DMatrix::diagonal(n, &a2),
            alpha: alpha.clone(),
            alpha_r: alpha.clone(),
            rank: 0,
            pivot_order: Vec::new(),
        })
    }
}

fn scaled_down<R: Domain>(m: &DMatrix<R>, alpha: &R) -> DMatrix<Frac<R>> {
    m.map(|v| Frac::new(v.clone(), alpha.clone()).expect("alpha is nonzero"))
}

/// The scalars of one recursive step.
#[derive(Clone, PartialEq, Debug)]
pub struct RecursionScalars<R: Domain> {
    pub alpha_k: R,
    pub alpha_l: R,
    pub alpha_m: R,
    pub alpha_s: R,
    /// `α_l / α_k`
    pub lambda: Frac<R>,
}

/// Intermediate blocks of the outermost recursive step, for inspection.
#[derive(Clone, PartialEq, Debug)]
pub struct RecursionTrace<R: Domain> {
    pub scalars: RecursionScalars<R>,
    pub f11: LsuFactors<R>,
    pub f21: LsuFactors<R>,
    pub f12: LsuFactors<R>,
    pub f22: LsuFactors<R>,
    /// `M11·A12`
    pub a12_0: DMatrix<Frac<R>>,
    /// `α_k·Ŝ11·M11·A12`
    pub a12_1: DMatrix<Frac<R>>,
    /// `S̄11·M11·A12 / α`, factored with `α_k`
    pub a12_2: DMatrix<R>,
    /// `A21·W11`
    pub a21_0: DMatrix<Frac<R>>,
    /// `α_k·A21·W11·Ŝ11`
    pub a21_1: DMatrix<Frac<R>>,
    pub a21_2: DMatrix<R>,
    /// `a21_1·S11⁺·a12_1`
    pub a22_0: DMatrix<Frac<R>>,
    /// `(α·α_k²·A22 − a22_0) / (α·α_k)`
    pub a22_1: DMatrix<R>,
    /// `S̄21·M21·a22_1·W12·S̄12`
    pub a22_2: DMatrix<R>,
    /// `a22_2 / (α_k²·α)`, factored with `α_s`
    pub a22_3: DMatrix<R>,
    pub l12_tilde: DMatrix<R>,
    pub u12_tilde: DMatrix<R>,
    pub u2: DMatrix<R>,
    pub l3: DMatrix<R>,
}

/// Factors a square matrix of power-of-two size with schoolbook arithmetic.
pub fn lsu_factor<R: Domain>(a: &DMatrix<R>, alpha: &R) -> Result<LsuFactors<R>> {
    lsu_factor_with(&Arith::default(), a, alpha)
}

pub fn lsu_factor_with<R: Domain>(ar: &Arith<'_>, a: &DMatrix<R>, alpha: &R) -> Result<LsuFactors<R>> {
    check_input(a, alpha)?;
    Ok(step(ar, a, alpha, false)?.0)
}

/// As [`lsu_factor_with`], also returning the outermost step's intermediate
/// blocks (absent for the base cases).
pub fn lsu_factor_traced<R: Domain>(
    ar: &Arith<'_>,
    a: &DMatrix<R>,
    alpha: &R,
) -> Result<(LsuFactors<R>, Option<RecursionTrace<R>>)> {
    check_input(a, alpha)?;
    step(ar, a, alpha, true)
}

/// Pads to a power of two and factors with `α = 1`. The original dimensions
/// are returned alongside.
pub fn lsu_factor_any<R: Domain>(a: &DMatrix<R>) -> Result<(LsuFactors<R>, (usize, usize))> {
    lsu_factor_any_with(&Arith::default(), a)
}

pub fn lsu_factor_any_with<R: Domain>(ar: &Arith<'_>, a: &DMatrix<R>) -> Result<(LsuFactors<R>, (usize, usize))> {
    let (p, dims) = a.pad_to_pow2();
    Ok((lsu_factor_with(ar, &p, &R::one())?, dims))
}

/// The nested minors `det_1, …, det_r`, from `det_0 = α` and
/// `det_i = 1 / (det_{i−1}·S[pivot_i])`.
pub fn recover_minors<R: Domain>(f: &LsuFactors<R>) -> Result<Vec<R>> {
    let mut chain = minor_chain(&f.s, &f.pivot_order, &f.alpha)?;
    chain.remove(0);
    Ok(chain)
}

/// `[det_0 = α, det_1, …, det_r]`
fn minor_chain<R: Domain>(s: &WPerm<Frac<R>>, order: &[(usize, usize)], alpha: &R) -> Result<Vec<R>> {
    let mut chain = Vec::with_capacity(order.len() + 1);
    chain.push(alpha.clone());
    for &(r, c) in order {
        let v = s
            .get(r, c)
            .ok_or_else(|| Error::InvalidPermutation(format!("no pivot of S at ({r}, {c})")))?;
        let prev = chain.last().expect("nonempty");
        // det_i = den / (det_{i-1} · num)
        let d = v.den().exact_div(&prev.mul(v.num()))?;
        chain.push(d);
    }
    Ok(chain)
}

fn check_input<R: Domain>(a: &DMatrix<R>, alpha: &R) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    if a.rows() > 1 && !a.rows().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(a.rows()));
    }
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    Ok(())
}

fn sbar_r<R: Domain>(s: &WPerm<Frac<R>>) -> WPerm<R> {
    s.complement_map().pattern()
}

fn unit_r<R: Domain>(s: &WPerm<Frac<R>>) -> WPerm<R> {
    s.pattern()
}

/// `a·E + b·S̄` for a pattern `E` and its disjoint complement `S̄`.
fn blend2<R: Domain>(e: &WPerm<R>, a: &R, sbar: &WPerm<R>, b: &R) -> WPerm<R> {
    e.scale(a).add_disjoint(&sbar.scale(b)).expect("disjoint supports")
}

/// Scales columns (`cols = true`) or rows of `m` active in `d` by
/// `num / den`, exactly.
fn rescale_lines<R: Domain>(
    ar: &Arith<'_>,
    m: &DMatrix<R>,
    active: &crate::wperm::DiagIdempotent,
    num: &R,
    den: &R,
    cols: bool,
) -> Result<DMatrix<R>> {
    let mut out = m.clone();
    let mut touched = 0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if active.is_active(if cols { j } else { i }) {
                out[(i, j)] = m[(i, j)].mul(num).exact_div(den)?;
                touched += 1;
            }
        }
    }
    ar.record(touched, 0, touched);
    Ok(out)
}

type Step<R> = (LsuFactors<R>, Option<RecursionTrace<R>>);

fn step<R: Domain>(ar: &Arith<'_>, a: &DMatrix<R>, alpha: &R, trace: bool) -> Result<Step<R>> {
    let n = a.rows();
    if a.is_zero() {
        return Ok((LsuFactors::zero(n, alpha)?, None));
    }
    if n == 1 {
        let x = a[(0, 0)].clone();
        let ax = alpha.mul(&x);
        ar.record(2, 0, 0);
        let f = LsuFactors {
            l: DMatrix::from_rows(vec![vec![x.clone()]])?,
            u: DMatrix::from_rows(vec![vec![x.clone()]])?,
            s: WPerm::from_pivots(1, [(0, 0, Frac::recip_of(&ax)?)])?,
            shat: WPerm::from_pivots(1, [(0, 0, Frac::recip_of(&x.mul(&x))?)])?,
            m_scaled: DMatrix::from_rows(vec![vec![ax.clone()]])?,
            w_scaled: DMatrix::from_rows(vec![vec![ax]])?,
            alpha: alpha.clone(),
            alpha_r: x,
            rank: 1,
            pivot_order: vec![(0, 0)],
        };
        return Ok((f, None));
    }

    let h = n / 2;
    let [a11, a12, a21, a22] = a.split4()?;
    let alpha2 = alpha.mul(alpha);

    // upper left block
    let f11 = step(ar, &a11, alpha, false)?.0;
    let ak = f11.alpha_r.clone();
    let sb11 = sbar_r(&f11.s);
    let x = ar.mul(&f11.m_scaled, &a12)?;
    let y = ar.mul(&a21, &f11.w_scaled)?;
    let a12_2 = ar.div_exact(&sb11.mul_dense(ar, &x)?, &alpha2)?;
    let a21_2 = ar.div_exact(&sb11.dense_mul(ar, &y)?, &alpha2)?;
    let i11 = f11.s.row_idem().to_wperm::<R>();
    let j11 = f11.s.col_idem().to_wperm::<R>();
    let alpha_ak = alpha.mul(&ak);
    let g = ar.div_exact(&i11.dense_mul(ar, &y)?, &alpha_ak)?;
    let hh = ar.div_exact(&j11.mul_dense(ar, &x)?, &alpha_ak)?;

    // the off-diagonal blocks are independent
    let (f21, f12) = if h >= PARALLEL_MIN {
        let (r21, r12) = rayon::join(|| step(ar, &a21_2, &ak, false), || step(ar, &a12_2, &ak, false));
        (r21?.0, r12?.0)
    } else {
        (step(ar, &a21_2, &ak, false)?.0, step(ar, &a12_2, &ak, false)?.0)
    };
    let al = f21.alpha_r.clone();
    let am = f12.alpha_r.clone();
    let lambda = Frac::new(al.clone(), ak.clone())?;
    let as_ = al.mul(&am).exact_div(&ak)?;
    ar.record(1, 0, 1);

    // Schur complement by the nested-minor recurrence over the pivots of S11
    let dets = minor_chain(&f11.s, &f11.pivot_order, alpha)?;
    let mut b = ar.scale(&a22, alpha);
    for (p, &(pi, pj)) in f11.pivot_order.iter().enumerate() {
        let (dp, dprev) = (&dets[p + 1], &dets[p]);
        let gcol: Vec<R> = (0..h).map(|r| alpha.mul(&g[(r, pi)])).collect();
        for r in 0..h {
            for c in 0..h {
                let v = dp.mul(&b[(r, c)]).sub(&gcol[r].mul(&hh[(pj, c)]));
                b[(r, c)] = if dprev.is_one() { v } else { v.exact_div(dprev)? };
            }
        }
        ar.record(h + 2 * h * h, h * h, if dprev.is_one() { 0 } else { h * h });
    }
    let a22_1 = b;

    // lower right block
    let sb21 = sbar_r(&f21.s);
    let sb12 = sbar_r(&f12.s);
    let ma = ar.mul(&f21.m_scaled, &a22_1)?;
    let q = ar.mul(&ma, &f12.w_scaled)?;
    let ak2 = ak.mul(&ak);
    let sq = sb21.mul_dense(ar, &q)?;
    let a22_3 = ar.div_exact(&sb12.dense_mul(ar, &sq)?, &ak2.mul(&ak2).mul(alpha))?;
    let f22 = step(ar, &a22_3, &as_, false)?.0;
    let alpha_r = f22.alpha_r.clone();

    // L and U
    let i12 = f12.s.row_idem();
    let j12 = f12.s.col_idem();
    let i12_r = i12.to_wperm::<R>();
    let j21_r = f21.s.col_idem().to_wperm::<R>();
    let l12t = rescale_lines(ar, &f12.l, &i12, &al, &ak, true)?;
    let u12t = rescale_lines(ar, &f12.u, &j12, &al, &ak, false)?;
    let u2 = ar.add(&hh, &ar.div_exact(&j21_r.mul_dense(ar, &ma)?, &ak.mul(&al).mul(alpha))?)?;
    let l3 = ar.add(&g, &ar.div_exact(&i12_r.dense_mul(ar, &sq)?, &ak2.mul(&ak).mul(&am).mul(alpha))?)?;
    let l1 = ar.mul(&f11.l, &l12t)?;
    let u1 = ar.mul(&f21.u, &f11.u)?;
    let l = DMatrix::join4(&l1, &DMatrix::zeros(h, h), &l3, &ar.mul(&f21.l, &f22.l)?)?;
    let u = DMatrix::join4(&u1, &u2, &DMatrix::zeros(h, h), &ar.mul(&f22.u, &u12t)?)?;

    // S, Ŝ and the pivot order
    let lam_inv2 = Frac::new(ak2.clone(), al.mul(&al))?;
    let s12 = f12.s.map(|v| v.mul(&lam_inv2));
    let s = WPerm::join4(&f11.s, &s12, &f21.s, &f22.s)?;
    let shat = shat_of(&s, alpha, &alpha_r)?;
    let mut pivot_order = f11.pivot_order.clone();
    pivot_order.extend(f21.pivot_order.iter().map(|&(r, c)| (r + h, c)));
    pivot_order.extend(f12.pivot_order.iter().map(|&(r, c)| (r, c + h)));
    pivot_order.extend(f22.pivot_order.iter().map(|&(r, c)| (r + h, c + h)));

    // M and W
    let [t11, t12, t21, t22] = s.complement_map().pattern::<R>().split4()?;
    let (e11, e12, e21, e22) = (unit_r(&f11.s), unit_r(&f12.s), unit_r(&f21.s), unit_r(&f22.s));
    let sb22 = sbar_r(&f22.s);
    let ep11 = e11.add_disjoint(&t11)?.transpose();
    let ep12 = e21.add_disjoint(&t21)?.transpose();
    let ep21 = e12.add_disjoint(&t12)?.transpose();
    let ep22 = e22.add_disjoint(&t22)?.transpose();
    let ext11 = e11.add_disjoint(&sb11)?;
    let sp12 = blend2(&e21, &ak, &sb21, alpha);
    let sp21 = blend2(&e12, &al, &sb12, alpha);
    let sp22 = blend2(&e22, &as_, &sb22, alpha);
    let as_ak = as_.mul(&ak);

    let (m11, m12, m21, m22) = (&f11.m_scaled, &f12.m_scaled, &f21.m_scaled, &f22.m_scaled);
    let b11 = ar.div_exact(&ep11.mul(&sb12)?.mul_dense(ar, &ar.mul(&ext11.dense_mul(ar, m12)?, m11)?)?, &ak)?;
    let b12 = ar.div_exact(&ep12.mul(&sb22)?.mul_dense(ar, &ar.mul(&sp12.dense_mul(ar, m22)?, m21)?)?, &as_ak)?;
    let b21 = ar.div_exact(&ep21.mul(&sp21)?.mul_dense(ar, &ar.mul(&sb11.dense_mul(ar, m12)?, m11)?)?, &alpha_ak)?;
    let b22 = ar.div_exact(&ep22.mul(&sp22)?.mul_dense(ar, &ar.mul(&sb21.dense_mul(ar, m22)?, m21)?)?, &as_ak)?;

    let (w11, w12, w21, w22) = (&f11.w_scaled, &f12.w_scaled, &f21.w_scaled, &f22.w_scaled);
    let bw11 = ar.div_exact(&sb21.mul(&ep11)?.dense_mul(ar, &ar.mul(&ext11.dense_mul(ar, w11)?, w21)?)?, &ak)?;
    let bw12 = ar.div_exact(&sp12.mul(&ep12)?.dense_mul(ar, &ar.mul(&sb11.dense_mul(ar, w11)?, w21)?)?, &alpha_ak)?;
    let bw21 = ar.div_exact(&sb22.mul(&ep21)?.dense_mul(ar, &ar.mul(&sp21.dense_mul(ar, w12)?, w22)?)?, &as_ak)?;
    let bw22 = ar.div_exact(&sp22.mul(&ep22)?.dense_mul(ar, &ar.mul(&sb12.dense_mul(ar, w12)?, w22)?)?, &as_ak)?;

    let ak_al = ak.mul(&al);
    let am_ak = am.mul(&ak);
    let right = DMatrix::vstack(&b12, &b22)?;
    let left = DMatrix::vstack(&b11, &b21)?;
    let p5 = solve_right_lower(ar, &ar.mul(&right, &l3)?, &l1)?;
    let m_left = ar.div_exact(
        &ar.sub(&ar.scale(&left, &alpha_r.mul(&al)), &ar.scale(&p5, &am_ak))?,
        &am_ak.mul(&al),
    )?;
    let m_right = ar.div_exact(&right, &al)?;
    let m_scaled = DMatrix::hstack(&m_left, &m_right)?;

    let top = DMatrix::hstack(&bw11, &bw12)?;
    let bottom = DMatrix::hstack(&bw21, &bw22)?;
    let p6 = solve_left_upper(ar, &u1, &ar.mul(&u2, &bottom)?)?;
    let w_top = ar.div_exact(
        &ar.sub(&ar.scale(&top, &alpha_r.mul(&am)), &ar.scale(&p6, &ak_al))?,
        &ak_al.mul(&am),
    )?;
    let w_bottom = ar.div_exact(&bottom, &am)?;
    let w_scaled = DMatrix::vstack(&w_top, &w_bottom)?;

    let rank = s.rank();
    let factors = LsuFactors {
        l,
        u,
        s,
        shat,
        m_scaled,
        w_scaled,
        alpha: alpha.clone(),
        alpha_r,
        rank,
        pivot_order,
    };

    let tr = if trace {
        let shat11 = f11.shat.to_dense();
        let a12_0 = scaled_down(&x, alpha);
        let akf = Frac::from_domain(ak.clone());
        let a12_1 = shat11.mul(&a12_0)?.map(|v| v.mul(&akf));
        let a21_0 = scaled_down(&y, alpha);
        let a21_1 = a21_0.mul(&shat11)?.map(|v| v.mul(&akf));
        let a22_0 = a21_1.mul(&f11.s.mp_inverse().to_dense())?.mul(&a12_1)?;
        let a22_2 = a22_3.scale(&ak2.mul(alpha));
        Some(RecursionTrace {
            scalars: RecursionScalars {
                alpha_k: ak,
                alpha_l: al,
                alpha_m: am,
                alpha_s: as_,
                lambda,
            },
            f11,
            f21,
            f12,
            f22,
            a12_0,
            a12_1,
            a12_2,
            a21_0,
            a21_1,
            a21_2,
            a22_0,
            a22_1,
            a22_2,
            a22_3,
            l12_tilde: l12t,
            u12_tilde: u12t,
            u2,
            l3,
        })
    } else {
        None
    };
    Ok((factors, tr))
}
