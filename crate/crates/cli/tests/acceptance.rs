//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use lsu_core::linalg::pseudo_inverse;
use lsu_core::lsu::{lsu_factor, lsu_factor_traced, recover_minors, LsuFactors};
use lsu_core::matrix::{Arith, MulStrategy};
use lsu_core::oracle::{
    all_minors, check_block_identity, det_bruteforce, pivot_bordered_minors, rank_bruteforce, surrounding_minor_at,
};
use lsu_core::ring::{BigInt, BigRational, Domain, Frac, QPoly, Ring, Scalar};
use lsu_core::serial::{bundle_from_json, matrix_to_json};
use lsu_core::wperm::DiagIdempotent;
use lsu_core::{DMatrix, WPerm};
use lsu_cli::bench::{measure, random_matrix};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn q(n: i64, d: i64) -> Frac<BigInt> {
    Frac::new(int(n), int(d)).unwrap()
}

fn im(rows: &[Vec<i64>]) -> DMatrix<BigInt> {
    DMatrix::from_i64(rows).unwrap()
}

fn wp(n: usize, ps: &[(usize, usize, Frac<BigInt>)]) -> WPerm<Frac<BigInt>> {
    WPerm::from_pivots(n, ps.iter().cloned()).unwrap()
}

fn example() -> DMatrix<BigInt> {
    im(&[vec![0, 0, 3, 0], vec![2, 0, 1, 0], vec![0, 0, 0, 0], vec![1, 4, 0, 1]])
}

macro_rules! same {
    ($what:expr, $got:expr, $want:expr) => {{
        let (g, w) = (&$got, &$want);
        ensure(g == w, || format!("{}: got {:?}, expected {:?}", $what, g, w))?;
    }};
}

// ---------------------------------------------------------------- criterion 1

fn golden() -> Outcome {
    let start = Instant::now();
    let f = lsu_factor(&example(), &int(1)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    same!("L", f.l, im(&[vec![24, 0, 0, 0], vec![0, 2, 0, 0], vec![0, 0, 1, 0], vec![0, 1, 0, 8]]));
    same!("U", f.u, im(&[vec![2, 0, 1, 0], vec![0, 8, -1, 2], vec![0, 0, 24, 0], vec![0, 0, 0, 1]]));
    same!("M", f.m().unwrap(), im(&[vec![0, 24, 0, 0], vec![0, -24, 0, 48], vec![192, 0, 0, 0], vec![0, 0, 24, 0]]));
    same!("W", f.w().unwrap(), im(&[vec![-96, 24, 0, 0], vec![24, 0, -6, 48], vec![192, 0, 0, 0], vec![0, 0, 24, 0]]));
    same!("Shat", f.shat, wp(4, &[(0, 2, q(1, 4608)), (1, 0, q(1, 48)), (2, 3, q(1, 24)), (3, 1, q(1, 384))]));
    same!("alpha_r", f.alpha_r, int(24));
    // 1-based (1,3), (2,1), (4,2); the (4,2) value is 1/16 where the printed matrix shows 1/6
    same!("S", f.s, wp(4, &[(0, 2, q(1, 192)), (1, 0, q(1, 2)), (3, 1, q(1, 16))]));
    let printed = wp(4, &[(0, 2, q(1, 192)), (1, 0, q(1, 2)), (3, 1, q(1, 6))]);
    let mut bad = f.clone();
    bad.s = printed;
    ensure(lsu_core::oracle::reconstruct(&bad).unwrap() != example().to_frac(), || "printed S(4,2)=1/6 reconstructs A".into())?;
    same!("Shat(4,2) from S", f.s.get(3, 1).unwrap().div_domain(&int(24)).unwrap(), q(1, 384));
    within(elapsed, Duration::from_secs(1), "factorization")?;
    Ok(format!("exact match, S(4,2) = 1/16 (printed 1/6 fails alpha*L*S*U = A), {elapsed:?}"))
}

// ---------------------------------------------------------------- criterion 2

fn idem(n: usize, active: &[usize]) -> DiagIdempotent {
    DiagIdempotent::new(n, active.iter().copied()).unwrap()
}

#[allow(clippy::too_many_arguments)]
fn check_step(
    name: &str,
    f: &LsuFactors<BigInt>,
    l: DMatrix<BigInt>,
    s: WPerm<Frac<BigInt>>,
    u: DMatrix<BigInt>,
    m: DMatrix<BigInt>,
    w: DMatrix<BigInt>,
    shat: WPerm<Frac<BigInt>>,
    sbar: WPerm<Frac<BigInt>>,
    i: DiagIdempotent,
    j: DiagIdempotent,
) -> Result<(), String> {
    same!(format!("{name} L"), f.l, l);
    same!(format!("{name} S"), f.s, s);
    same!(format!("{name} U"), f.u, u);
    same!(format!("{name} M"), f.m().unwrap(), m);
    same!(format!("{name} W"), f.w().unwrap(), w);
    same!(format!("{name} Shat"), f.shat, shat);
    same!(format!("{name} Sbar"), f.sbar(), sbar);
    same!(format!("{name} I"), f.s.row_idem(), i);
    same!(format!("{name} J"), f.s.col_idem(), j);
    Ok(())
}

fn intermediates() -> Outcome {
    let (_, tr) = lsu_factor_traced(&Arith::default(), &example(), &int(1)).map_err(|e| e.to_string())?;
    let tr = tr.ok_or("no trace recorded")?;
    let one = q(1, 1);

    same!("A11 input alpha", tr.f11.alpha, int(1));
    check_step(
        "step 1",
        &tr.f11,
        im(&[vec![1, 0], vec![0, 2]]),
        wp(2, &[(1, 0, q(1, 2))]),
        im(&[vec![2, 0], vec![0, 1]]),
        im(&[vec![0, 2], vec![2, 0]]),
        im(&[vec![0, 2], vec![2, 0]]),
        wp(2, &[(0, 1, q(1, 2)), (1, 0, q(1, 4))]),
        wp(2, &[(0, 1, one.clone())]),
        idem(2, &[1]),
        idem(2, &[0]),
    )?;
    same!("A12^0", tr.a12_0, im(&[vec![2, 0], vec![6, 0]]).to_frac());
    same!("A12^1", tr.a12_1, im(&[vec![6, 0], vec![1, 0]]).to_frac());
    same!("A21^0", tr.a21_0, im(&[vec![0, 0], vec![8, 2]]).to_frac());
    same!("A21^1", tr.a21_1, im(&[vec![0, 0], vec![1, 8]]).to_frac());

    same!("A21^2", tr.a21_2, im(&[vec![0, 0], vec![0, 8]]));
    same!("step 2 alpha", tr.f21.alpha, int(2));
    check_step(
        "step 2",
        &tr.f21,
        im(&[vec![1, 0], vec![0, 8]]),
        wp(2, &[(1, 1, q(1, 16))]),
        im(&[vec![1, 0], vec![0, 8]]),
        im(&[vec![8, 0], vec![0, 8]]),
        im(&[vec![8, 0], vec![0, 8]]),
        wp(2, &[(0, 0, q(1, 8)), (1, 1, q(1, 64))]),
        wp(2, &[(0, 0, one.clone())]),
        idem(2, &[1]),
        idem(2, &[1]),
    )?;

    same!("A12^2", tr.a12_2, im(&[vec![6, 0], vec![0, 0]]));
    same!("step 3 alpha", tr.f12.alpha, int(2));
    check_step(
        "step 3",
        &tr.f12,
        im(&[vec![6, 0], vec![0, 1]]),
        wp(2, &[(0, 0, q(1, 12))]),
        im(&[vec![6, 0], vec![0, 1]]),
        im(&[vec![6, 0], vec![0, 6]]),
        im(&[vec![6, 0], vec![0, 6]]),
        wp(2, &[(0, 0, q(1, 36)), (1, 1, q(1, 6))]),
        wp(2, &[(1, 1, one.clone())]),
        idem(2, &[0]),
        idem(2, &[0]),
    )?;
    same!("L12~", tr.l12_tilde, im(&[vec![24, 0], vec![0, 1]]));
    same!("U12~", tr.u12_tilde, im(&[vec![24, 0], vec![0, 1]]));
    let sc = &tr.scalars;
    same!("alpha_k", sc.alpha_k, int(2));
    same!("alpha_l", sc.alpha_l, int(8));
    same!("alpha_m", sc.alpha_m, int(6));
    same!("alpha_s", sc.alpha_s, int(24));
    same!("lambda", sc.lambda, q(4, 1));
    same!("A22^0", tr.a22_0, im(&[vec![0, 0], vec![2, 0]]).to_frac());
    same!("A22^1", tr.a22_1, im(&[vec![0, 0], vec![-1, 2]]));
    same!("A22^2", tr.a22_2, DMatrix::<BigInt>::zeros(2, 2));

    same!("A22^3", tr.a22_3, DMatrix::<BigInt>::zeros(2, 2));
    same!("step 4 alpha", tr.f22.alpha, int(24));
    check_step(
        "step 4",
        &tr.f22,
        DMatrix::identity(2),
        WPerm::zero(2),
        DMatrix::identity(2),
        im(&[vec![24, 0], vec![0, 24]]),
        im(&[vec![24, 0], vec![0, 24]]),
        WPerm::scalar(2, q(1, 24)),
        WPerm::identity(2),
        idem(2, &[]),
        idem(2, &[]),
    )?;
    same!("step 4 alpha_r", tr.f22.alpha_r, int(24));
    same!("U2", tr.u2, im(&[vec![1, 0], vec![-1, 2]]));
    same!("L3", tr.l3, im(&[vec![0, 0], vec![0, 1]]));
    Ok("all four sub-factorizations, blocks and scalars match".into())
}

// ------------------------------------------------------- criteria 3, 4, 5, 6

fn random_int_matrix(rng: &mut impl Rng, n: usize, deficient: bool) -> DMatrix<BigInt> {
    let mut rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    if deficient {
        let i = rng.gen_range(0..n);
        if n > 1 && rng.gen_bool(0.5) {
            let j = (i + rng.gen_range(1..n)) % n;
            rows[i] = rows[j].clone();
        } else {
            rows[i] = vec![0; n];
        }
    }
    im(&rows)
}

fn random_rational_matrix(rng: &mut impl Rng, n: usize, deficient: bool) -> DMatrix<BigRational> {
    let mut m = DMatrix::from_fn(n, n, |_, _| BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=6).into()));
    if deficient {
        let i = rng.gen_range(0..n);
        for c in 0..n {
            m[(i, c)] = BigRational::zero();
        }
    }
    m
}

fn random_poly_matrix(rng: &mut impl Rng, n: usize, deficient: bool) -> DMatrix<QPoly> {
    let mut m = DMatrix::from_fn(n, n, |_, _| {
        if rng.gen_bool(0.15) {
            return QPoly::zero();
        }
        let deg = rng.gen_range(0..=2);
        QPoly::from_i64s(&(0..=deg).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>())
    });
    if deficient && n > 1 {
        let (i, j) = (0, n - 1);
        let x = QPoly::x();
        for c in 0..n {
            m[(j, c)] = m[(i, c)].mul(&x);
        }
    }
    m
}

/// Seeded cases for the identity suite: 300 integer matrices of sizes 1, 2,
/// 4, 8, then 100 rational and 50 polynomial matrices of sizes up to 4.
struct Suite {
    ints: Vec<DMatrix<BigInt>>,
    rats: Vec<DMatrix<BigRational>>,
    polys: Vec<DMatrix<QPoly>>,
}

fn suite() -> Suite {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let ints = (0..300).map(|i| random_int_matrix(&mut rng, [1, 2, 4, 8][i % 4], i % 3 == 0)).collect();
    let rats = (0..100).map(|i| random_rational_matrix(&mut rng, [1, 2, 4][i % 3], i % 4 == 0)).collect();
    let polys = (0..50).map(|i| random_poly_matrix(&mut rng, [1, 2, 4][i % 3], i % 4 == 0)).collect();
    Suite { ints, rats, polys }
}

struct Factored<R: Domain> {
    a: DMatrix<R>,
    f: LsuFactors<R>,
}

fn factor_all<R: Domain>(ms: &[DMatrix<R>]) -> Result<Vec<Factored<R>>, String> {
    ms.iter()
        .map(|a| lsu_factor(a, &R::one()).map(|f| Factored { a: a.clone(), f }).map_err(|e| format!("{e} on {a:?}")))
        .collect()
}

struct FactoredSuite {
    ints: Vec<Factored<BigInt>>,
    rats: Vec<Factored<BigRational>>,
    polys: Vec<Factored<QPoly>>,
    elapsed: Duration,
}

fn factor_suite() -> Result<FactoredSuite, String> {
    let s = suite();
    let start = Instant::now();
    let ints = factor_all(&s.ints)?;
    let rats = factor_all(&s.rats)?;
    let polys = factor_all(&s.polys)?;
    Ok(FactoredSuite { ints, rats, polys, elapsed: start.elapsed() })
}

fn identities_hold<R: Domain>(c: &Factored<R>) -> Result<(), String> {
    let f = &c.f;
    let n = f.n();
    let id = DMatrix::<Frac<R>>::identity(n);
    let ar = Arith::default();
    let alsu = f.s.dense_mul(&ar, &f.l.to_frac()).unwrap().mul(&f.u.to_frac()).unwrap();
    let alsu = alsu.scale(&Frac::from_domain(f.alpha.clone()));
    ensure(alsu == c.a.to_frac(), || format!("alpha*L*S*U != A for {:?}", c.a))?;
    let lsm = f.shat.dense_mul(&ar, &f.l.to_frac()).unwrap().mul(&f.m_frac()).unwrap();
    ensure(lsm == id, || format!("L*Shat*M != I for {:?}", c.a))?;
    let wsu = f.shat.dense_mul(&ar, &f.w_frac()).unwrap().mul(&f.u.to_frac()).unwrap();
    ensure(wsu == id, || format!("W*Shat*U != I for {:?}", c.a))
}

fn identity_suite(fs: &FactoredSuite) -> Outcome {
    let deficient = fs.ints.iter().filter(|c| c.f.rank < c.f.n()).count();
    ensure(deficient >= 60, || format!("only {deficient} rank-deficient integer cases"))?;
    let start = Instant::now();
    fs.ints.iter().try_for_each(identities_hold)?;
    fs.rats.iter().try_for_each(identities_hold)?;
    fs.polys.iter().try_for_each(identities_hold)?;
    let total = fs.elapsed + start.elapsed();
    within(total, Duration::from_secs(120), "identity suite")?;
    Ok(format!(
        "{} integer ({deficient} rank-deficient), {} rational, {} polynomial cases; {total:?}",
        fs.ints.len(),
        fs.rats.len(),
        fs.polys.len(),
    ))
}

fn pinv_holds<R: Domain>(c: &Factored<R>) -> Result<bool, String> {
    let a = c.a.to_frac();
    let p = pseudo_inverse(&c.f).map_err(|e| e.to_string())?;
    ensure(a.mul(&p).unwrap().mul(&a).unwrap() == a, || format!("APA != A for {:?}", c.a))?;
    ensure(p.mul(&a).unwrap().mul(&p).unwrap() == p, || format!("PAP != P for {:?}", c.a))?;
    if c.f.rank == c.f.n() {
        let id = DMatrix::identity(c.f.n());
        ensure(a.mul(&p).unwrap() == id && p.mul(&a).unwrap() == id, || format!("AP or PA != I for {:?}", c.a))?;
        return Ok(true);
    }
    Ok(false)
}

fn pinv_suite(fs: &FactoredSuite) -> Outcome {
    let mut full = 0;
    for r in fs.ints.iter().map(pinv_holds).chain(fs.rats.iter().map(pinv_holds)).chain(fs.polys.iter().map(pinv_holds)) {
        full += usize::from(r?);
    }
    Ok(format!("APA = A and PAP = P on all cases; AP = PA = I on {full} full-rank cases"))
}

fn rank_matches<R: Domain>(c: &Factored<R>) -> Result<(), String> {
    let r = rank_bruteforce(&c.a);
    ensure(c.f.s.rank() == r && c.f.rank == r, || format!("rank {} vs brute force {r} for {:?}", c.f.rank, c.a))
}

fn oracle_suite(fs: &FactoredSuite) -> Outcome {
    fs.ints.iter().try_for_each(rank_matches)?;
    fs.rats.iter().try_for_each(rank_matches)?;
    fs.polys.iter().try_for_each(rank_matches)?;
    let mut dets = 0;
    for c in fs.ints.iter().filter(|c| c.f.rank == c.f.n()) {
        let d = det_bruteforce(&c.a).unwrap();
        ensure(c.f.alpha_r == d || c.f.alpha_r == d.neg(), || format!("|alpha_r| != |det| for {:?}", c.a))?;
        dets += 1;
    }
    Ok(format!("rank agrees on {} cases; |alpha_r| = |det| on {dets} full-rank integer cases", fs.ints.len() + fs.rats.len() + fs.polys.len()))
}

fn structure_holds<R: Domain>(c: &Factored<R>) -> Result<(), String> {
    let f = &c.f;
    ensure(f.l.is_lower_triangular() && f.l.has_nonzero_diagonal(), || format!("L not lower triangular for {:?}", c.a))?;
    ensure(f.u.is_upper_triangular() && f.u.has_nonzero_diagonal(), || format!("U not upper triangular for {:?}", c.a))?;
    // L and U are stored over R; M and W must divide out of the scaled storage exactly
    f.m().map_err(|e| format!("M not in R: {e}"))?;
    f.w().map_err(|e| format!("W not in R: {e}"))?;
    let ibar = f.s.row_idem().complement().to_dense::<R>();
    let jbar = f.s.col_idem().complement().to_dense::<R>();
    ensure(f.l.mul(&ibar).unwrap() == ibar, || format!("L*Ibar != Ibar for {:?}", c.a))?;
    ensure(jbar.mul(&f.u).unwrap() == jbar, || format!("Jbar*U != Jbar for {:?}", c.a))
}

fn structure_suite(fs: &FactoredSuite) -> Outcome {
    fs.ints.iter().try_for_each(structure_holds)?;
    fs.rats.iter().try_for_each(structure_holds)?;
    fs.polys.iter().try_for_each(structure_holds)?;
    Ok("triangular, entries in R, no inexact division, L*Ibar = Ibar and Jbar*U = Jbar on all cases".into())
}

// ---------------------------------------------------------------- criterion 7

fn minors() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut entries = 0;
    for i in 0..50 {
        let a = random_int_matrix(&mut rng, 4, i % 4 == 0);
        let f = lsu_factor(&a, &int(1)).map_err(|e| e.to_string())?;
        let ascending = all_minors(&a);
        let bordered = pivot_bordered_minors(&a, &f.pivot_order).map_err(|e| e.to_string())?;
        for v in f.l.data().iter().chain(f.u.data()).filter(|v| !v.is_zero()) {
            ensure(ascending.contains(v) || ascending.contains(&v.neg()), || format!("{v} is not a minor of {a:?}"))?;
            ensure(bordered.contains(v), || format!("{v} is not a bordered pivot minor of {a:?}"))?;
            entries += 1;
        }
        let chain = recover_minors(&f).map_err(|e| e.to_string())?;
        ensure(chain.len() == f.rank, || "minor chain length differs from rank".into())?;
        if let Some(last) = chain.last() {
            same!("chain end", last, &f.alpha_r);
        }
        // each chain element is the leading nested minor of the pivot block
        for (k, d) in chain.iter().enumerate() {
            let rows: Vec<usize> = f.pivot_order[..=k].iter().map(|p| p.0).collect();
            let cols: Vec<usize> = f.pivot_order[..=k].iter().map(|p| p.1).collect();
            let sub = DMatrix::from_fn(k + 1, k + 1, |i, j| a[(rows[i], cols[j])].clone());
            same!(format!("det_{}", k + 1), det_bruteforce(&sub).unwrap(), d.clone());
        }
    }

    let mut t1 = 0;
    while t1 < 500 {
        let n = rng.gen_range(2..=5);
        let a = random_int_matrix(&mut rng, n, false);
        let k = rng.gen_range(0..n);
        let rows = sample(&mut rng, n, k + 1).into_vec();
        let cols = sample(&mut rng, n, k + 1).into_vec();
        match surrounding_minor_at(&a, &rows[..k], &cols[..k], rows[k], cols[k]) {
            Ok(_) => t1 += 1,
            Err(lsu_core::Error::SingularLeadingBlock) => {}
            Err(e) => return Err(format!("two-path surrounding minor: {e}")),
        }
    }
    let mut t2 = 0;
    while t2 < 500 {
        let a = random_int_matrix(&mut rng, 4, false);
        let k = rng.gen_range(1..=2);
        if det_bruteforce(&a.block(0, 0, k, k)).unwrap().is_zero() {
            continue;
        }
        ensure(check_block_identity(&a, k).unwrap(), || format!("block identity fails for {a:?} at k = {k}"))?;
        t2 += 1;
    }
    Ok(format!("{entries} L/U entries are minors (sign-exact as bordered pivot minors); chains verified; {t1} two-path and {t2} block-identity instances agree"))
}

// ---------------------------------------------------------------- criterion 8

fn complexity() -> Outcome {
    let start = Instant::now();
    let sizes = [32usize, 64, 128, 256];
    let mut sb = Vec::new();
    let mut st = Vec::new();
    for &n in &sizes {
        let a = random_matrix::<BigInt>(n, 8);
        sb.push(measure(&a, MulStrategy::Schoolbook).map_err(|e| e.to_string())?.counts.mul_count as f64);
        st.push(measure(&a, MulStrategy::Strassen).map_err(|e| e.to_string())?.counts.mul_count as f64);
    }
    let elapsed = start.elapsed();
    let mut notes = Vec::new();
    for i in 0..3 {
        let n = sizes[i] as f64;
        let ratio = sb[i + 1] / sb[i];
        ensure(ratio <= 8.6, || format!("schoolbook t({})/t({}) = {ratio:.3} > 8.6", 2 * sizes[i], sizes[i]))?;
        ensure(sb[i] <= 9.0 * n * n * n, || format!("mul_count({}) = {} > 9n^3", sizes[i], sb[i]))?;
        notes.push(format!("n={}: t/n^3={:.2} ratio={ratio:.3}", sizes[i], sb[i] / (n * n * n)));
    }
    let (rs, rt) = (sb[3] / sb[2], st[3] / st[2]);
    ensure(rt < rs, || format!("Strassen ratio {rt:.3} not below schoolbook {rs:.3} at n = 128"))?;
    within(elapsed, Duration::from_secs(300), "complexity sweep")?;
    Ok(format!("{}; at n=128 Strassen ratio {rt:.3} < schoolbook {rs:.3}; {elapsed:?}", notes.join(", ")))
}

// ---------------------------------------------------------------- criterion 9

fn lsu(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_lsu"))
        .args(args)
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .expect("lsu binary runs")
        .code()
        .unwrap_or(-1)
}

/// Every value-carrying location in a bundle, as a JSON pointer with the
/// kind of element stored there.
#[derive(Clone, Copy)]
enum Slot {
    Elem,
    Frac,
    Count,
    /// Row or column of a pivot; moved to a line no other pivot uses.
    Line(&'static str),
}

fn slots(bundle: &Value) -> Vec<(String, Slot)> {
    let mut out = vec![
        ("/alpha".to_string(), Slot::Elem),
        ("/alpha_r".to_string(), Slot::Elem),
        ("/rank".to_string(), Slot::Count),
        ("/original_rows".to_string(), Slot::Count),
        ("/original_cols".to_string(), Slot::Count),
    ];
    for key in ["L", "U", "M", "W"] {
        let rows = bundle[key]["data"].as_array().unwrap();
        for (i, row) in rows.iter().enumerate() {
            for j in 0..row.as_array().unwrap().len() {
                out.push((format!("/{key}/data/{i}/{j}"), Slot::Elem));
            }
        }
    }
    for key in ["S", "Shat"] {
        for k in 0..bundle[key]["pivots"].as_array().unwrap().len() {
            out.push((format!("/{key}/pivots/{k}/value"), Slot::Frac));
            out.push((format!("/{key}/pivots/{k}/row"), Slot::Line("row")));
            out.push((format!("/{key}/pivots/{k}/col"), Slot::Line("col")));
        }
    }
    for k in 0..bundle["pivot_order"].as_array().unwrap().len() {
        out.push((format!("/pivot_order/{k}/0"), Slot::Count));
        out.push((format!("/pivot_order/{k}/1"), Slot::Count));
    }
    out
}

/// Replaces the value at `ptr` by a different valid value of the same kind,
/// or `None` when no such value exists (a pivot line of a full-rank `S`).
fn corrupt<R: Scalar>(bundle: &Value, ptr: &str, slot: Slot) -> Option<Value> {
    let mut b = bundle.clone();
    let n = bundle["n"].as_u64().unwrap();
    let free = |axis: &str| {
        let key = ptr.split('/').nth(1).unwrap();
        let used: Vec<u64> = bundle[key]["pivots"].as_array().unwrap().iter().map(|p| p[axis].as_u64().unwrap()).collect();
        (0..n).find(|x| !used.contains(x))
    };
    let v = b.pointer_mut(ptr).unwrap();
    *v = match slot {
        Slot::Elem => R::from_json(v).unwrap().add(&R::one()).to_json(),
        Slot::Frac => {
            let x = Frac::<R>::from_json(v).unwrap();
            let y = x.add(&Frac::from_domain(R::one()));
            if y.is_zero() { x.add(&Frac::from_domain(R::one().add(&R::one()))) } else { y }.to_json()
        }
        Slot::Count => Value::from(v.as_u64().unwrap() + 1),
        Slot::Line(axis) => Value::from(free(axis)?),
    };
    Some(b)
}

fn round_trip_ring<R: Scalar>(dir: &Path, gen: impl Fn(&mut ChaCha8Rng, usize) -> DMatrix<R>) -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9 + R::RING.name().len() as u64);
    let (mut inputs, mut corruptions) = (0, 0);
    for i in 0..20 {
        let n = [1, 2, 3, 4][i % 4];
        let a = gen(&mut rng, n);
        let mpath = dir.join(format!("{}-{i}.json", R::RING.name()));
        let fpath = dir.join(format!("{}-{i}-f.json", R::RING.name()));
        std::fs::write(&mpath, matrix_to_json(&a).to_string()).unwrap();
        let (m, fp) = (mpath.to_str().unwrap(), fpath.to_str().unwrap());
        ensure(lsu(&["factor", m, "--out", fp]) == 0, || format!("factor failed on {m}"))?;
        ensure(lsu(&["verify", m, fp]) == 0, || format!("verify rejected fresh factors of {m}"))?;
        inputs += 1;

        let bundle: Value = serde_json::from_str(&std::fs::read_to_string(&fpath).unwrap()).unwrap();
        bundle_from_json::<R>(&bundle).map_err(|e| e.to_string())?;
        let bad = dir.join(format!("{}-{i}-bad.json", R::RING.name()));
        let bp = bad.to_str().unwrap();
        for (ptr, slot) in slots(&bundle) {
            let Some(doc) = corrupt::<R>(&bundle, &ptr, slot) else { continue };
            std::fs::write(&bad, doc.to_string()).unwrap();
            let code = lsu(&["verify", m, bp]);
            ensure(code == 1, || format!("verify exited {code} after corrupting {ptr} of {m}"))?;
            corruptions += 1;
        }
    }
    Ok((inputs, corruptions))
}

fn cli_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let (i1, c1) = round_trip_ring::<BigInt>(dir.path(), |rng, n| {
        let d = rng.gen_bool(0.3);
        random_int_matrix(rng, n, d)
    })?;
    let (i2, c2) = round_trip_ring::<BigRational>(dir.path(), |rng, n| {
        let d = rng.gen_bool(0.3);
        random_rational_matrix(rng, n, d)
    })?;
    let (i3, c3) = round_trip_ring::<QPoly>(dir.path(), |rng, n| {
        let d = rng.gen_bool(0.3);
        random_poly_matrix(rng, n, d)
    })?;
    Ok(format!(
        "{} inputs verified; all {} single-entry corruptions rejected with exit 1; {:?}",
        i1 + i2 + i3,
        c1 + c2 + c3,
        start.elapsed()
    ))
}

// ---------------------------------------------------------------------------

fn run_criterion(k: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
    });
    match r {
        Ok(detail) => {
            println!("PASS criterion {k} ({name}): {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL criterion {k} ({name}): {detail}");
            false
        }
    }
}

#[test]
fn acceptance() {
    let mut ok = true;
    ok &= run_criterion(1, "golden example", golden);
    ok &= run_criterion(2, "intermediate steps", intermediates);
    let fs = factor_suite();
    let fs = &fs;
    let with_suite = |f: fn(&FactoredSuite) -> Outcome| {
        move || match fs {
            Ok(s) => f(s),
            Err(e) => Err(format!("suite could not be factored: {e}")),
        }
    };
    ok &= run_criterion(3, "identity suite", with_suite(identity_suite));
    ok &= run_criterion(4, "pseudoinverse", with_suite(pinv_suite));
    ok &= run_criterion(5, "rank and determinant oracles", with_suite(oracle_suite));
    ok &= run_criterion(6, "structure", with_suite(structure_suite));
    ok &= run_criterion(7, "minors", minors);
    ok &= run_criterion(8, "complexity", complexity);
    ok &= run_criterion(9, "CLI round trip", cli_round_trip);
    assert!(ok, "some acceptance criteria failed");
}
