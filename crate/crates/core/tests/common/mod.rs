#![allow(dead_code)]

use lsu_core::ring::{BigInt, BigRational, Frac, QPoly, Ring};
use lsu_core::DMatrix;
use rand::Rng;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn q(n: i64, d: i64) -> Frac<BigInt> {
    Frac::new(BigInt::from(n), BigInt::from(d)).unwrap()
}

pub fn im(rows: &[Vec<i64>]) -> DMatrix<BigInt> {
    DMatrix::from_i64(rows).unwrap()
}

pub fn example() -> DMatrix<BigInt> {
    im(&[vec![0, 0, 3, 0], vec![2, 0, 1, 0], vec![0, 0, 0, 0], vec![1, 4, 0, 1]])
}

/// Random integer matrix with entries in [-9, 9]. A third of the draws are
/// forced rank deficient by copying a row, zeroing a row, or sparsifying.
pub fn random_int_matrix(rng: &mut impl Rng, n: usize) -> DMatrix<BigInt> {
    let mut rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    match rng.gen_range(0..6) {
        0 if n > 1 => {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            rows[a] = rows[b].clone();
            if a == b {
                rows[a] = vec![0; n];
            }
        }
        1 => rows[rng.gen_range(0..n)] = vec![0; n],
        2 => {
            for r in rows.iter_mut() {
                for v in r.iter_mut() {
                    if rng.gen_bool(0.7) {
                        *v = 0;
                    }
                }
            }
        }
        _ => {}
    }
    im(&rows)
}

pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=5);
    BigRational::new(n.into(), d.into())
}

pub fn random_rational_matrix(rng: &mut impl Rng, n: usize) -> DMatrix<BigRational> {
    let mut m = DMatrix::from_fn(n, n, |_, _| random_rational(rng));
    if n > 1 && rng.gen_bool(0.3) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        for j in 0..n {
            let v = m[(b, j)].clone();
            m[(a, j)] = v;
        }
    }
    m
}

pub fn random_poly(rng: &mut impl Rng, max_deg: usize) -> QPoly {
    if rng.gen_bool(0.2) {
        return QPoly::zero();
    }
    let deg = rng.gen_range(0..=max_deg);
    QPoly::from_i64s(&(0..=deg).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>())
}

pub fn random_poly_matrix(rng: &mut impl Rng, n: usize) -> DMatrix<QPoly> {
    DMatrix::from_fn(n, n, |_, _| random_poly(rng, 2))
}

/// Random weighted permutation with rational weights; `unit` forces all
/// values to 1.
pub fn random_wperm(rng: &mut impl Rng, n: usize, unit: bool) -> lsu_core::WPerm<Frac<BigInt>> {
    use rand::seq::SliceRandom;
    let mut cols: Vec<usize> = (0..n).collect();
    cols.shuffle(rng);
    let keep = rng.gen_range(0.0..=1.0);
    let active: Vec<usize> = (0..n).filter(|_| rng.gen_bool(keep)).collect();
    let pivots: Vec<_> = active
        .into_iter()
        .map(|r| {
            let v = if unit {
                q(1, 1)
            } else {
                let num = loop {
                    let v = rng.gen_range(-9..=9);
                    if v != 0 {
                        break v;
                    }
                };
                q(num, rng.gen_range(1..=9))
            };
            (r, cols[r], v)
        })
        .collect();
    lsu_core::WPerm::from_pivots(n, pivots).unwrap()
}
