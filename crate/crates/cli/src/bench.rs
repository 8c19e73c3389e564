//! Operation counts of the factorization on seeded random matrices.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lsu_core::lsu::lsu_factor_with;
use lsu_core::matrix::{Arith, MulStrategy, OpCounter, OpCounts};
use lsu_core::ring::{Domain, Ring};
use lsu_core::{DMatrix, Result};

pub const CSV_HEADER: &str = "n,strategy,mul_count,add_count,div_count,wall_ms";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub strategy: MulStrategy,
    pub counts: OpCounts,
    pub wall_ms: f64,
}

/// `n×n` matrix with entries uniform in [-9, 9]. The same seed and size
/// always give the same matrix.
pub fn random_matrix<R: Ring>(n: usize, seed: u64) -> DMatrix<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32));
    DMatrix::from_fn(n, n, |_, _| R::from_i64(rng.gen_range(-9..=9)))
}

/// Factors one matrix and returns the ring operations it took.
pub fn measure<R: Domain>(a: &DMatrix<R>, strategy: MulStrategy) -> Result<BenchRow> {
    let counter = OpCounter::new();
    let start = Instant::now();
    lsu_factor_with(&Arith::counted(strategy, &counter), a, &R::one())?;
    Ok(BenchRow { n: a.rows(), strategy, counts: counter.counts(), wall_ms: start.elapsed().as_secs_f64() * 1e3 })
}

/// Sizes 2, 4, ..., 2^max_exp, each under every strategy given.
pub fn run<R: Domain>(max_exp: u32, strategies: &[MulStrategy], seed: u64) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for p in 1..=max_exp {
        let a = random_matrix::<R>(1 << p, seed);
        for &s in strategies {
            rows.push(measure(&a, s)?);
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{:.3}\n",
            r.n, r.strategy, r.counts.mul_count, r.counts.add_count, r.counts.div_count, r.wall_ms
        ));
    }
    s
}
