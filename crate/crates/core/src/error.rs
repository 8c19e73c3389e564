use thiserror::Error;

/// Errors raised anywhere in the factorization pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix dimension is odd: {rows}x{cols}")]
    OddDimension { rows: usize, cols: usize },
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error("blend scale must be nonzero")]
    ZeroScale,
    #[error("determinant argument must be nonzero")]
    ZeroDeterminant,
    #[error("invalid weighted permutation: {0}")]
    InvalidPermutation(String),
    #[error("matrix is not of full rank (rank {rank} < {n})")]
    NotFullRank { rank: usize, n: usize },
    #[error("system has no solution")]
    NoSolution,
    #[error("leading block is singular")]
    SingularLeadingBlock,
    #[error("oracle paths disagree: {0}")]
    OracleDisagreement(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
