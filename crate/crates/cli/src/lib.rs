//! Command-line front end: read a matrix, factor it, check a factor bundle,
//! and report rank, determinant, generalized inverse, solutions, nested
//! minors or operation-count benchmarks.

pub mod bench;

use std::fmt;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::Value;

use lsu_core::linalg::{det_signed, pseudo_inverse};
use lsu_core::lsu::{lsu_factor_any_with, recover_minors};
use lsu_core::matrix::{Arith, MulStrategy};
use lsu_core::oracle::{verify_bundle, Report};
use lsu_core::ring::{BigInt, BigRational, Domain, QPoly, RingKind, Scalar};
use lsu_core::serial::{bundle_from_json, bundle_to_json, frac_matrix_to_json, matrix_from_csv, matrix_from_json, ring_of};
use lsu_core::{DMatrix, LsuFactors};

#[derive(Parser, Debug, Clone)]
#[command(name = "lsu", version, about = "Fraction-free LSU factorization of matrices over exact domains")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Domain of the matrix entries; defaults to the ring named in the input document
    #[arg(long, global = true)]
    pub ring: Option<RingKind>,

    /// Matrix multiplication used inside the factorization
    #[arg(long = "mul", global = true)]
    pub mul: Option<MulStrategy>,

    /// Seed for generated matrices
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Check the computed factors against the input and fail with exit code 1 on any mismatch
    #[arg(long, global = true)]
    pub verify: bool,

    /// Write S and Shat as dense matrices
    #[arg(long = "dense-s", global = true)]
    pub dense_s: bool,

    /// Output file (default: standard output)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Factor a matrix and write the factor bundle
    Factor { matrix: PathBuf },
    /// Check a factor bundle against its matrix
    Verify { matrix: PathBuf, factors: PathBuf },
    /// Rank of a matrix
    Rank { matrix: PathBuf },
    /// Determinant of a nonsingular square matrix
    Det { matrix: PathBuf },
    /// Generalized inverse P with APA = A and PAP = P
    Pinv { matrix: PathBuf },
    /// Solve A·x = b exactly
    Solve { matrix: PathBuf, rhs: PathBuf },
    /// Nested minors det_1, ..., det_r along the pivot order
    Minors { matrix: PathBuf },
    /// Operation counts for random matrices of size 2, 4, ..., 2^max_exp
    Bench {
        #[arg(long = "max-exp", default_value_t = 7)]
        max_exp: u32,
    },
}

/// What went wrong, and the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Verify(String),
    Format(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Format(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Verify(m) => write!(f, "verification failed: {m}"),
            CliError::Format(m) => write!(f, "{m}"),
            CliError::Precondition(m) => write!(f, "{m}"),
        }
    }
}

impl From<lsu_core::Error> for CliError {
    fn from(e: lsu_core::Error) -> Self {
        match e {
            lsu_core::Error::Parse(m) => CliError::Format(m),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs one command and returns the process exit code. Diagnostics go to
/// standard error.
pub fn run(config: &CliConfig) -> i32 {
    match execute(config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("lsu: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (program name first) and runs them. Usage errors exit 2.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CliConfig::try_parse_from(args) {
        Ok(c) => run(&c),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}

fn execute(config: &CliConfig) -> CliResult<()> {
    if let Command::Bench { max_exp } = config.command {
        let ring = config.ring.unwrap_or(RingKind::Int);
        let strategies = match config.mul {
            Some(s) => vec![s],
            None => vec![MulStrategy::Schoolbook, MulStrategy::Strassen],
        };
        let rows = match ring {
            RingKind::Int => bench::run::<BigInt>(max_exp, &strategies, config.seed)?,
            RingKind::Rational => bench::run::<BigRational>(max_exp, &strategies, config.seed)?,
            RingKind::PolyQ => bench::run::<QPoly>(max_exp, &strategies, config.seed)?,
        };
        return emit(config, &bench::to_csv(&rows));
    }

    let main_input = match &config.command {
        Command::Factor { matrix }
        | Command::Verify { matrix, .. }
        | Command::Rank { matrix }
        | Command::Det { matrix }
        | Command::Pinv { matrix }
        | Command::Solve { matrix, .. }
        | Command::Minors { matrix } => matrix,
        Command::Bench { .. } => unreachable!("handled above"),
    };
    let doc = Document::load(main_input)?;
    let ring = match (config.ring, doc.ring()?) {
        (Some(r), _) => r,
        (None, Some(r)) => r,
        (None, None) => RingKind::Int,
    };
    let text = match ring {
        RingKind::Int => execute_in::<BigInt>(config, &doc)?,
        RingKind::Rational => execute_in::<BigRational>(config, &doc)?,
        RingKind::PolyQ => execute_in::<QPoly>(config, &doc)?,
    };
    emit(config, &text)
}

fn emit(config: &CliConfig, text: &str) -> CliResult<()> {
    match &config.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Format(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Format(format!("cannot write output: {e}")))
        }
    }
}

/// A parsed input file: JSON document or integer CSV.
enum Document {
    Json(Value),
    Csv(DMatrix<BigInt>),
}

impl Document {
    fn load(path: &Path) -> CliResult<Self> {
        let text = read_text(path)?;
        if text.trim_start().starts_with('{') {
            serde_json::from_str(&text)
                .map(Document::Json)
                .map_err(|e| CliError::Format(format!("{}: invalid JSON: {e}", path.display())))
        } else {
            matrix_from_csv(&text)
                .map(Document::Csv)
                .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
        }
    }

    fn ring(&self) -> CliResult<Option<RingKind>> {
        match self {
            Document::Json(v) => Ok(Some(ring_of(v)?)),
            Document::Csv(_) => Ok(None),
        }
    }

    fn json(&self, what: &str) -> CliResult<&Value> {
        match self {
            Document::Json(v) => Ok(v),
            Document::Csv(_) => Err(CliError::Format(format!("{what} must be a JSON document"))),
        }
    }

    fn matrix<R: Scalar>(&self) -> CliResult<DMatrix<R>> {
        match self {
            Document::Json(v) => Ok(matrix_from_json(v)?),
            Document::Csv(m) => Ok(m.try_map(|x| R::from_json(&Value::String(x.to_string())))?),
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Format(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Format(format!("cannot read {}: {e}", path.display())))
}

fn factor<R: Scalar>(config: &CliConfig, a: &DMatrix<R>) -> CliResult<(LsuFactors<R>, (usize, usize))> {
    let ar = Arith::plain(config.mul.unwrap_or_default());
    let (f, dims) = lsu_factor_any_with(&ar, a)?;
    if config.verify {
        require_pass(&verify_bundle(a, &f))?;
    }
    Ok((f, dims))
}

fn require_pass(report: &Report) -> CliResult<()> {
    let failed: Vec<String> = report.failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(failed.join("; ")))
    }
}

fn render(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn execute_in<R: Scalar>(config: &CliConfig, doc: &Document) -> CliResult<String> {
    let a = doc.matrix::<R>()?;
    match &config.command {
        Command::Factor { .. } => {
            let (f, dims) = factor(config, &a)?;
            Ok(render(&bundle_to_json(&f, dims, config.dense_s)))
        }
        Command::Verify { factors, .. } => {
            let bundle = Document::load(factors)?;
            let (f, dims) = bundle_from_json::<R>(bundle.json("factor bundle")?)?;
            let mut report = verify_bundle(&a, &f);
            report.push(
                "original_dims",
                dims == a.dims(),
                format!("bundle records {}x{}, matrix is {}x{}", dims.0, dims.1, a.rows(), a.cols()),
            );
            let text = render(&report.to_json());
            if let Err(e) = require_pass(&report) {
                // the report is still written so the failing checks can be inspected
                emit(config, &text)?;
                return Err(e);
            }
            Ok(text)
        }
        Command::Rank { .. } => {
            let (f, _) = factor(config, &a)?;
            Ok(format!("{}\n", f.rank))
        }
        Command::Det { .. } => {
            if !a.is_square() {
                return Err(CliError::Precondition(format!("det needs a square matrix, got {}x{}", a.rows(), a.cols())));
            }
            let (f, _) = factor(config, &pad_with_identity(&a))?;
            if f.rank < f.n() {
                return Err(CliError::Precondition(format!("matrix is singular (rank {})", f.rank.min(a.rows()))));
            }
            Ok(format!("{}\n", det_signed(&f)?))
        }
        Command::Pinv { .. } => {
            let (f, _) = factor(config, &a)?;
            let p = pseudo_inverse(&f)?.block(0, 0, a.cols(), a.rows());
            Ok(render(&frac_matrix_to_json(&p)))
        }
        Command::Solve { rhs, .. } => {
            let b = Document::load(rhs)?.matrix::<R>()?;
            if b.rows() != a.rows() {
                return Err(CliError::Precondition(format!(
                    "right-hand side has {} rows, matrix has {}",
                    b.rows(),
                    a.rows()
                )));
            }
            let (f, _) = factor(config, &a)?;
            let x = pseudo_inverse(&f)?.block(0, 0, a.cols(), a.rows()).mul(&b.to_frac())?;
            if a.to_frac().mul(&x)? != b.to_frac() {
                return Err(CliError::Precondition("system has no solution".into()));
            }
            Ok(render(&frac_matrix_to_json(&x)))
        }
        Command::Minors { .. } => {
            let (f, _) = factor(config, &a)?;
            let chain: Vec<Value> = recover_minors(&f)?.iter().map(|m| m.to_json()).collect();
            Ok(render(&Value::Array(chain)))
        }
        Command::Bench { .. } => unreachable!("handled by the caller"),
    }
}

/// `A ⊕ I` up to the next power of two, which keeps the determinant.
fn pad_with_identity<R: Domain>(a: &DMatrix<R>) -> DMatrix<R> {
    let n = a.rows();
    let p = n.max(1).next_power_of_two();
    DMatrix::from_fn(p, p, |i, j| {
        if i < n && j < n {
            a[(i, j)].clone()
        } else if i == j {
            R::one()
        } else {
            R::zero()
        }
    })
}
