use thiserror::Error;

use crate::arith::Ratio;

/// Domain and usage errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sieve limit must be in 2..=4294967295 (got {0})")]
    SieveLimit(u64),
    #[error("argument must be a positive integer")]
    ZeroArgument,
    #[error("Jacobi symbol denominator must be odd and positive (got {0})")]
    JacobiDenominator(u64),
    #[error("d must be negative (got {0})")]
    NonNegativeDiscriminant(i64),
    #[error("d must be squarefree (got {0})")]
    NotSquarefree(i64),
    #[error("|d| must be at least 7 (got {0})")]
    DiscriminantTooSmall(i64),
    #[error("invalid character table: {0}")]
    CharacterTable(&'static str),
    #[error("moduli must be coprime (got {0} and {1})")]
    NonCoprimeModuli(u64, u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("shift r={r} is not admissible for modulus {q}")]
    InadmissibleShift { r: u32, q: u64 },
    #[error("exponents must satisfy 0 < c < c' < 1/4 (got c={c}, c'={c_prime})")]
    ExponentOrder { c: Ratio, c_prime: Ratio },
    #[error("invalid rational literal '{0}'")]
    BadRational(String),
    #[error("invalid range {lo}..{hi}")]
    BadRange { lo: u64, hi: u64 },
    #[error("growth fit needs at least two usable records with distinct |d| (got {0})")]
    TooFewPoints(usize),
    #[error("worker pool: {0}")]
    WorkerPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
