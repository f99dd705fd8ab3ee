use thiserror::Error;

/// Everything that can go wrong in the library. Most variants are
/// certification failures: they signal that an exact identity which must
/// hold did not, which is always a bug either upstream or in a formula.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} of size {size} exceeds the configured budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        size: u128,
        budget: u128,
    },

    #[error("cyclotomic value is not a rational integer (coordinate {index} is nonzero)")]
    NotRational { index: usize },

    #[error("power-series coefficient {index} is not integral")]
    NonIntegralCoefficient { index: usize },

    #[error("degree mismatch for k={k}, p={p}: expected {expected}, got {got}")]
    DegreeMismatch {
        k: u32,
        p: u64,
        expected: usize,
        got: usize,
    },

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("check `{check}` failed: {detail}")]
    CheckFailed { check: String, detail: String },

    #[error("moment mismatch for k={k}, p={p}, n={n}: predicted {predicted}, enumerated {enumerated}")]
    Mismatch {
        k: u32,
        p: u64,
        n: u32,
        predicted: String,
        enumerated: String,
    },

    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),

    #[error("Serre recipe disagrees with the closed-form gamma factor: {0}")]
    RecipeMismatch(String),

    #[error("cohomology ranks still change at degree bound {bound}")]
    StabilizationFailure { bound: usize },

    #[error("filtration jumps disagree with the Hodge numbers: {0}")]
    MismatchWithTheorem(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureDiverged(String),

    #[error("Dirichlet truncation too small: tail estimate {estimate:e} exceeds {tolerance:e}")]
    TruncationTooSmall { estimate: f64, tolerance: f64 },

    #[error("no Euler factor available at p={0}")]
    MissingEulerFactor(u64),
}

impl Error {
    pub(crate) fn check(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::CheckFailed {
            check: check.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
