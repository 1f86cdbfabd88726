use thiserror::Error;

use crate::matrix::LinSolveError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("linear system has no solution (residual {residual:.3e}) while solving for {what}")]
    NoSolution { what: &'static str, residual: f64 },
    #[error("linear system for {what} is underdetermined (nullity {nullity})")]
    NonUnique { what: &'static str, nullity: usize },
    #[error("no non-zero invariant functional exists")]
    NoInvariantFunctional,
    #[error("invariant functional is not positive (min Gram eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("functional is not faithful (min Gram eigenvalue {min_eigenvalue:.3e})")]
    NotFaithful { min_eigenvalue: f64 },
    #[error("functional is not multiplicative (residual {residual:.3e})")]
    NotMultiplicative { residual: f64 },
    #[error("the map a⊗b ↦ Δ(b)(a⊗1) is not invertible (rank {rank} of {dim})")]
    SingularTransfer { rank: usize, dim: usize },
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("functional is not a state: {0}")]
    NotAState(String),
    #[error("Haar functional is not tracial (residual {residual:.3e})")]
    NotTracial { residual: f64 },
    #[error("algebra is not of compact type (no unit)")]
    NotCompactType,
    #[error("modular family has no positive solution: {0}")]
    NoPositiveSolution(String),
    #[error("Cayley ball exceeds the element cap {cap}")]
    BallTooLarge { cap: usize },
    #[error("averaging element is not symmetric")]
    NotSymmetric,
    #[error("multiplier function is unbounded or exceeds its declared bound")]
    Unbounded,
    #[error("rewriting relations are not confluent on {0}")]
    NonConfluentRelations(String),
    #[error("Haar system on the truncation is inconsistent: {0}")]
    HaarSystemInconsistent(String),
    #[error("Gram matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn from_solve(what: &'static str, e: LinSolveError) -> Self {
        match e {
            LinSolveError::Inconsistent { residual } => Error::NoSolution { what, residual },
            LinSolveError::Underdetermined { nullity } => Error::NonUnique { what, nullity },
        }
    }
}
