//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not hermitian: relative deviation {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not positive definite: min/max eigenvalue ratio {ratio:.3e} at gate {gate:.3e}")]
    NotPositiveDefinite { ratio: f64, gate: f64 },

    #[error("iterative solver failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("norm not supported here: {0}")]
    UnsupportedNorm(String),

    #[error(
        "grid test and exact spectral criterion disagree (grid {grid}, exact {exact}, max deviation {max_deviation:.3e}); grid or tolerance too coarse"
    )]
    CriterionMismatch {
        grid: bool,
        exact: bool,
        max_deviation: f64,
    },

    #[error("defining conditions not met at tol {tol:.3e}: residuals {residuals:?}")]
    VerificationFailure { residuals: Vec<f64>, tol: f64 },

    #[error("projectors inconsistent with the matrix: {0}")]
    InconsistentProjectors(String),

    #[error("core factor numerically singular (condition {cond:.3e}) although ranks matched")]
    SingularCore { cond: f64 },

    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error("witness construction failed on a verified instance: {0}")]
    WitnessFailure(String),

    #[error("matrix numerically defective (eigenvector condition {condition:.3e}); witness unavailable")]
    Defective { condition: f64 },

    #[error("leading block not invariant: residual {residual:.3e} exceeds {tol:.3e}")]
    NotInvariant { residual: f64, tol: f64 },

    #[error("oracle eliminator degenerated: {0}")]
    NoSolution(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
