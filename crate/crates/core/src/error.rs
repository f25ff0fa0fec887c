use thiserror::Error;

/// Errors raised by the solver, the analysis layer and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("{what} did not converge within {iters} iterations")]
    NotConverged { what: &'static str, iters: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("stale certificate: fixed-point residual {residual:.3e} exceeds {tol:.3e}")]
    StaleCertificate { residual: f64, tol: f64 },

    #[error("step sizes [{lo}, {hi}] outside the admissible interval (0, {limit})")]
    StepOutOfRange { lo: f64, hi: f64, limit: f64 },

    #[error("restricted injectivity fails (sigma_m = {0:e}); use predict_rate_degenerate")]
    RestrictedInjectivityFails(f64),

    #[error("operator is injective on the model subspace; use predict_rate_quadratic")]
    NotDegenerate,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("config: {0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
