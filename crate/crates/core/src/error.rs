use thiserror::Error;

/// Errors raised by the numerical engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CasimirError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("value {xi} eV lies outside the tabulated range [{min}, {max}] eV")]
    OutOfTable { xi: f64, min: f64, max: f64 },

    #[error("table load error at line {line}: {msg}")]
    Load { line: usize, msg: String },

    #[error("Matsubara sum not converged after {terms} terms (tail estimate {tail:e})")]
    MatsubaraNotConverged { terms: usize, tail: f64 },

    #[error("quadrature not converged (error estimate {estimate:e}, tolerance {tolerance:e})")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("round-trip spectral radius {radius} >= 1 at m = {m}, xi = {xi} eV")]
    SpectralRadius { radius: f64, m: usize, xi: f64 },

    #[error("ill-conditioned fit (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("optimizer did not converge: {0}")]
    Optimizer(String),
}

pub type Result<T> = std::result::Result<T, CasimirError>;
