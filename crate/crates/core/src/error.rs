use thiserror::Error;

/// Errors produced by the numerical kernels and the physics layers on top.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("input lies on a pole of the response function: {0}")]
    PoleInput(String),

    #[error("argument outside the valid domain: {0}")]
    Domain(String),

    #[error("quadrature did not converge: estimated error {err:.3e} exceeds target {target:.3e}")]
    Quadrature { err: f64, target: f64 },

    #[error("root bracket invalid: f({lo}) and f({hi}) have the same sign")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("spectral curve does not cover the requested range: {0}")]
    Coverage(String),

    #[error("least-squares system ill-conditioned: condition number {0:.3e}")]
    IllConditioned(f64),

    #[error("Matsubara sum truncation error above tolerance: {0:.3e}")]
    Truncation(f64),
}

pub type Result<T> = std::result::Result<T, CoreError>;
