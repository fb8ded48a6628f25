use thiserror::Error;

/// Errors raised by the numerics in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})"
    )]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("spectral function undefined at eigenvalue {eigenvalue}")]
    SpectralFunctionUndefined { eigenvalue: f64 },

    #[error(
        "matrix is not positive semi-definite (eigenvalue {eigenvalue:e} below -{threshold:e})"
    )]
    NotPositiveSemiDefinite { eigenvalue: f64, threshold: f64 },

    #[error("matrix is not positive definite (eigenvalue {eigenvalue:e} not above {threshold:e})")]
    NotPositiveDefinite { eigenvalue: f64, threshold: f64 },

    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("trace expected to be real has imaginary part {imaginary:e} (scale {scale:e})")]
    NonRealTrace { imaginary: f64, scale: f64 },

    #[error("invalid factor selection: {0}")]
    InvalidFactors(String),

    #[error("quadrature did not converge within {panels} panels (error estimate {error_estimate:e}, value {value})")]
    QuadratureNoConvergence {
        panels: usize,
        error_estimate: f64,
        value: f64,
    },

    #[error("instance file: {0}")]
    InstanceFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
