use thiserror::Error;

/// Errors raised by the library. Numerical non-convergence of fits is not an
/// error; it is reported through [`crate::estimation::FitResult::converged`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GwlError {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NotBracketed {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("empty sample")]
    EmptySample,

    #[error("non-positive or non-finite observation {value} at index {index}")]
    BadObservation { index: usize, value: f64 },

    #[error("quadrature did not reach tolerance: estimate {estimate}, error {error}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("covariance matrix unavailable")]
    NoCovariance,

    #[error("{0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, GwlError>;
