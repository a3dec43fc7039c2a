use thiserror::Error;

/// Errors raised by the approximation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported operation: {0}")]
    UnsupportedOperation(String),

    #[error("support measurement failed: |g| >= {threshold:e} at t = {at}")]
    MeasurementFailed { threshold: f64, at: f64 },

    #[error("polynomial degree {degree} exceeds the order of the basis (max {max})")]
    OrderExceeded { degree: u32, max: u32 },

    #[error("sampling functional {index} needs the derivative of f")]
    MissingDerivative { index: usize },

    #[error("degenerate basis at omega = {omega}: smallest Gram eigenvalue {lambda_min:e}")]
    DegenerateBasis { omega: f64, lambda_min: f64 },

    #[error("inconsistent kernel at omega = {omega}: value {value:e} is negative")]
    Inconsistency { omega: f64, value: f64 },

    #[error("asymptotic fit failed: relative residual {residual:e}")]
    FitFailed { residual: f64 },

    #[error("integrand is not integrable: {0}")]
    NonIntegrable(String),

    #[error("tabulation radius {radius} too small: tail bound {tail:e}")]
    RadiusTooSmall { radius: f64, tail: f64 },

    #[error("approximation domain [{lo}, {hi}] does not cover the test function support (radius {radius})")]
    DomainCoverage { lo: f64, hi: f64, radius: f64 },

    #[error("test function {0} has no spectrum evaluator")]
    MissingSpectrum(String),

    #[error("experiment invalid: {0}")]
    ExperimentInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
