use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain where the function is defined.
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: x has {x} values, y has {y}")]
    LengthMismatch { x: usize, y: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("non-finite or out-of-range value {value} at index {index}")]
    BadValue { index: usize, value: f64 },

    #[error("quadrature did not converge on [{a}, {b}]: estimate {estimate}, error {error}")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
    },

    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("no heavy-tail evidence: gamma estimate {0} is not positive")]
    NoHeavyTail(f64),

    #[error("empirical characteristic function is not positive at t = {0}")]
    NonPositiveCf(f64),

    #[error("too few exceedances at x = {x}: {count} (need {needed})")]
    FewExceedances { x: f64, count: usize, needed: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
