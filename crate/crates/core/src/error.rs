use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("point {x} lies outside the representable range [-{limit}, {limit}]")]
    OutOfRange { x: f64, limit: f64 },

    #[error("zero-crossing; retry with --epsilon (min |f| = {min_abs:.3e} is below {tol:.3e})")]
    ZeroCrossing { min_abs: f64, tol: f64 },

    #[error("grid too coarse: phase increment {increment:.3} rad between samples {index} and {next}")]
    PhaseJump {
        index: usize,
        next: usize,
        increment: f64,
    },

    #[error("{what} residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    Residual {
        what: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("{what} mass {mass:.6} outside [{lo}, {hi}]")]
    Mass {
        what: &'static str,
        mass: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{what}: {value:.6e} exceeds bound {bound:.6e}")]
    BoundViolated {
        what: &'static str,
        value: f64,
        bound: f64,
    },

    #[error("overflow: {0}")]
    Overflow(String),
}

impl Error {
    /// True for failures of the mathematics (residual, positivity, mass, ...)
    /// as opposed to malformed input.
    pub fn is_numerical_failure(&self) -> bool {
        matches!(
            self,
            Error::ZeroCrossing { .. }
                | Error::PhaseJump { .. }
                | Error::Residual { .. }
                | Error::NotPositiveDefinite(_)
                | Error::Mass { .. }
                | Error::BoundViolated { .. }
                | Error::Overflow(_)
        )
    }
}
