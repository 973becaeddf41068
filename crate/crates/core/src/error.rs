use thiserror::Error;

/// Errors raised by the numerical routines, bound formulas and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root is not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NotBracketed {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("{what} did not converge (best estimate {estimate}, error estimate {error_estimate})")]
    Convergence {
        what: &'static str,
        estimate: f64,
        error_estimate: f64,
    },

    #[error("iteration limit of {iterations} reached (last bracket {bracket:e} nats)")]
    IterationLimit { iterations: usize, bracket: f64 },

    #[error("infeasible constraint set: {0}")]
    Infeasible(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite, got {x}")))
    }
}
