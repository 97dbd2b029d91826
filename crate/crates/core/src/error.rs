use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside domain: {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("accuracy target missed ({what}); best estimate {estimate}, error {error}")]
    Accuracy {
        what: &'static str,
        estimate: f64,
        error: f64,
    },

    #[error("target {target} not bracketed by [{lo}, {hi}]")]
    Bracket { target: f64, lo: f64, hi: f64 },

    #[error("function is flat on [{lo}, {hi}]")]
    Monotonicity { lo: f64, hi: f64 },

    #[error("only {usable} usable grid points, need at least {needed}")]
    InsufficientData { usable: usize, needed: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("generalized inverse vanished at t = {at}")]
    Singularity { at: f64 },

    #[error("inverse bracket fell below 1e-300; last bracket [{lo}, {hi}]")]
    Underflow { lo: f64, hi: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("indeterminate index combination: {0}")]
    Indeterminate(String),
}
