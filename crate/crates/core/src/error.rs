use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a supported prime")]
    BadModulus(u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degree out of range: {0}")]
    DegreeRange(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("Gale transform undefined: {0}")]
    GaleUndefined(String),

    #[error("generation failed after {attempts} attempts: {reason}")]
    Generation { attempts: usize, reason: String },

    #[error("insufficient degree window: {0}")]
    Window(String),

    #[error("mode error: {0}")]
    Mode(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
