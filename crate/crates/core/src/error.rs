//! Error type shared by all engine modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at offset {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("the minimal first syzygy module does not have rank {expected}: {detail}")]
    NonMinimalShape { expected: usize, detail: String },

    #[error(
        "b-function root search exhausted the range {lo}..={hi} in component {component}: \
         roots outside the range or multiplicity > 1"
    )]
    RangeExhausted { component: usize, lo: i64, hi: i64 },

    #[error("special fiber ideal is not principal: {0}")]
    NotPrincipal(String),

    #[error("validation failed: {0}")]
    ValidationFailed(String),

    #[error("timeout in {stage}")]
    Timeout { stage: String },
}

pub type Result<T> = std::result::Result<T, Error>;
