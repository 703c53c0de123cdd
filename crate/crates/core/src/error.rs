use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence must contain at least one sample")]
    EmptySequence,

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("too many positive frequency slots specified ({slots} > {max})")]
    TooManySlots { slots: usize, max: usize },

    #[error("unsupported length {0}: must be a power of two")]
    UnsupportedLength(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed stream: {0}")]
    MalformedStream(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{path}: {msg}")]
    Format { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}
