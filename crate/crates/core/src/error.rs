use thiserror::Error;

use crate::abelian::ParikhSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("range error: window [{start}, {start}+{len}) exceeds buffer of length {buffer_len}")]
    Range {
        start: usize,
        len: usize,
        buffer_len: usize,
    },

    #[error("buffer limit exceeded: requested {requested} symbols, limit is {limit}")]
    BufferLimit { requested: usize, limit: usize },

    /// The scan cap was reached before the distinct-factor target.
    #[error("saturation failed at n={n}: {found} of {target} factors after {scanned} windows")]
    Saturation {
        n: usize,
        found: usize,
        target: usize,
        scanned: usize,
        partial: Box<ParikhSet>,
    },

    #[error("not a factor of the Tribonacci word: {0}")]
    NotAFactor(String),

    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("invalid Zeckendorf representation: {0}")]
    InvalidRepresentation(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("verification failed: {0}")]
    VerificationFailure(String),
}

impl Error {
    pub fn is_saturation(&self) -> bool {
        matches!(self, Error::Saturation { .. } | Error::BufferLimit { .. })
    }
}
