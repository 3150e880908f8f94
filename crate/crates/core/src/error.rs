use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant except [`Error::Internal`] is a caller mistake; the CLI maps
/// those to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("coefficient rings differ: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("truncations differ: {left} vs {right}")]
    TruncMismatch { left: usize, right: usize },

    #[error("the number of colors must be at least 1")]
    ZeroColors,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("residue {r} is outside 0 < r < {p}; congruences are only lifted for residues strictly inside (0, p)")]
    ResidueOutOfRange { p: u64, r: u64 },

    #[error("bounds exceeded: {0}")]
    Bounds(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
