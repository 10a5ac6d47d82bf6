use std::fmt;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidArgument(String),
    /// An integer quantity does not fit in 64 bits.
    Overflow(String),
    /// A (rows, j, j') combination with no defined Wigner coefficient.
    InvalidCombination(String),
    /// The request exceeds the validation-scale bounds of a dense code path.
    ScaleExceeded(String),
    /// A state vector that should be normalized is not.
    Unnormalized { norm: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Overflow(msg) => write!(f, "integer overflow: {msg}"),
            Error::InvalidCombination(msg) => write!(f, "invalid coefficient combination: {msg}"),
            Error::ScaleExceeded(msg) => write!(f, "scale bound exceeded: {msg}"),
            Error::Unnormalized { norm } => {
                write!(f, "state is not normalized (norm = {norm:.17e})")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
