use alloc::string::String;
use core::fmt;

/// Errors raised by the algorithms in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the documented domain.
    Parameter(String),
    /// The input is larger than an exhaustive routine accepts.
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    /// Bisection could not find an interval containing the target.
    Bracketing { target: f64, limit: f64 },
    /// A precondition on the input graph does not hold.
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::TooLarge { what, size, cap } => {
                write!(f, "{what}: size {size} exceeds the cap of {cap}")
            }
            Error::Bracketing { target, limit } => write!(
                f,
                "no bracketing interval for target {target} with lambda up to {limit}"
            ),
            Error::Precondition(msg) => write!(f, "precondition failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
