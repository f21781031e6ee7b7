//! Error type shared by every module.

use std::fmt;
use std::io;

/// Errors produced by the numerical routines.
#[derive(Debug)]
pub enum Error {
    /// A precondition on the inputs was violated (dimensions, parameter
    /// ranges, malformed tables).
    InvalidInput(String),
    /// Evaluation was requested at, or within guard distance of, a pole.
    Pole(String),
    /// A quantity left the representable range of the scalar type.
    Range(String),
    /// Exact integer arithmetic would overflow 128-bit words.
    Capacity {
        /// Degree that was requested.
        requested: usize,
        /// Largest degree the exact route supports.
        max: usize,
    },
    /// Linear system singular to working precision.
    Singular(String),
    /// An iteration exhausted its budget before meeting its tolerance.
    NonConvergence(String),
    /// Newton refinement left the solution branch: the sign pattern of the
    /// algebraic system or the descending order of the zeros broke.
    WrongBranch(String),
    /// Adaptive step control collapsed below the minimum step size.
    Stiffness(String),
    /// An internal consistency check failed; indicates a bug, not bad input.
    Internal(String),
    /// Propagated I/O failure.
    Io(io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Pole(msg) => write!(f, "pole: {msg}"),
            Error::Range(msg) => write!(f, "out of range: {msg}"),
            Error::Capacity { requested, max } => write!(
                f,
                "exact arithmetic capacity exceeded: degree {requested} requested, \
                 largest supported degree is {max}"
            ),
            Error::Singular(msg) => write!(f, "singular matrix: {msg}"),
            Error::NonConvergence(msg) => write!(f, "no convergence: {msg}"),
            Error::WrongBranch(msg) => write!(f, "wrong branch: {msg}"),
            Error::Stiffness(msg) => write!(f, "step size collapse: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(err: io::Error) -> Self {
        Error::Io(err)
    }
}
