use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violates an operation's precondition.
    Domain(String),
    /// Shift or index past the end of a word.
    OutOfRange { index: usize, len: usize },
    /// An exact count does not fit the count type.
    Overflow,
    /// A floor or comparison could not be decided before the precision cap.
    Undetermined { index: usize, bits: u32 },
    /// The closeness condition between the two construction bases fails.
    NotCloseEnough { lhs: f64, rhs: f64 },
    /// A bounded search ran off the edge of the parameter space.
    Boundary(String),
    /// A construction step found no admissible candidate.
    SearchFailed(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True when the failure is a precision limit rather than a bad input.
    pub fn is_undetermined(&self) -> bool {
        matches!(self, Error::Undetermined { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::OutOfRange { index, len } => {
                write!(f, "index {index} out of range for word of length {len}")
            }
            Error::Overflow => f.write_str("count overflow"),
            Error::Undetermined { index, bits } => write!(
                f,
                "boundary-undetermined at index {index} after refining to {bits} bits"
            ),
            Error::NotCloseEnough { lhs, rhs } => write!(
                f,
                "betas not close enough: beta1(beta1-beta0)/(beta0-1)^2 = {lhs:.6e} > (1-x0)/2 = {rhs:.6e}"
            ),
            Error::Boundary(msg) => write!(f, "parameter-space boundary: {msg}"),
            Error::SearchFailed(msg) => write!(f, "search failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
