use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid bracket [{lo}, {hi}]: Z has the same sign at both ends")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("unresolved interval [{lo}, {hi}]: refinement did not converge")]
    UnresolvedInterval { lo: f64, hi: f64 },

    #[error("completeness check failed after {passes} passes (residual {residual})")]
    ExhaustedRefinement { passes: u32, residual: f64 },

    #[error("zero table is incomplete over (0, {needed}]")]
    IncompleteTable { needed: f64 },

    #[error("step too coarse: uncertainty {uncertainty} exceeds {limit}")]
    StepTooCoarse { uncertainty: f64, limit: f64 },

    #[error("grid is not strictly increasing")]
    DegenerateGrid,

    #[error("{name} = {value} outside the admissible window [{lo}, {hi}]")]
    OutOfWindow {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("ordinates not strictly increasing at line {line}")]
    NonMonotone { line: usize },

    #[error("checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    ChecksumMismatch { stored: u64, computed: u64 },

    #[error("malformed cache file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// True for failures caused by files or their contents rather than by
    /// the caller's arguments.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            Error::Io(_)
                | Error::Parse { .. }
                | Error::NonMonotone { .. }
                | Error::ChecksumMismatch { .. }
                | Error::Format(_)
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
