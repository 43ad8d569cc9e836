use thiserror::Error;

use crate::poset::IncPair;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation contains a directed cycle through element {0}")]
    Cycle(usize),

    #[error("element {element} out of range for universe of size {n}")]
    OutOfRange { element: usize, n: usize },

    #[error("pair ({}, {}) is not an incomparable pair", .0.x, .0.y)]
    Membership(IncPair),

    #[error("incomparable pair ({}, {}) has no color", .0.x, .0.y)]
    Totality(IncPair),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no valid coloring found with at most {0} colors")]
    BudgetExceeded(usize),

    #[error("invalid tree decomposition: {0}")]
    Decomposition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("coloring is not valid: color {color} has an alternating cycle of length {}", .cycle.len())]
    Validity { color: u32, cycle: Vec<IncPair> },

    #[error("cover graph is disconnected")]
    Connectivity,

    #[error("incomparable pair ({}, {}) is not covered by the combined coloring", .0.x, .0.y)]
    Coverage(IncPair),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
