use thiserror::Error;

/// Errors raised by construction, sampling, oracle and streaming routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("budget exceeded: {what} needs {needed}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("too-small-n: no ell >= 1 fits n={n} with k={k} (d={d})")]
    TooSmallN { n: u128, k: usize, d: u32 },

    #[error("size-relation-violated at level {level}: n={n} but at least {required} is needed")]
    SizeRelationViolated {
        level: usize,
        n: u128,
        required: String,
    },

    #[error("dimension-mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index-out-of-range: {what} {index} not below {bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("invalid-sequence: {0}")]
    InvalidSequence(String),

    #[error("not-an-mis: the given vertex set is not a maximal independent set")]
    NotAnMis,

    #[error("inconsistent-mis: neither copy restricts to an MIS of special subgraph {index} at level {level}")]
    InconsistentMis { level: usize, index: usize },

    #[error("schedule-invalid: {0}")]
    ScheduleInvalid(String),

    #[error("edge collision while embedding: {0}")]
    EdgeCollision(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
