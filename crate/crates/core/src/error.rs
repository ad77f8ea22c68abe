use thiserror::Error;

/// Errors produced by the toolkit.
///
/// The variants map one-to-one onto the CLI exit codes: parse errors exit 2,
/// precondition failures (`InvalidPartition`, `Infeasible`, `Domain`,
/// `Positivity`) exit 3, `Limit` exits 4 and `Internal` exits 5.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JtError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("infeasible constraint set: {0}")]
    Infeasible(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("vector has a negative entry at node {0:?}")]
    Positivity(String),
    #[error("limit exceeded: {0}")]
    Limit(String),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl JtError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JtError::Parse(_) => 2,
            JtError::InvalidPartition(_)
            | JtError::Infeasible(_)
            | JtError::Domain(_)
            | JtError::Positivity(_) => 3,
            JtError::Limit(_) => 4,
            JtError::Internal(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, JtError>;
