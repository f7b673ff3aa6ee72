use thiserror::Error;

/// Errors raised while building or parsing benchmark instances.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("tile permutation is not solvable")]
    Unsolvable,
    #[error("cost model `{0}` produces zero-cost edges")]
    ZeroCostEdges(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

impl DomainError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        DomainError::Parse {
            line,
            msg: msg.into(),
        }
    }
}
