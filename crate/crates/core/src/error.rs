use num_bigint::BigUint;
use thiserror::Error;

use crate::planner::Violation;

/// Coarse classification used for CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Domain,
    Exhausted,
    Corrupt,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WomError {
    #[error("index {index} out of range (must be below {bound})")]
    IndexOutOfRange { index: BigUint, bound: BigUint },

    #[error("message {message} out of range for generation {generation} (must be below {bound})")]
    MessageOutOfRange {
        generation: usize,
        message: BigUint,
        bound: BigUint,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid code parameters: {}", join_violations(.0))]
    InvalidParams(Vec<Violation>),

    #[error("parameter search for generation {generation} exceeded {limit} steps")]
    SearchLimit { generation: usize, limit: u64 },

    #[error("memory exhausted: all {writes} writes have been used")]
    Exhausted { writes: usize },

    #[error("need {needed} zero symbols but only {available} remain")]
    NotEnoughZeros { needed: u64, available: u64 },

    #[error("write-once violation: wit {wit} would have to change from 1 to 0")]
    WriteOnceViolation { wit: usize },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("corrupt state: {0}")]
    Corrupt(String),
}

impl WomError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            WomError::Exhausted { .. } | WomError::NotEnoughZeros { .. } => ErrorKind::Exhausted,
            WomError::Corrupt(_) => ErrorKind::Corrupt,
            _ => ErrorKind::Domain,
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = WomError> = std::result::Result<T, E>;
