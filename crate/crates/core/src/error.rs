use thiserror::Error;

use crate::algebra::ValidationReport;
use crate::field::FieldError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("structure constant ({i}, {j}, {k}) refers to a basis index >= {dim}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        dim: usize,
    },
    #[error("expected {expected} {what}, found {found}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("algebra failed validation: {0}")]
    Invalid(ValidationReport),
    /// A precondition of an operation does not hold.
    #[error("{0}")]
    Domain(String),
    #[error("enumeration of {size} elements exceeds the limit {limit}")]
    TooLarge { size: u64, limit: u64 },
    #[error("configuration error: {0}")]
    Config(String),
    /// A proved identity failed at run time.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
