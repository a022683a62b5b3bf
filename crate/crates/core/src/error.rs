use crate::model::VariableId;

/// Errors raised while building, validating, parsing, or evaluating.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cycle detected through variable {0}")]
    Cycle(VariableId),

    #[error("shape mismatch for variable {var}: {detail}")]
    ShapeMismatch { var: VariableId, detail: String },

    #[error("probability out of range for variable {var} (row {row}): {value}")]
    OutOfRange { var: VariableId, row: usize, value: f64 },

    #[error("variable {0} has no CPT")]
    MissingCpt(VariableId),

    #[error("unknown variable {0}")]
    UnknownVariable(VariableId),

    #[error("assignment is missing a value for variable {0}")]
    MissingAssignment(VariableId),

    #[error("pivot {0} does not occur with opposite signs in the two clauses")]
    InvalidPivot(VariableId),

    #[error("{what} has {size} variables, limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("ordering covers {found} variables, expected {expected}")]
    OrderingMismatch { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
