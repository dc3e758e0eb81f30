use thiserror::Error;

pub type Result<T> = std::result::Result<T, NcError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NcError {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("variable index {index} out of range (g = {g})")]
    IndexOutOfRange { index: usize, g: usize },

    #[error("letter class '{0}' is not allowed here")]
    ClassNotAllowed(char),

    #[error("mismatched variable count: {0} vs {1}")]
    MismatchedG(usize, usize),

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("no matrix assigned to letter class '{0}'")]
    MissingAssignment(char),

    #[error("polynomial is not homogeneous of degree two in h")]
    NotHQuadratic,

    #[error("polynomial is not symmetric")]
    NotSymmetric,

    #[error("vector v must be nonzero")]
    ZeroVector,

    #[error("derivative order must be at least 1")]
    BadOrder,

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
