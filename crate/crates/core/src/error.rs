use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("operands live on different groups: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("invalid group spec `{spec}`: {reason}")]
    ParseGroup { spec: String, reason: String },

    #[error("invalid set spec `{spec}`: {reason}")]
    ParseSet { spec: String, reason: String },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("set of size {size} exceeds the dissociation scan cap {cap}")]
    DissociationCap { size: usize, cap: usize },

    #[error("dense operator of order {n} exceeds the materialization cap {cap}")]
    MatrixCap { n: usize, cap: usize },

    #[error("empty set not allowed here")]
    EmptySet,

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("group does not have the required shape: {0}")]
    BadGroupShape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("identity check `{name}` failed: error {err:.3e} exceeds tolerance {tol:.1e}")]
    IdentityCheck { name: String, err: f64, tol: f64 },

    #[error("unknown inequality `{0}`")]
    UnknownInequality(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
