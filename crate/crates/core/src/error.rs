use thiserror::Error;

use crate::qformalism::ValidationReport;

/// Errors raised by the dissension toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate qubit label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),

    #[error("empty qubit subset")]
    EmptySubset,

    #[error("register of {0} qubits exceeds the supported maximum of {max}", max = crate::qformalism::MAX_QUBITS)]
    RegisterTooLarge(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ket is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid density operator: {0}")]
    InvalidState(ValidationReport),

    #[error("register mismatch: {0}")]
    RegisterMismatch(String),

    #[error("mixture weights must be non-negative and sum to 1 (sum = {0})")]
    InvalidWeights(f64),

    #[error("subsets overlap on `{0}`")]
    Overlap(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("wrong parameter length for a {qubits}-qubit basis: expected {expected}, got {got}")]
    ParamLength { qubits: usize, expected: usize, got: usize },

    #[error("measurement subset must be a proper subset of the register")]
    MeasureWholeRegister,

    #[error("no basis assigned for conditioning subset {0:?}")]
    MissingBasis(Vec<String>),

    #[error("unsupported dissension: {0}")]
    Unsupported(String),

    #[error("grid oracle dimension {0} exceeds the maximum of 6")]
    GridTooLarge(usize),

    #[error("Kraus operators are not complete (defect {0:e})")]
    IncompleteKraus(f64),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("parameter `{name}` out of range: {reason}")]
    ParamOutOfRange { name: String, reason: String },

    #[error("unknown table `{0}`")]
    UnknownTable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
