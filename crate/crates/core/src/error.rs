use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operator on {op_qubits} qubit(s) cannot start at qubit {start} of {total}")]
    Placement {
        op_qubits: usize,
        start: usize,
        total: usize,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("{what} index {index} out of range {lo}..={hi}")]
    IndexOutOfRange {
        what: &'static str,
        index: i64,
        lo: i64,
        hi: i64,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Pauli word does not square to +I")]
    NotInvolution,
    #[error("context mismatch: ({0}) vs ({1})")]
    ContextMismatch(String, String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
