use thiserror::Error;

/// Errors raised by state, tensor and measure operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller broke an operation's precondition (shapes, ranges, kinds).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A Hermitian expectation came back with a non-negligible imaginary part.
    #[error("numerical integrity: imaginary residue {residue:e} exceeds {tolerance:e}")]
    NumericalIntegrity { residue: f64, tolerance: f64 },

    /// A Kraus element annihilates the state (probability at or below 1e-12).
    #[error("zero-probability outcome (p = {0:e})")]
    ZeroProbability(f64),

    /// The requested computation exceeds a configured size cap.
    #[error("resource limit: {what} needs {requested} qubits, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    /// The symmetric fast path was asked to handle a non-symmetric state.
    #[error("state is not permutation-symmetric (qubits {0} and {1} differ by {2:e})")]
    NotSymmetric(usize, usize, f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("Kraus element is not normal (commutator norm {0:e})")]
    NotNormal(f64),

    #[error("Kraus set is incomplete (deviation from identity {0:e})")]
    IncompleteKraus(f64),

    #[error("malformed tensor data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
