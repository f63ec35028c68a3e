use thiserror::Error;

use super::MAX_QUBITS;

/// Errors raised by the dense simulation engine.
#[derive(Debug, Error)]
pub enum QcoreError {
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit system")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("dimension {dim} does not match a {n_qubits}-qubit system")]
    DimensionMismatch { dim: usize, n_qubits: usize },

    #[error("state is not normalized (deviation {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    #[error("invalid density operator: {reason}")]
    InvalidDensity { reason: String },

    #[error("systems larger than {MAX_QUBITS} qubits are not supported (requested {n_qubits})")]
    TooManyQubits { n_qubits: usize },

    #[error("keep set must be a nonempty subset of the qubit indices")]
    EmptyKeepSet,

    #[error("requested measurement branch has zero probability")]
    ZeroProbabilityBranch,

    #[error("pauli string repeats qubit index {qubit}")]
    DuplicatePauliIndex { qubit: usize },

    #[error("control and target qubits must differ")]
    ControlEqualsTarget,
}
