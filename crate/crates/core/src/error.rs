//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("{context}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("vector length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },

    #[error("state norm deviates from 1 by {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("matrix is not Hermitian: |A - A^H| reaches {max_asymmetry:.3e} at entry ({row}, {col})")]
    NotHermitian {
        row: usize,
        col: usize,
        max_asymmetry: f64,
    },

    #[error("matrix is not unitary: Frobenius norm of U^H U - I is {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("density matrix trace deviates from 1 by {deviation:.3e}")]
    TraceNotOne { deviation: f64 },

    #[error("density matrix has eigenvalue {eigenvalue:.3e} below the PSD tolerance")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("fidelity value {value} overshoots [0, 1] beyond tolerance")]
    NonPhysicalFidelity { value: f64 },

    #[error("partial trace keep set is empty")]
    EmptyKeepSet,

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("duplicate qubit index {index}")]
    DuplicateQubit { index: usize },

    #[error("weight vector has {got} entries but the network has {expected} generators")]
    WeightCountMismatch { expected: usize, got: usize },

    #[error("weight {index} is not finite")]
    NonFiniteWeight { index: usize },

    #[error("invalid network:\n{0}")]
    InvalidNetwork(String),

    #[error("Kraus completeness violated: Frobenius norm of sum K^H K - I is {deviation:.3e}")]
    KrausIncomplete { deviation: f64 },

    #[error("training batch is empty")]
    EmptyBatch,

    #[error("step counter must be at least 1")]
    ZeroStep,

    #[error("gate {gate} acts on {expected} qubits, requested {got}")]
    GateArityMismatch {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
