use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate qubit label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),

    #[error("registers overlap on label `{0}`")]
    OverlappingLabels(String),

    #[error("empty register or label set")]
    EmptyRegister,

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("{kind} requires a two-qubit register, got {qubits} qubits")]
    NotTwoQubit { kind: &'static str, qubits: usize },

    #[error("{kind} value {value} outside [0, {ceiling}] beyond tolerance")]
    OutOfRange {
        kind: &'static str,
        value: f64,
        ceiling: f64,
    },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("ensemble size {size} is smaller than the state rank {rank}")]
    EnsembleTooSmall { size: usize, rank: usize },

    #[error("ensemble does not reconstruct the target (max error {0:e})")]
    Reconstruction(f64),

    #[error("convex roof of rank {rank} exceeds the supported limit {limit}")]
    RoofTooLarge { rank: usize, limit: usize },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
