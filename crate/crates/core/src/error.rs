use thiserror::Error;

/// Errors raised anywhere in the compile / verify pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid system size {n}: need at least {min} qubits")]
    InvalidSize { n: usize, min: usize },

    #[error("hamming weight {q} out of range for {n} qubits")]
    WeightOutOfRange { q: usize, n: usize },

    #[error("expected {expected} angles, got {got}")]
    WrongAngleCount { expected: usize, got: usize },

    #[error("series parity mismatch: {0}")]
    ParityMismatch(String),

    #[error("fitting failed: {0}")]
    FittingFailed(String),

    #[error("normalization infeasible: A^2 + B^2 = {value} > 1 at theta = {theta}")]
    Infeasible { theta: f64, value: f64 },

    #[error("spectral completion failed (residual {residual:e})")]
    CompletionFailed { residual: f64 },

    #[error("angle extraction failed (residual {residual:e})")]
    ExtractionFailed { residual: f64 },

    #[error("phase reset violated: tau * L = {product} is not a multiple of 2 pi")]
    PhaseReset { product: f64 },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("circuit has {0} qubits, simulator limit is {max}", max = crate::sim::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("malformed circuit JSON: {0}")]
    MalformedJson(String),

    #[error("unknown gate type {0:?}")]
    UnknownGate(String),

    #[error("unsupported circuit format version {0}")]
    UnsupportedVersion(u64),

    #[error("cannot parse angle {0:?}")]
    BadAngle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
