use thiserror::Error;

use crate::datasets::IdxError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("wire {wire} out of range for {n} qubit(s)")]
    WireOutOfRange { wire: usize, n: usize },

    #[error("gate wires must be distinct, got {0:?}")]
    DuplicateWires(Vec<usize>),

    #[error("{kind} takes {expected} angle(s) and {expected_wires} wire(s), got {angles} angle(s) and {wires} wire(s)")]
    GateArity {
        kind: &'static str,
        expected: usize,
        expected_wires: usize,
        angles: usize,
        wires: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("reconstructed average state is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("feature vector has length {got}, encoder consumes {expected}")]
    FeatureLength { expected: usize, got: usize },

    #[error("invalid circuit spec: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("reference state is singular (min eigenvalue {min_eigenvalue:e}); regularize it explicitly")]
    SingularReference { min_eigenvalue: f64 },

    #[error("label is not one-hot: {0:?}")]
    NotOneHot(Vec<f64>),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("class {0} has no samples")]
    EmptyClass(usize),

    #[error("optimal discrimination is only implemented for K = 2 (got K = {0}); general K needs a semidefinite program, which is out of scope")]
    UnsupportedClassCount(usize),

    #[error(transparent)]
    Idx(#[from] IdxError),
}
