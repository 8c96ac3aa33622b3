//! Finite-dimensional states and the linear algebra shared by every other module.
//!
//! Subsystem index 0 is always the left tensor factor: a basis index `k` of a
//! state with dims `[dA, dB]` decomposes as `k = i·dB + j`.

mod density;
mod ensemble;
mod linalg;
pub mod random;
mod state;

pub use density::DensityMatrix;
pub use ensemble::Ensemble;
pub use linalg::{
    eigendecompose, ensemble_of, hermitian_defect, overlap, partial_transpose, partial_transpose_matrix, schmidt,
    Schmidt, Spectrum, Tensor,
};
pub use state::PureState;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("dims {dims:?} do not multiply to {len}")]
    DimsProduct { dims: Vec<usize>, len: usize },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |M - M†| = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("trace is {trace}, expected 1")]
    Trace { trace: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("subsystem {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },
    #[error("expected a bipartite state, got dims {dims:?}")]
    NotBipartite { dims: Vec<usize> },
    #[error("invalid ensemble: {0}")]
    Ensemble(String),
    #[error("overlap has imaginary residue {0:e}")]
    ComplexOverlap(f64),
    #[error("value is not finite")]
    NonFinite,
}

pub(crate) fn check_dims(dims: &[usize], len: usize) -> Result<(), QuantumError> {
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != len {
        return Err(QuantumError::DimsProduct {
            dims: dims.to_vec(),
            len,
        });
    }
    Ok(())
}
