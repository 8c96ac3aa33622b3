use nalgebra::DVector;

use super::{check_dims, DensityMatrix, QuantumError};
use crate::tolerance;
use crate::C64;

/// Normalized state vector on a product of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<C64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Builds a state, requiring unit norm within [`tolerance::STRUCTURE`].
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self, QuantumError> {
        check_dims(&dims, amplitudes.len())?;
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QuantumError::NonFinite);
        }
        let amplitudes = DVector::from_vec(amplitudes);
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tolerance::STRUCTURE {
            return Err(QuantumError::NotNormalized { norm });
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self, QuantumError> {
        check_dims(&dims, amplitudes.len())?;
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(QuantumError::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: v.unscale(norm),
            dims,
        })
    }

    pub(crate) fn from_vector_unchecked(amplitudes: DVector<C64>, dims: Vec<usize>) -> Self {
        Self { amplitudes, dims }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(index: usize, dims: Vec<usize>) -> Result<Self, QuantumError> {
        let dim: usize = dims.iter().product();
        if index >= dim {
            return Err(QuantumError::DimsProduct { dims, len: index + 1 });
        }
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[index] = C64::new(1.0, 0.0);
        Self::new(v, dims)
    }

    /// Maximally entangled `Σᵢ|ii⟩/√d` on `[d, d]`.
    pub fn maximally_entangled(d: usize) -> Self {
        let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        let mut v = DVector::from_element(d * d, C64::new(0.0, 0.0));
        for i in 0..d {
            v[i * d + i] = amp;
        }
        Self {
            amplitudes: v,
            dims: vec![d, d],
        }
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64, QuantumError> {
        if self.dim() != other.dim() {
            return Err(QuantumError::DimensionMismatch {
                left: self.dims.clone(),
                right: other.dims.clone(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Pure-state fidelity `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64, QuantumError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Equality up to a global phase, comparing `|⟨a|b⟩|` to one.
    pub fn eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        self.dims == other.dims
            && self
                .inner(other)
                .map(|z| (1.0 - z.norm()).abs() <= tol)
                .unwrap_or(false)
    }

    pub fn projector(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::from_parts_unchecked(m, self.dims.clone())
    }
}
