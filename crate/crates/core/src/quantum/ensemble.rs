use nalgebra::DMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{DensityMatrix, PureState, QuantumError};
use crate::tolerance;
use crate::C64;

/// Weighted list of pure states realizing a density matrix. Members need not
/// be orthogonal.
#[derive(Debug, Clone)]
pub struct Ensemble {
    entries: Vec<(f64, PureState)>,
    sampler: WeightedIndex<f64>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, PureState)>) -> Result<Self, QuantumError> {
        let Some((_, first)) = entries.first() else {
            return Err(QuantumError::Ensemble("no entries".into()));
        };
        let dims = first.dims().to_vec();
        let mut total = 0.0;
        for (w, s) in &entries {
            if !w.is_finite() || *w < 0.0 {
                return Err(QuantumError::Ensemble(format!("weight {w} is negative")));
            }
            if s.dims() != dims.as_slice() {
                return Err(QuantumError::DimensionMismatch {
                    left: dims,
                    right: s.dims().to_vec(),
                });
            }
            total += w;
        }
        if (total - 1.0).abs() > tolerance::STRUCTURE {
            return Err(QuantumError::Ensemble(format!("weights sum to {total}")));
        }
        let sampler =
            WeightedIndex::new(entries.iter().map(|(w, _)| *w)).map_err(|e| QuantumError::Ensemble(e.to_string()))?;
        Ok(Self { entries, sampler })
    }

    pub fn pure(state: PureState) -> Self {
        Self::new(vec![(1.0, state)]).expect("single unit-weight entry")
    }

    pub fn entries(&self) -> &[(f64, PureState)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        self.entries[0].1.dims()
    }

    /// Draws a member index with probability equal to its weight.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler.sample(rng)
    }

    /// Σ wᵢ |ψᵢ⟩⟨ψᵢ|.
    pub fn density_matrix(&self) -> Result<DensityMatrix, QuantumError> {
        let d = self.entries[0].1.dim();
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for (w, s) in &self.entries {
            let v = s.amplitudes();
            acc += (v * v.adjoint()).scale(*w);
        }
        DensityMatrix::new(acc, self.dims().to_vec())
    }
}
