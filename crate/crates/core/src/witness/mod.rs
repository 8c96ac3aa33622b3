//! Entanglement witnesses and their positive approximations.
//!
//! A witness `W` (Hermitian, unit trace, `tr[σW] ≥ 0` on separable `σ`) is
//! mixed with white noise, `W̃ = (1 − p)W + p·𝟙/D`. The smallest `p` making
//! `W̃` positive is `p*`; the smallest making it separable is `p_s ≥ p*`.
//! Because the map is affine, `tr[ρW] = (tr[ρW̃] − p/D)/(1 − p)`.

mod bisection;
mod nnls;
mod separable;

pub use bisection::minimal_feasible;
pub use nnls::nnls;
pub use separable::{
    decompose_separable, find_separable_decomposition, locc_expectation, separable_approximate, DecompositionConfig,
    ProductTerm, SeparabilityMode, SeparableApproxWitness, SeparableDecomposition,
};

use nalgebra::DMatrix;
use thiserror::Error;

use crate::quantum::{eigendecompose, hermitian_defect, schmidt, DensityMatrix, PureState, QuantumError};
use crate::tolerance;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error("witness matrix is not Hermitian (max |W - W†| = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("witness trace is {trace}, expected 1")]
    Trace { trace: f64 },
    #[error("not a witness: smallest eigenvalue {lambda_min} is not negative")]
    NotAWitness { lambda_min: f64 },
    #[error("expected bipartite dims, got {0:?}")]
    NotBipartite(Vec<usize>),
    #[error("target is a product state; its projector witness detects nothing")]
    ProductTarget,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("bisection bracket failure: predicate false at p = {p}")]
    BracketFailure { p: f64 },
    #[error("separable decomposition not found (best residual {residual:e})")]
    DecompositionNotFound { residual: f64 },
    #[error("separable decomposition requires the PPT-exact mode")]
    RequiresExactMode,
    #[error("decomposition does not reconstruct the matrix (residual {residual:e})")]
    InvalidDecomposition { residual: f64 },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// Hermitian, unit-trace operator on a bipartite space with a negative eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    matrix: DMatrix<C64>,
    dims: Vec<usize>,
    lambda_min: f64,
}

impl Witness {
    pub fn new(matrix: DMatrix<C64>, dims: Vec<usize>) -> Result<Self, WitnessError> {
        if dims.len() != 2 {
            return Err(WitnessError::NotBipartite(dims));
        }
        if !matrix.is_square() || dims[0] * dims[1] != matrix.nrows() {
            return Err(QuantumError::DimsProduct {
                dims,
                len: matrix.nrows(),
            }
            .into());
        }
        let defect = hermitian_defect(&matrix);
        if defect > tolerance::STRUCTURE {
            return Err(WitnessError::NotHermitian { defect });
        }
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        let lambda_min = eigendecompose(&matrix)?.min();
        if lambda_min >= 0.0 {
            return Err(WitnessError::NotAWitness { lambda_min });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tolerance::STRUCTURE {
            return Err(WitnessError::Trace { trace: trace.re });
        }
        Ok(Self {
            matrix,
            dims,
            lambda_min,
        })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total dimension `D = d_A·d_B`.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    /// `tr[ρW]`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64, WitnessError> {
        if rho.dim() != self.dim() {
            return Err(QuantumError::DimensionMismatch {
                left: rho.dims().to_vec(),
                right: self.dims.clone(),
            }
            .into());
        }
        Ok((rho.matrix() * &self.matrix).trace().re)
    }

    /// `(1 − p)W + p·𝟙/D`, unvalidated.
    pub fn noisy(&self, p: f64) -> DMatrix<C64> {
        let d = self.dim();
        self.matrix.scale(1.0 - p) + DMatrix::<C64>::identity(d, d).scale(p / d as f64)
    }
}

/// `(λ²_max·𝟙 − |t⟩⟨t|)` normalized to unit trace, `λ_max` the largest Schmidt
/// coefficient of the target.
pub fn projector_witness(target: &PureState) -> Result<Witness, WitnessError> {
    let dims = target.dims().to_vec();
    if dims.len() != 2 {
        return Err(WitnessError::NotBipartite(dims));
    }
    let sc = schmidt(target, dims[0], dims[1])?;
    let lmax2 = sc.coefficients[0].powi(2);
    if lmax2 > 1.0 - tolerance::STRUCTURE {
        return Err(WitnessError::ProductTarget);
    }
    let d = target.dim();
    let v = target.amplitudes();
    let raw = DMatrix::<C64>::identity(d, d).scale(lmax2) - v * v.adjoint();
    let trace = d as f64 * lmax2 - 1.0;
    Witness::new(raw.unscale(trace), dims)
}

/// `W̃ = (1 − p*)W + p*·𝟙/D` with minimal `p*`.
#[derive(Debug, Clone)]
pub struct ApproxWitness {
    pub source: Witness,
    pub p_star: f64,
    pub matrix: DensityMatrix,
}

impl ApproxWitness {
    pub fn lambda_min(&self) -> f64 {
        self.source.lambda_min()
    }

    /// Local dimension `d` when the witness acts on `[d, d]`.
    pub fn local_dim(&self) -> Option<usize> {
        let dims = self.source.dims();
        (dims[0] == dims[1]).then_some(dims[0])
    }
}

/// `p* = D|λ_min| / (1 + D|λ_min|)`, the point where the bottom of the
/// spectrum of the noisy witness reaches zero.
pub fn approximate(w: &Witness) -> Result<ApproxWitness, WitnessError> {
    let lambda_min = w.lambda_min();
    if lambda_min >= 0.0 {
        return Err(WitnessError::NotAWitness { lambda_min });
    }
    let dl = w.dim() as f64 * lambda_min.abs();
    let p_star = dl / (1.0 + dl);
    let matrix = DensityMatrix::new(w.noisy(p_star), w.dims().to_vec())?;
    Ok(ApproxWitness {
        source: w.clone(),
        p_star,
        matrix,
    })
}

/// `(f_ave − p/D)/(1 − p)` for a total dimension `D`.
pub fn expectation_from_overlap(f_ave: f64, p: f64, total_dim: usize) -> f64 {
    (f_ave - p / total_dim as f64) / (1.0 - p)
}

/// Recovers `tr[ρW]` from the overlap `tr[ρW̃]` on `[d, d]`.
///
/// `f_ave` is not range-checked: estimated overlaps may leave `[0, 1]` through
/// sampling noise and still map through the same affine relation.
pub fn reconstruct_expectation(f_ave: f64, p_star: f64, d: usize) -> Result<f64, WitnessError> {
    if !(0.0..1.0).contains(&p_star) {
        return Err(WitnessError::InvalidParameter(format!(
            "p_star = {p_star} must lie in [0, 1)"
        )));
    }
    if d < 2 {
        return Err(WitnessError::InvalidParameter(format!("local dimension {d} < 2")));
    }
    if !f_ave.is_finite() {
        return Err(WitnessError::InvalidParameter("f_ave is not finite".into()));
    }
    Ok(expectation_from_overlap(f_ave, p_star, d * d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> PureState {
        PureState::maximally_entangled(2)
    }

    #[test]
    fn product_target_is_rejected() {
        let t = PureState::basis(0, vec![2, 2]).unwrap();
        assert_eq!(projector_witness(&t).unwrap_err(), WitnessError::ProductTarget);
    }

    #[test]
    fn maximally_mixed_is_not_a_witness() {
        let m = DMatrix::<C64>::identity(4, 4).unscale(4.0);
        assert!(matches!(
            Witness::new(m, vec![2, 2]),
            Err(WitnessError::NotAWitness { .. })
        ));
        let id = DMatrix::<C64>::identity(4, 4);
        assert!(matches!(
            Witness::new(id, vec![2, 2]),
            Err(WitnessError::NotAWitness { .. })
        ));
    }

    #[test]
    fn wrong_trace_and_non_hermitian_are_distinct_errors() {
        let w = projector_witness(&bell()).unwrap();
        let doubled = w.matrix().scale(2.0);
        assert!(matches!(
            Witness::new(doubled, vec![2, 2]),
            Err(WitnessError::Trace { .. })
        ));
        let mut skew = w.matrix().clone();
        skew[(0, 1)] += C64::new(0.0, 0.1);
        assert!(matches!(
            Witness::new(skew, vec![2, 2]),
            Err(WitnessError::NotHermitian { .. })
        ));
    }

    #[test]
    fn reconstruction_rejects_p_equal_one() {
        assert!(reconstruct_expectation(0.5, 1.0, 2).is_err());
        assert!(reconstruct_expectation(0.5, 0.5, 1).is_err());
    }

    #[test]
    fn reconstruction_fixed_point() {
        for &p in &[0.1, 0.5, 2.0 / 3.0, 0.9] {
            for d in 2..5 {
                let f = p / (d * d) as f64;
                assert!(reconstruct_expectation(f, p, d).unwrap().abs() < 1e-15);
            }
        }
    }
}
