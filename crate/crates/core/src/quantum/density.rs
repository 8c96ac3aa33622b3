use nalgebra::DMatrix;

use super::{check_dims, eigendecompose, hermitian_defect, QuantumError};
use crate::tolerance;
use crate::C64;

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates and wraps `matrix`.
    ///
    /// Eigenvalues in `[-1e-10, 0)` are clamped to zero (the matrix is rebuilt
    /// from its clamped spectrum); anything more negative is rejected.
    pub fn new(matrix: DMatrix<C64>, dims: Vec<usize>) -> Result<Self, QuantumError> {
        if !matrix.is_square() {
            return Err(QuantumError::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        check_dims(&dims, matrix.nrows())?;
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QuantumError::NonFinite);
        }
        let defect = hermitian_defect(&matrix);
        if defect > tolerance::STRUCTURE {
            return Err(QuantumError::NotHermitian { defect });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tolerance::STRUCTURE || trace.im.abs() > tolerance::STRUCTURE {
            return Err(QuantumError::Trace { trace: trace.re });
        }
        let hermitian = (&matrix + matrix.adjoint()).scale(0.5);
        let spectrum = eigendecompose(&hermitian)?;
        let min = spectrum.min();
        if min < -tolerance::PSD_CLAMP {
            return Err(QuantumError::NotPositive { min_eigenvalue: min });
        }
        let matrix = if min < 0.0 {
            let clamped = spectrum.rebuild_with(|l| l.max(0.0));
            let tr = clamped.trace().re;
            clamped.unscale(tr)
        } else {
            hermitian
        };
        Ok(Self { matrix, dims })
    }

    pub(crate) fn from_parts_unchecked(matrix: DMatrix<C64>, dims: Vec<usize>) -> Self {
        Self { matrix, dims }
    }

    /// `𝟙/D`.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        let m = DMatrix::<C64>::identity(d, d).unscale(d as f64);
        Self { matrix: m, dims }
    }

    /// Convex combination of density matrices with identical dims.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self, QuantumError> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| QuantumError::Ensemble("empty mixture".into()))?;
        let d = first.dim();
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for (w, rho) in parts {
            if rho.dims != first.dims {
                return Err(QuantumError::DimensionMismatch {
                    left: first.dims.clone(),
                    right: rho.dims.clone(),
                });
            }
            acc += rho.matrix.scale(*w);
        }
        Self::new(acc, first.dims.clone())
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// Tr[ρ²].
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}
