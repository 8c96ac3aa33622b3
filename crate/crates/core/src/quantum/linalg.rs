use nalgebra::{DMatrix, DVector};

use super::{DensityMatrix, Ensemble, PureState, QuantumError};
use crate::tolerance;
use crate::C64;

/// Kronecker product; the result's dims are the concatenation of both operands'.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> Self {
        let v = self.amplitudes().kronecker(other.amplitudes());
        let dims = [self.dims(), other.dims()].concat();
        PureState::from_vector_unchecked(v, dims)
    }
}

impl Tensor for DensityMatrix {
    fn tensor(&self, other: &Self) -> Self {
        let m = self.matrix().kronecker(other.matrix());
        let dims = [self.dims(), other.dims()].concat();
        DensityMatrix::from_parts_unchecked(m, dims)
    }
}

/// Max elementwise `|M − M†|`.
pub fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `tr[ρσ]`. The imaginary residue must stay below 1e-12 and is discarded.
pub fn overlap(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, QuantumError> {
    if rho.dim() != sigma.dim() {
        return Err(QuantumError::DimensionMismatch {
            left: rho.dims().to_vec(),
            right: sigma.dims().to_vec(),
        });
    }
    // tr[AB] = Σᵢⱼ Aᵢⱼ Bⱼᵢ without forming the product.
    let (a, b) = (rho.matrix(), sigma.matrix());
    let n = a.nrows();
    let mut t = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            t += a[(i, j)] * b[(j, i)];
        }
    }
    if t.im.abs() > tolerance::STRUCTURE {
        return Err(QuantumError::ComplexOverlap(t.im));
    }
    Ok(t.re)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` belonging to `values[k]`.
    pub vectors: Vec<DVector<C64>>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// `Σ f(λₖ) vₖvₖ†`.
    pub fn rebuild_with(&self, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
        let n = self.values.len();
        let mut m = DMatrix::<C64>::zeros(n, n);
        for (l, v) in self.values.iter().zip(&self.vectors) {
            m += (v * v.adjoint()).scale(f(*l));
        }
        m
    }

    pub fn rebuild(&self) -> DMatrix<C64> {
        self.rebuild_with(|l| l)
    }
}

pub fn eigendecompose(h: &DMatrix<C64>) -> Result<Spectrum, QuantumError> {
    if !h.is_square() {
        return Err(QuantumError::NotSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    let defect = hermitian_defect(h);
    if defect > tolerance::STRUCTURE {
        return Err(QuantumError::NotHermitian { defect });
    }
    let herm = (h + h.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
    Ok(Spectrum { values, vectors })
}

/// Canonical eigen-ensemble: one entry per eigenvalue above 1e-12.
pub fn ensemble_of(rho: &DensityMatrix) -> Result<Ensemble, QuantumError> {
    let spectrum = eigendecompose(rho.matrix())?;
    let kept: Vec<(f64, DVector<C64>)> = spectrum
        .values
        .iter()
        .zip(spectrum.vectors)
        .filter(|(l, _)| **l > tolerance::ENSEMBLE_WEIGHT)
        .map(|(l, v)| (*l, v))
        .collect();
    let total: f64 = kept.iter().map(|(l, _)| l).sum();
    let entries = kept
        .into_iter()
        .map(|(l, v)| (l / total, PureState::from_vector_unchecked(v, rho.dims().to_vec())))
        .collect();
    Ensemble::new(entries)
}

/// Transposes the indices of one subsystem of a matrix acting on `dims`.
pub fn partial_transpose_matrix(
    m: &DMatrix<C64>,
    dims: &[usize],
    subsystem: usize,
) -> Result<DMatrix<C64>, QuantumError> {
    if subsystem >= dims.len() {
        return Err(QuantumError::SubsystemOutOfRange {
            index: subsystem,
            count: dims.len(),
        });
    }
    super::check_dims(dims, m.nrows())?;
    let n = m.nrows();
    let stride: usize = dims[subsystem + 1..].iter().product();
    let ds = dims[subsystem];
    let digit = |k: usize| (k / stride) % ds;
    let mut out = DMatrix::<C64>::zeros(n, n);
    for r in 0..n {
        let dr = digit(r);
        for c in 0..n {
            let dc = digit(c);
            // swap the subsystem digit between row and column
            let r2 = r - dr * stride + dc * stride;
            let c2 = c - dc * stride + dr * stride;
            out[(r2, c2)] = m[(r, c)];
        }
    }
    Ok(out)
}

pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<DMatrix<C64>, QuantumError> {
    partial_transpose_matrix(rho.matrix(), rho.dims(), subsystem)
}

/// `|ψ⟩ = Σₖ cₖ |leftₖ⟩|rightₖ⟩` with `cₖ` descending.
#[derive(Debug, Clone)]
pub struct Schmidt {
    pub coefficients: Vec<f64>,
    pub left: Vec<DVector<C64>>,
    pub right: Vec<DVector<C64>>,
}

impl Schmidt {
    pub fn reconstruct(&self) -> DVector<C64> {
        let mut v = self.left[0].kronecker(&self.right[0]).scale(self.coefficients[0]);
        for k in 1..self.coefficients.len() {
            v += self.left[k].kronecker(&self.right[k]).scale(self.coefficients[k]);
        }
        v
    }
}

pub fn schmidt(psi: &PureState, d_a: usize, d_b: usize) -> Result<Schmidt, QuantumError> {
    if psi.dims() != [d_a, d_b] {
        return Err(QuantumError::NotBipartite {
            dims: psi.dims().to_vec(),
        });
    }
    let amps = psi.amplitudes();
    let m = DMatrix::from_fn(d_a, d_b, |i, j| amps[i * d_b + j]);
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V†");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    Ok(Schmidt {
        coefficients: order.iter().map(|&k| svd.singular_values[k]).collect(),
        left: order.iter().map(|&k| u.column(k).into_owned()).collect(),
        right: order.iter().map(|&k| v_t.row(k).transpose()).collect(),
    })
}
