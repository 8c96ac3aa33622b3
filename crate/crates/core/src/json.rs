//! JSON records for states, operators and decompositions.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major lists of
//! rows.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::{DensityMatrix, Ensemble, PureState, QuantumError};
use crate::witness::{ProductTerm, SeparableDecomposition};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecordError {
    #[error("matrix rows have inconsistent lengths")]
    Ragged,
    #[error("record contains a non-finite number")]
    NonFinite,
    #[error("decomposition has no terms")]
    EmptyDecomposition,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn complex(p: [f64; 2]) -> Result<C64, RecordError> {
    if p.iter().all(|v| v.is_finite()) {
        Ok(C64::new(p[0], p[1]))
    } else {
        Err(RecordError::NonFinite)
    }
}

pub fn matrix_rows(m: &DMatrix<C64>) -> Vec<Vec<[f64; 2]>> {
    m.row_iter().map(|r| r.iter().map(|z| pair(*z)).collect()).collect()
}

pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<C64>, RecordError> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(RecordError::Ragged);
    }
    let mut out = DMatrix::zeros(n, m);
    for (i, row) in rows.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            out[(i, j)] = complex(*p)?;
        }
    }
    Ok(out)
}

/// `{"dims": [...], "matrix": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixRecord {
    pub fn new(m: &DMatrix<C64>, dims: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            matrix: matrix_rows(m),
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<C64>, RecordError> {
        matrix_from_rows(&self.matrix)
    }

    pub fn to_density(&self) -> Result<DensityMatrix, RecordError> {
        Ok(DensityMatrix::new(self.to_matrix()?, self.dims.clone())?)
    }
}

impl From<&DensityMatrix> for MatrixRecord {
    fn from(rho: &DensityMatrix) -> Self {
        Self::new(rho.matrix(), rho.dims())
    }
}

/// `{"dims": [...], "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateRecord {
    pub fn to_state(&self) -> Result<PureState, RecordError> {
        let amps = self
            .amplitudes
            .iter()
            .map(|p| complex(*p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PureState::new(amps, self.dims.clone())?)
    }
}

impl From<&PureState> for StateRecord {
    fn from(psi: &PureState) -> Self {
        Self {
            dims: psi.dims().to_vec(),
            amplitudes: psi.amplitudes().iter().map(|z| pair(*z)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedState {
    pub weight: f64,
    #[serde(flatten)]
    pub state: StateRecord,
}

pub fn ensemble_record(e: &Ensemble) -> Vec<WeightedState> {
    e.entries()
        .iter()
        .map(|(w, psi)| WeightedState {
            weight: *w,
            state: psi.into(),
        })
        .collect()
}

pub fn ensemble_from_record(entries: &[WeightedState]) -> Result<Ensemble, RecordError> {
    let parsed = entries
        .iter()
        .map(|e| Ok((e.weight, e.state.to_state()?)))
        .collect::<Result<Vec<_>, RecordError>>()?;
    Ok(Ensemble::new(parsed)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductTermRecord {
    pub weight: f64,
    pub a: MatrixRecord,
    pub b: MatrixRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub residual: f64,
    pub terms: Vec<ProductTermRecord>,
}

impl From<&SeparableDecomposition> for DecompositionRecord {
    fn from(dec: &SeparableDecomposition) -> Self {
        Self {
            residual: dec.residual,
            terms: dec
                .terms
                .iter()
                .map(|t| ProductTermRecord {
                    weight: t.weight,
                    a: (&t.a).into(),
                    b: (&t.b).into(),
                })
                .collect(),
        }
    }
}

impl DecompositionRecord {
    /// Parses the terms; the stored residual is carried over unchecked.
    pub fn to_decomposition(&self) -> Result<SeparableDecomposition, RecordError> {
        if self.terms.is_empty() {
            return Err(RecordError::EmptyDecomposition);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(ProductTerm {
                    weight: t.weight,
                    a: t.a.to_density()?,
                    b: t.b.to_density()?,
                })
            })
            .collect::<Result<Vec<_>, RecordError>>()?;
        Ok(SeparableDecomposition {
            terms,
            residual: self.residual,
        })
    }
}
