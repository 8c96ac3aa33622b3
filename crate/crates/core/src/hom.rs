//! Hong-Ou-Mandel coincidence statistics for two single photons carrying
//! d-dimensional internal states.
//!
//! Closed form: `p_c = (1 − |⟨ψ₂|ψ₁⟩|²)/2`, and for mixed inputs
//! `p_c = (1 − tr[σ₁σ₂])/2`. [`bs_oracle`] recomputes the pure case by
//! pushing the two creation operators through a 50:50 beam splitter
//! (`a†ᵢ → (c†ᵢ + d†ᵢ)/√2`, `b†ᵢ → (c†ᵢ − d†ᵢ)/√2`) and summing outcome
//! probabilities.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fock::FockState;
use crate::quantum::{overlap, DensityMatrix, Ensemble, PureState, QuantumError};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomError {
    #[error("photon states have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// Probability that the photons exit through different ports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoincidenceResult {
    pub p_coincidence: f64,
    pub p_bunched: f64,
    /// Per-outcome coincidence probabilities keyed by (internal index at port c,
    /// internal index at port d).
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_breakdown")]
    pub breakdown: Option<BTreeMap<(usize, usize), f64>>,
}

fn serialize_breakdown<S: Serializer>(b: &Option<BTreeMap<(usize, usize), f64>>, s: S) -> Result<S::Ok, S::Error> {
    let b = b.as_ref().expect("skipped when None");
    let mut map = s.serialize_map(Some(b.len()))?;
    for ((i, j), p) in b {
        map.serialize_entry(&format!("c{i},d{j}"), p)?;
    }
    map.end()
}

impl CoincidenceResult {
    fn from_overlap(f: f64) -> Self {
        let p = (1.0 - f) / 2.0;
        Self {
            p_coincidence: p,
            p_bunched: 1.0 - p,
            breakdown: None,
        }
    }
}

pub fn coincidence_pure(psi1: &PureState, psi2: &PureState) -> Result<CoincidenceResult, HomError> {
    if psi1.dim() != psi2.dim() {
        return Err(HomError::DimensionMismatch(psi1.dim(), psi2.dim()));
    }
    Ok(CoincidenceResult::from_overlap(psi2.fidelity(psi1)?))
}

pub fn coincidence_mixed(sigma1: &DensityMatrix, sigma2: &DensityMatrix) -> Result<CoincidenceResult, HomError> {
    if sigma1.dim() != sigma2.dim() {
        return Err(HomError::DimensionMismatch(sigma1.dim(), sigma2.dim()));
    }
    Ok(CoincidenceResult::from_overlap(overlap(sigma1, sigma2)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Port {
    A,
    B,
    C,
    D,
}

/// Brute-force creation-operator expansion through the beam splitter.
pub fn bs_oracle(psi1: &PureState, psi2: &PureState) -> Result<CoincidenceResult, HomError> {
    if psi1.dim() != psi2.dim() {
        return Err(HomError::DimensionMismatch(psi1.dim(), psi2.dim()));
    }
    let a_form: Vec<((Port, usize), C64)> = psi1
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &a)| ((Port::A, i), a))
        .collect();
    let b_form: Vec<((Port, usize), C64)> = psi2
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, &b)| ((Port::B, j), b))
        .collect();
    let input = FockState::from_creation_product(&[a_form, b_form]);

    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let output = input.substitute(|&(port, i)| match port {
        Port::A => vec![((Port::C, i), h), ((Port::D, i), h)],
        Port::B => vec![((Port::C, i), h), ((Port::D, i), -h)],
        _ => vec![((port, i), C64::new(1.0, 0.0))],
    });

    let mut breakdown = BTreeMap::new();
    let mut coincident = 0.0;
    let mut bunched = 0.0;
    for (key, amp) in output.terms() {
        let p = amp.norm_sqr();
        match (key[0], key[1]) {
            ((Port::C, i), (Port::D, j)) => {
                coincident += p;
                *breakdown.entry((i, j)).or_insert(0.0) += p;
            }
            _ => bunched += p,
        }
    }
    Ok(CoincidenceResult {
        p_coincidence: coincident,
        p_bunched: bunched,
        breakdown: Some(breakdown),
    })
}

/// `Σᵢⱼ pᵢqⱼ|⟨ψᵢ|φⱼ⟩|²` over two ensembles.
pub fn average_fidelity(rho: &Ensemble, sigma: &Ensemble) -> Result<f64, HomError> {
    let (d1, d2) = (rho.entries()[0].1.dim(), sigma.entries()[0].1.dim());
    if d1 != d2 {
        return Err(HomError::DimensionMismatch(d1, d2));
    }
    let mut total = 0.0;
    for (p, psi) in rho.entries() {
        for (q, phi) in sigma.entries() {
            total += p * q * psi.fidelity(phi)?;
        }
    }
    Ok(total)
}
