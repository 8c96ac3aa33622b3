//! The four workflows. Each returns a serializable report or a [`CliError`].

use std::collections::BTreeMap;

use homwit::experiment::{run_batches, run_report, write_batches_csv, ExperimentConfig, RunReport, DEFAULT_BATCH};
use homwit::hom::coincidence_mixed;
use homwit::json::{pair, DecompositionRecord, MatrixRecord, StateRecord};
use homwit::optics::{joined_target, oam_encode, quantum_join, StepTrace};
use homwit::quantum::{overlap, random, DensityMatrix, PureState};
use homwit::witness::{
    approximate, expectation_from_overlap, find_separable_decomposition, locc_expectation, separable_approximate,
    SeparabilityMode, Witness, WitnessError,
};
use homwit::C64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::input::{CircuitInput, ExactInput, SimulateInput, WitnessInput};

/// Reconstructed and direct witness expectations must agree to this.
const RECONSTRUCTION_TOLERANCE: f64 = 1e-10;
/// Closed-form and overlap-derived coincidence probabilities.
const COINCIDENCE_TOLERANCE: f64 = 1e-12;
/// Product-term sum against the direct overlap.
const LOCC_TOLERANCE: f64 = 1e-6;
const JOIN_PROBABILITY_TOLERANCE: f64 = 1e-12;
const FIDELITY_TOLERANCE: f64 = 1e-10;

fn consistent(name: &str, a: f64, b: f64, tol: f64) -> Result<(), CliError> {
    let diff = (a - b).abs();
    if diff.is_finite() && diff <= tol {
        Ok(())
    } else {
        Err(CliError::Consistency(format!(
            "{name}: {a} vs {b} (|Δ| = {diff:e}, tolerance {tol:e})"
        )))
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessReport {
    pub dims: Vec<usize>,
    pub lambda_min: f64,
    pub p_star: f64,
    pub p_s: f64,
    pub separability_mode: SeparabilityMode,
    pub aew: MatrixRecord,
    pub saew: MatrixRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionRecord>,
}

pub fn witness(input: &WitnessInput, seed: Option<u64>) -> Result<WitnessReport, CliError> {
    let w = input.witness.resolve()?;
    let aew = approximate(&w)?;
    let saew = separable_approximate(&w)?;
    let decomposition = if input.decompose {
        if saew.mode != SeparabilityMode::Exact {
            return Err(CliError::Validation(format!(
                "dims {:?} exceed 2x3; PPT does not certify separability so no decomposition is attempted",
                w.dims()
            )));
        }
        let dec = find_separable_decomposition(&saew, input.ensemble_size, seed.or(input.seed).unwrap_or(0))
            .map_err(|e| CliError::Consistency(e.to_string()))?;
        let checked = saew
            .clone()
            .with_decomposition(dec)
            .map_err(|e| CliError::Consistency(e.to_string()))?;
        checked.decomposition.as_ref().map(DecompositionRecord::from)
    } else {
        None
    };
    Ok(WitnessReport {
        dims: w.dims().to_vec(),
        lambda_min: w.lambda_min(),
        p_star: aew.p_star,
        p_s: saew.p_s,
        separability_mode: saew.mode,
        aew: (&aew.matrix).into(),
        saew: (&saew.matrix).into(),
        decomposition,
    })
}

#[derive(Debug, Serialize)]
pub struct LoccReport {
    pub p_s: f64,
    pub locc_expectation: f64,
    pub saew_overlap: f64,
}

#[derive(Debug, Serialize)]
pub struct ExactReport {
    pub p_star: f64,
    pub witness_expectation: f64,
    pub overlap: f64,
    pub reconstructed_expectation: f64,
    pub p_coincidence: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locc: Option<LoccReport>,
}

fn locc_report(w: &Witness, rho: &DensityMatrix, record: &DecompositionRecord) -> Result<LoccReport, CliError> {
    let dec = record.to_decomposition()?;
    let saew = separable_approximate(w)?.with_decomposition(dec).map_err(|e| match e {
        WitnessError::InvalidDecomposition { .. } => CliError::Consistency(e.to_string()),
        other => other.into(),
    })?;
    let dec = saew.decomposition.as_ref().expect("attached above");
    let locc = locc_expectation(dec, rho)?;
    let direct = overlap(rho, &saew.matrix)?;
    consistent("LOCC expectation against tr[ρW̃_s]", locc, direct, LOCC_TOLERANCE)?;
    Ok(LoccReport {
        p_s: saew.p_s,
        locc_expectation: locc,
        saew_overlap: direct,
    })
}

pub fn exact(input: &ExactInput) -> Result<ExactReport, CliError> {
    let w = input.witness.resolve()?;
    let rho = input.state.resolve()?;
    if rho.dims() != w.dims() {
        return Err(CliError::Validation(format!(
            "dimension mismatch: state dims {:?}, witness dims {:?}",
            rho.dims(),
            w.dims()
        )));
    }
    let aew = approximate(&w)?;
    let direct = w.expectation(&rho)?;
    let f = overlap(&rho, &aew.matrix)?;
    let reconstructed = expectation_from_overlap(f, aew.p_star, w.dim());
    consistent(
        "reconstructed against direct tr[ρW]",
        reconstructed,
        direct,
        RECONSTRUCTION_TOLERANCE,
    )?;
    let p_c = coincidence_mixed(&rho, &aew.matrix)?.p_coincidence;
    consistent(
        "p_c against (1 − tr[ρW̃])/2",
        p_c,
        (1.0 - f) / 2.0,
        COINCIDENCE_TOLERANCE,
    )?;
    let locc = input
        .decomposition
        .as_ref()
        .map(|rec| locc_report(&w, &rho, rec))
        .transpose()?;
    Ok(ExactReport {
        p_star: aew.p_star,
        witness_expectation: direct,
        overlap: f,
        reconstructed_expectation: reconstructed,
        p_coincidence: p_c,
        locc,
    })
}

fn simulation_config(input: &SimulateInput, seed: Option<u64>) -> Result<ExperimentConfig, CliError> {
    let seed = seed
        .or(input.seed)
        .ok_or_else(|| CliError::Validation("simulate requires a seed (--seed or \"seed\" in the config)".into()))?;
    let w = input.witness.resolve()?;
    let rho = input.state.resolve()?;
    let cfg = ExperimentConfig::from_state(input.n_copies, seed, input.pipeline, approximate(&w)?, &rho)?;
    Ok(cfg.with_variance_reduction(input.variance_reduced))
}

pub fn simulate_json(input: &SimulateInput, seed: Option<u64>) -> Result<RunReport, CliError> {
    Ok(run_report(&simulation_config(input, seed)?)?)
}

pub fn simulate_csv(input: &SimulateInput, seed: Option<u64>) -> Result<Vec<u8>, CliError> {
    let cfg = simulation_config(input, seed)?;
    let batches = run_batches(&cfg, input.batch_size.unwrap_or(DEFAULT_BATCH))?;
    let mut out = Vec::new();
    write_batches_csv(&batches, &mut out).map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct OamReport {
    pub q: i32,
    pub upper: StateRecord,
    pub lower: StateRecord,
    pub branch_probability: [f64; 2],
    /// Fidelity between the two outputs once the lower sign flip is undone.
    pub branch_agreement: f64,
}

#[derive(Debug, Serialize)]
pub struct CircuitReport {
    pub x: [[f64; 2]; 4],
    pub probability: f64,
    pub fidelity: f64,
    pub trace: Vec<StepTrace>,
    pub joined: BTreeMap<String, [f64; 2]>,
    pub oam: OamReport,
}

pub fn circuit_verify(input: &CircuitInput, seed: Option<u64>) -> Result<CircuitReport, CliError> {
    let x: [C64; 4] = match (&input.x, seed) {
        (Some(x), _) => x.map(|[re, im]| C64::new(re, im)),
        (None, Some(seed)) => {
            let psi: PureState = random::pure_state(&mut ChaCha8Rng::seed_from_u64(seed), &[4]);
            std::array::from_fn(|i| psi.amplitudes()[i])
        }
        (None, None) => {
            return Err(CliError::Validation(
                "circuit-verify needs \"x\" in the config or a --seed".into(),
            ))
        }
    };
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CliError::Validation("x contains a non-finite amplitude".into()));
    }
    let out = quantum_join(&x)?;
    let fidelity = out.joined.fidelity(&joined_target(&x));
    consistent(
        "joining probability against 1/32",
        out.probability,
        1.0 / 32.0,
        JOIN_PROBABILITY_TOLERANCE,
    )?;
    consistent("joined-state fidelity", fidelity, 1.0, FIDELITY_TOLERANCE)?;
    let enc = oam_encode(&out.joined, input.q)?;
    let agreement = enc.upper.fidelity(&enc.lower_sign_corrected())?;
    consistent("OAM branch agreement", agreement, 1.0, FIDELITY_TOLERANCE)?;
    let joined = out
        .joined
        .fock()
        .terms()
        .map(|(key, amp)| (key[0].to_string(), pair(amp)))
        .collect();
    Ok(CircuitReport {
        x: x.map(pair),
        probability: out.probability,
        fidelity,
        trace: out.trace,
        joined,
        oam: OamReport {
            q: input.q,
            upper: (&enc.upper).into(),
            lower: (&enc.lower).into(),
            branch_probability: enc.branch_probability,
            branch_agreement: agreement,
        },
    })
}
