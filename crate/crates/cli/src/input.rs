//! Input documents for each command and the built-in presets.
//!
//! A witness is given as a matrix record, a target state record (whose
//! projector witness is used) or a name. A state is a density matrix record,
//! a pure state record or a name.

use std::path::Path;

use clap::ValueEnum;
use homwit::experiment::Pipeline;
use homwit::json::{DecompositionRecord, MatrixRecord, StateRecord};
use homwit::quantum::{DensityMatrix, PureState};
use homwit::witness::{projector_witness, Witness};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    #[value(name = "bell-witness")]
    BellWitness,
    #[value(name = "quantum-join-fig4")]
    QuantumJoin,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum WitnessSpec {
    Named(String),
    Matrix(MatrixRecord),
    Target(StateRecord),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Named(String),
    Density(MatrixRecord),
    Pure(StateRecord),
}

fn default_ensemble_size() -> usize {
    2000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessInput {
    pub witness: WitnessSpec,
    #[serde(default)]
    pub decompose: bool,
    #[serde(default = "default_ensemble_size")]
    pub ensemble_size: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactInput {
    pub witness: WitnessSpec,
    pub state: StateSpec,
    #[serde(default)]
    pub decomposition: Option<DecompositionRecord>,
}

fn default_pipeline() -> Pipeline {
    Pipeline::TwoInterferometers
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateInput {
    pub witness: WitnessSpec,
    pub state: StateSpec,
    pub n_copies: u64,
    #[serde(default = "default_pipeline")]
    pub pipeline: Pipeline,
    #[serde(default)]
    pub variance_reduced: bool,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub batch_size: Option<u64>,
}

fn default_q() -> i32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitInput {
    /// Amplitudes of `HH, HV, VH, VV` as `[re, im]` pairs; drawn at random from
    /// the seed when absent.
    #[serde(default)]
    pub x: Option<[[f64; 2]; 4]>,
    #[serde(default = "default_q")]
    pub q: i32,
}

impl CircuitInput {
    /// No amplitudes, so they are drawn from the seed.
    pub fn random() -> Self {
        Self {
            x: None,
            q: default_q(),
        }
    }
}

fn preset_document(preset: Preset, command: &str) -> Result<Value, CliError> {
    let doc = match (preset, command) {
        (Preset::BellWitness, "witness") => json!({ "witness": "bell-witness", "decompose": true }),
        (Preset::BellWitness, "exact") => json!({ "witness": "bell-witness", "state": "phi-plus" }),
        (Preset::BellWitness, "simulate") => {
            json!({ "witness": "bell-witness", "state": "phi-plus", "n_copies": 1_000_000 })
        }
        (Preset::QuantumJoin, "circuit-verify") => {
            json!({ "x": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]], "q": 1 })
        }
        _ => {
            let name = preset
                .to_possible_value()
                .expect("no skipped variants")
                .get_name()
                .to_owned();
            return Err(CliError::Validation(format!(
                "preset {name} does not apply to {command}"
            )));
        }
    };
    Ok(doc)
}

/// Reads the command document from `--config`, or from `--preset` when no file is given.
pub fn load<T: DeserializeOwned>(config: Option<&Path>, preset: Option<Preset>, command: &str) -> Result<T, CliError> {
    let doc = match (config, preset) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation(
                "--config and --preset are mutually exclusive".into(),
            ))
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("parse error in {}: {e}", path.display())))?
        }
        (None, Some(p)) => preset_document(p, command)?,
        (None, None) => return Err(CliError::Validation(format!("{command} needs --config or --preset"))),
    };
    serde_json::from_value(doc).map_err(|e| CliError::Validation(format!("invalid {command} document: {e}")))
}

fn named_state(name: &str) -> Result<DensityMatrix, CliError> {
    match name {
        "phi-plus" => Ok(PureState::maximally_entangled(2).projector()),
        "maximally-mixed" => Ok(DensityMatrix::maximally_mixed(vec![2, 2])),
        "product-00" => Ok(PureState::basis(0, vec![2, 2])?.projector()),
        other => Err(CliError::Validation(format!(
            "unknown state {other:?} (expected phi-plus, maximally-mixed or product-00)"
        ))),
    }
}

impl WitnessSpec {
    pub fn resolve(&self) -> Result<Witness, CliError> {
        match self {
            WitnessSpec::Named(name) if name == "bell-witness" || name == "phi-plus" => {
                Ok(projector_witness(&PureState::maximally_entangled(2))?)
            }
            WitnessSpec::Named(name) if name == "product-00" => {
                Ok(projector_witness(&PureState::basis(0, vec![2, 2])?)?)
            }
            WitnessSpec::Named(other) => Err(CliError::Validation(format!(
                "unknown witness {other:?} (expected bell-witness or a target state name)"
            ))),
            WitnessSpec::Matrix(rec) => Ok(Witness::new(rec.to_matrix()?, rec.dims.clone())?),
            WitnessSpec::Target(rec) => Ok(projector_witness(&rec.to_state()?)?),
        }
    }
}

impl StateSpec {
    pub fn resolve(&self) -> Result<DensityMatrix, CliError> {
        match self {
            StateSpec::Named(name) => named_state(name),
            StateSpec::Density(rec) => Ok(rec.to_density()?),
            StateSpec::Pure(rec) => Ok(rec.to_state()?.projector()),
        }
    }
}
