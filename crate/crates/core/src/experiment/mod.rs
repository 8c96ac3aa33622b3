//! Monte Carlo runs of the counting experiment.
//!
//! Each copy sends one photon carrying ρ and one carrying W̃ through the
//! OAM merge, which routes every photon to the upper or lower interferometer
//! with probability 1/2. Photons that meet interfere on a 50:50 splitter and
//! give a coincidence with probability `(1 − |⟨φᵢ|Ψⱼ⟩|²)/2`. Copies whose
//! photons miss each other are discarded.

mod estimate;

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hom::coincidence_pure;
use crate::json::{ensemble_record, MatrixRecord, WeightedState};
use crate::quantum::{ensemble_of, overlap, DensityMatrix, Ensemble, QuantumError};
use crate::tolerance;
use crate::witness::{ApproxWitness, WitnessError};

pub use estimate::{decide, estimate, threshold_counts, Decision, DetectionReport};

/// Trials per parallel batch and per CSV row.
pub const DEFAULT_BATCH: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("W̃ ensemble deviates from the approximate witness by {0:e}")]
    EnsembleMismatch(f64),
    #[error("no copies were used")]
    NoCopies,
    #[error("batch size must be positive")]
    EmptyBatch,
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    /// Both merge outputs feed an interferometer; half the copies interfere.
    TwoInterferometers,
    /// Only the lower outputs are kept; a quarter of the copies interfere.
    SingleInterferometerDumped,
}

impl Pipeline {
    /// Expected fraction of copies whose photons meet.
    pub fn interfering_fraction(self) -> f64 {
        match self {
            Pipeline::TwoInterferometers => 0.5,
            Pipeline::SingleInterferometerDumped => 0.25,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    n_copies: u64,
    seed: u64,
    pipeline: Pipeline,
    witness: ApproxWitness,
    state_ensemble: Ensemble,
    aew_ensemble: Ensemble,
    variance_reduced: bool,
    /// `p_c` per (W̃ index, ρ index), row-major.
    table: Vec<f64>,
    mixed_p: f64,
}

impl ExperimentConfig {
    pub fn new(
        n_copies: u64,
        seed: u64,
        pipeline: Pipeline,
        witness: ApproxWitness,
        state_ensemble: Ensemble,
        aew_ensemble: Ensemble,
    ) -> Result<Self, ExperimentError> {
        let dims = witness.matrix.dims();
        for (name, e) in [("state", &state_ensemble), ("W̃", &aew_ensemble)] {
            if e.dims() != dims {
                return Err(ExperimentError::Dimension(format!(
                    "{name} ensemble has dims {:?}, witness has {:?}",
                    e.dims(),
                    dims
                )));
            }
        }
        let aew_rho = aew_ensemble.density_matrix()?;
        let deviation = (aew_rho.matrix() - witness.matrix.matrix()).camax();
        if deviation > tolerance::SPECTRAL {
            return Err(ExperimentError::EnsembleMismatch(deviation));
        }

        let mut table = Vec::with_capacity(aew_ensemble.len() * state_ensemble.len());
        for (_, phi) in aew_ensemble.entries() {
            for (_, psi) in state_ensemble.entries() {
                table.push(
                    coincidence_pure(phi, psi)
                        .map_err(|e| ExperimentError::Dimension(e.to_string()))?
                        .p_coincidence,
                );
            }
        }
        let rho = state_ensemble.density_matrix()?;
        let mixed_p = (1.0 - overlap(&rho, &witness.matrix)?) / 2.0;
        Ok(Self {
            n_copies,
            seed,
            pipeline,
            witness,
            state_ensemble,
            aew_ensemble,
            variance_reduced: false,
            table,
            mixed_p,
        })
    }

    /// Builds both ensembles from eigendecompositions.
    pub fn from_state(
        n_copies: u64,
        seed: u64,
        pipeline: Pipeline,
        witness: ApproxWitness,
        rho: &DensityMatrix,
    ) -> Result<Self, ExperimentError> {
        let state_ensemble = ensemble_of(rho)?;
        let aew_ensemble = ensemble_of(&witness.matrix)?;
        Self::new(n_copies, seed, pipeline, witness, state_ensemble, aew_ensemble)
    }

    /// Uses the mixed-state `p_c` on every interfering copy instead of
    /// sampling ensemble members.
    pub fn with_variance_reduction(mut self, on: bool) -> Self {
        self.variance_reduced = on;
        self
    }

    pub fn with_n_copies(mut self, n: u64) -> Self {
        self.n_copies = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn n_copies(&self) -> u64 {
        self.n_copies
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn pipeline(&self) -> Pipeline {
        self.pipeline
    }

    pub fn witness(&self) -> &ApproxWitness {
        &self.witness
    }

    pub fn state_ensemble(&self) -> &Ensemble {
        &self.state_ensemble
    }

    pub fn aew_ensemble(&self) -> &Ensemble {
        &self.aew_ensemble
    }

    pub fn variance_reduced(&self) -> bool {
        self.variance_reduced
    }

    /// Expected `p_c = (1 − tr[ρW̃])/2`.
    pub fn expected_p_coincidence(&self) -> f64 {
        self.mixed_p
    }

    pub fn record(&self) -> ConfigRecord {
        ConfigRecord {
            n_copies: self.n_copies,
            seed: self.seed,
            pipeline: self.pipeline,
            variance_reduced: self.variance_reduced,
            p_star: self.witness.p_star,
            witness: MatrixRecord::new(self.witness.source.matrix(), self.witness.source.dims()),
            aew: (&self.witness.matrix).into(),
            state_ensemble: ensemble_record(&self.state_ensemble),
            aew_ensemble: ensemble_record(&self.aew_ensemble),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigRecord {
    pub n_copies: u64,
    pub seed: u64,
    pub pipeline: Pipeline,
    pub variance_reduced: bool,
    pub p_star: f64,
    pub witness: MatrixRecord,
    pub aew: MatrixRecord,
    pub state_ensemble: Vec<WeightedState>,
    pub aew_ensemble: Vec<WeightedState>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Routing {
    Upper,
    Lower,
    Discard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub routing: Routing,
    pub coincidence: bool,
}

/// One copy through the merge and the interferometers.
pub fn run_trial<R: Rng + ?Sized>(rng: &mut R, cfg: &ExperimentConfig) -> TrialOutcome {
    let p = if cfg.variance_reduced {
        cfg.mixed_p
    } else {
        let i = cfg.aew_ensemble.sample_index(rng);
        let j = cfg.state_ensemble.sample_index(rng);
        cfg.table[i * cfg.state_ensemble.len() + j]
    };
    let rho_lower: bool = rng.random();
    let aew_lower: bool = rng.random();
    let routing = match (rho_lower, aew_lower, cfg.pipeline) {
        (true, true, _) => Routing::Lower,
        (false, false, Pipeline::TwoInterferometers) => Routing::Upper,
        _ => Routing::Discard,
    };
    let coincidence = routing != Routing::Discard && rng.random::<f64>() < p;
    TrialOutcome { routing, coincidence }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentCounts {
    pub n_used: u64,
    pub n_c_upper: u64,
    pub n_c_lower: u64,
    pub n_discarded: u64,
}

impl ExperimentCounts {
    pub fn n_copies(&self) -> u64 {
        self.n_used + self.n_discarded
    }

    /// Coincidences summed over both interferometers.
    pub fn coincidences(&self) -> u64 {
        self.n_c_upper + self.n_c_lower
    }

    fn record(&mut self, t: TrialOutcome) {
        match t.routing {
            Routing::Discard => self.n_discarded += 1,
            Routing::Upper => {
                self.n_used += 1;
                self.n_c_upper += u64::from(t.coincidence);
            }
            Routing::Lower => {
                self.n_used += 1;
                self.n_c_lower += u64::from(t.coincidence);
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.n_used += other.n_used;
        self.n_c_upper += other.n_c_upper;
        self.n_c_lower += other.n_c_lower;
        self.n_discarded += other.n_discarded;
        self
    }
}

/// Counts of one contiguous block of trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BatchCounts {
    pub batch: u64,
    pub first_trial: u64,
    pub trials: u64,
    pub n_used: u64,
    pub n_c_upper: u64,
    pub n_c_lower: u64,
    pub n_discarded: u64,
}

impl BatchCounts {
    pub fn counts(&self) -> ExperimentCounts {
        ExperimentCounts {
            n_used: self.n_used,
            n_c_upper: self.n_c_upper,
            n_c_lower: self.n_c_lower,
            n_discarded: self.n_discarded,
        }
    }
}

/// Trial `k` draws from stream `k` of the ChaCha generator keyed by the seed,
/// so results do not depend on how trials are grouped.
fn trial_block(base: &ChaCha8Rng, cfg: &ExperimentConfig, start: u64, end: u64) -> ExperimentCounts {
    let mut counts = ExperimentCounts::default();
    for k in start..end {
        let mut rng = base.clone();
        rng.set_stream(k);
        rng.set_word_pos(0);
        counts.record(run_trial(&mut rng, cfg));
    }
    counts
}

pub fn run_batches(cfg: &ExperimentConfig, batch_size: u64) -> Result<Vec<BatchCounts>, ExperimentError> {
    if batch_size == 0 {
        return Err(ExperimentError::EmptyBatch);
    }
    let base = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n_batches = cfg.n_copies.div_ceil(batch_size);
    Ok((0..n_batches)
        .into_par_iter()
        .map(|b| {
            let start = b * batch_size;
            let end = (start + batch_size).min(cfg.n_copies);
            let c = trial_block(&base, cfg, start, end);
            BatchCounts {
                batch: b,
                first_trial: start,
                trials: end - start,
                n_used: c.n_used,
                n_c_upper: c.n_c_upper,
                n_c_lower: c.n_c_lower,
                n_discarded: c.n_discarded,
            }
        })
        .collect())
}

pub fn run_experiment(cfg: &ExperimentConfig) -> ExperimentCounts {
    run_batches(cfg, DEFAULT_BATCH)
        .expect("default batch size is positive")
        .iter()
        .fold(ExperimentCounts::default(), |acc, b| acc.merge(b.counts()))
}

pub fn write_batches_csv<W: Write>(batches: &[BatchCounts], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for b in batches {
        w.serialize(b)?;
    }
    w.flush()?;
    Ok(())
}

/// The full run report: configuration, raw counts and the estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ConfigRecord,
    pub counts: ExperimentCounts,
    pub report: DetectionReport,
}

pub fn run_report(cfg: &ExperimentConfig) -> Result<RunReport, ExperimentError> {
    let counts = run_experiment(cfg);
    let d = cfg.witness.local_dim().ok_or_else(|| {
        ExperimentError::Dimension(format!("witness dims {:?} are not [d, d]", cfg.witness.source.dims()))
    })?;
    let report = estimate(&counts, cfg.witness.p_star, d, cfg.pipeline)?;
    Ok(RunReport {
        config: cfg.record(),
        counts,
        report,
    })
}
