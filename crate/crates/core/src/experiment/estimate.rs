//! From coincidence counts to a witness estimate and a decision.
//!
//! With `N` copies and `N_c` coincidences per interferometer, `p_c = 4N_c/N`.
//! The two interferometers are summed, so `N_c` is half the total in the
//! two-interferometer pipeline and the lower count alone when the upper
//! outputs are dumped. Entanglement is declared when
//! `N_c > (N/8)(1 − p*/d²)`, equivalently when the reconstructed witness
//! expectation is negative.

use serde::{Deserialize, Serialize};

use super::{ExperimentCounts, ExperimentError, Pipeline};
use crate::witness::reconstruct_expectation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Entangled,
    NotDetected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionReport {
    /// Coincidences per interferometer, compared against the threshold.
    pub n_c: f64,
    pub p_c_hat: f64,
    pub f_ave_hat: f64,
    pub witness_expectation_hat: f64,
    pub std_error: f64,
    pub threshold_counts: f64,
    pub z_score: f64,
    pub decision: Decision,
}

/// `(N/8)(1 − p*/d²)`.
pub fn threshold_counts(n_copies: u64, p_star: f64, d: usize) -> f64 {
    n_copies as f64 / 8.0 * (1.0 - p_star / (d * d) as f64)
}

fn per_interferometer(counts: &ExperimentCounts, pipeline: Pipeline) -> f64 {
    counts.coincidences() as f64 / (4.0 * pipeline.interfering_fraction())
}

pub fn decide(counts: &ExperimentCounts, p_star: f64, d: usize, pipeline: Pipeline) -> Decision {
    let threshold = threshold_counts(counts.n_copies(), p_star, d);
    let slack = 1e-12 * threshold.abs().max(1.0);
    if per_interferometer(counts, pipeline) > threshold + slack {
        Decision::Entangled
    } else {
        Decision::NotDetected
    }
}

pub fn estimate(
    counts: &ExperimentCounts,
    p_star: f64,
    d: usize,
    pipeline: Pipeline,
) -> Result<DetectionReport, ExperimentError> {
    let n_copies = counts.n_copies();
    if n_copies == 0 {
        return Err(ExperimentError::NoCopies);
    }
    let n = n_copies as f64;
    let frac = pipeline.interfering_fraction();
    let n_c = per_interferometer(counts, pipeline);
    let p_c_hat = 4.0 * n_c / n;
    let f_ave_hat = 1.0 - 2.0 * p_c_hat;
    let witness_expectation_hat = reconstruct_expectation(f_ave_hat, p_star, d)?;

    // binomial error over all copies, add-one estimate at k = 0 or k = N
    let k = counts.coincidences() as f64;
    let mut q = k / n;
    if k == 0.0 || k == n {
        q = (k + 1.0) / (n + 2.0);
    }
    let se_p_c = (q * (1.0 - q) / n).sqrt() / frac;
    let std_error = 2.0 * se_p_c / (1.0 - p_star);

    let threshold = threshold_counts(n_copies, p_star, d);
    let z_score = (n_c - threshold) / (se_p_c * n / 4.0);
    Ok(DetectionReport {
        n_c,
        p_c_hat,
        f_ave_hat,
        witness_expectation_hat,
        std_error,
        threshold_counts: threshold,
        z_score,
        decision: decide(counts, p_star, d, pipeline),
    })
}
