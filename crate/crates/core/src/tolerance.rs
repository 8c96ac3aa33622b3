//! Numerical tolerances shared across modules.

/// Hermiticity, normalization and trace checks.
pub const STRUCTURE: f64 = 1e-12;

/// Spectral reconstructions and orthonormality.
pub const SPECTRAL: f64 = 1e-10;

/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as roundoff and clamped to zero
/// when a density matrix is built from a computed matrix.
pub const PSD_CLAMP: f64 = 1e-10;

/// Weights at or below this are dropped from eigen-ensembles.
pub const ENSEMBLE_WEIGHT: f64 = 1e-12;

/// Maximum elementwise residual accepted for a separable decomposition.
pub const DECOMPOSITION_RESIDUAL: f64 = 1e-6;

/// Absolute bracket width at which the separability bisection stops.
pub const BISECTION: f64 = 1e-9;

/// Amplitudes below this are pruned from photonic states after each element.
pub const AMPLITUDE_PRUNE: f64 = 1e-14;
