//! Entanglement detection by overlap estimation.
//!
//! A witness `W` is mapped to a positive operator `W̃ = (1-p*)W + p*·𝟙/D`,
//! whose overlap `tr[ρW̃]` with an unknown state can be read off from the
//! coincidence rate of a single Hong-Ou-Mandel interferometer. The crate
//! bundles the pieces needed to study that pipeline numerically:
//!
//! - [`quantum`]: dense states, density matrices, ensembles and the linear
//!   algebra they need (Kronecker products, partial transpose, Schmidt form).
//! - [`witness`]: projector witnesses, the approximate and separable
//!   approximate witnesses, and the expectation reconstruction.
//! - [`hom`]: two-photon coincidence probabilities, closed form and a
//!   creation-operator expansion that checks it.
//! - [`optics`]: amplitude-level simulation of the polarization joining
//!   circuit and the OAM path-erasure stage.
//! - [`experiment`]: seeded Monte Carlo runs of the counting experiment,
//!   the count estimator and the decision rule.

pub mod experiment;
pub mod fock;
pub mod hom;
pub mod json;
pub mod optics;
pub mod quantum;
pub mod tolerance;
pub mod witness;

pub use num_complex::Complex64 as C64;
