//! Seeded random states for tests, property checks and the CLI.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, PureState};
use crate::C64;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> PureState {
    let d: usize = dims.iter().product();
    let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    PureState::normalized(v, dims.to_vec()).expect("gaussian vector is nonzero")
}

/// Haar-random product state `|a⟩⊗|b⟩` on `[d_a, d_b]`.
pub fn product_state<R: Rng + ?Sized>(rng: &mut R, d_a: usize, d_b: usize) -> (PureState, PureState) {
    (pure_state(rng, &[d_a]), pure_state(rng, &[d_b]))
}

/// Induced-measure mixed state `GG†/tr[GG†]` with a `D × rank` Ginibre `G`.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], rank: usize) -> DensityMatrix {
    let d: usize = dims.iter().product();
    let g = DMatrix::from_fn(d, rank.max(1), |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.unscale(tr), dims.to_vec()).expect("Ginibre product is a state")
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase fix on R's diagonal.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Random complex vector with independent standard normal components.
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<C64> {
    DVector::from_fn(n, |_, _| gaussian(rng))
}

/// Random Hermitian matrix with standard normal entries (GUE-like, unnormalized).
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    (&g + g.adjoint()).scale(0.5)
}
