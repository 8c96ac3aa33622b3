#![allow(dead_code)]

pub mod ledger;

use homwit::quantum::{random, DensityMatrix, PureState, Tensor};
use homwit::witness::{projector_witness, Witness};
use homwit::C64;
use nalgebra::DMatrix;
use rand::Rng;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn phi_plus() -> PureState {
    PureState::maximally_entangled(2)
}

pub fn ket(i: usize, dims: &[usize]) -> PureState {
    PureState::basis(i, dims.to_vec()).unwrap()
}

/// 𝟙/2 − |Φ⁺⟩⟨Φ⁺| on two qubits.
pub fn bell_witness() -> Witness {
    projector_witness(&phi_plus()).unwrap()
}

/// (𝟙 − |Φ⁺⟩⟨Φ⁺|)/3.
pub fn bell_aew_matrix() -> DMatrix<C64> {
    let p = phi_plus().projector();
    (DMatrix::<C64>::identity(4, 4) - p.matrix()).unscale(3.0)
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).camax()
}

/// Genuine random witness on [d, d]: either a projector witness of a random
/// entangled state or the partial transpose of a random entangled projector,
/// mixed with a little positive noise while a negative eigenvalue remains.
pub fn random_witness<R: Rng>(rng: &mut R, d: usize) -> Witness {
    loop {
        let target = random::pure_state(rng, &[d, d]);
        let base = if rng.random_bool(0.5) {
            match projector_witness(&target) {
                Ok(w) => w.matrix().clone(),
                Err(_) => continue,
            }
        } else {
            homwit::quantum::partial_transpose(&target.projector(), 1).unwrap()
        };
        let noise = random::density_matrix(rng, &[d, d], d * d);
        let t: f64 = rng.random_range(0.0..0.3);
        let m = base.scale(1.0 - t) + noise.matrix().scale(t);
        if let Ok(w) = Witness::new(m, vec![d, d]) {
            return w;
        }
    }
}

pub fn product_projector(a: &PureState, b: &PureState) -> DensityMatrix {
    a.tensor(b).projector()
}
