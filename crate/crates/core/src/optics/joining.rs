//! Post-selected joining of two polarization qubits into the polarization and
//! path of a single photon.
//!
//! Photons start in paths `b1` and `c` with an ancilla `H` photon in `a`.
//! After the plates and beam splitters, a horizontal click in both `a` and
//! `c` leaves `x₀|H_b1⟩ + x₁|V_b1⟩ + x₂|H_b2⟩ + x₃|V_b2⟩` with probability 1/32.

use super::{Circuit, Element, ModeLabel, OpticsError, PhotonicState, Polarization, Step, StepTrace};
use crate::C64;

pub const JOIN_PRESET: &str = "quantum-join-fig4";

pub const JOIN_PATHS: [&str; 4] = ["a", "b1", "b2", "c"];

/// The joining circuit, ending in the two heralding detectors.
///
/// The middle-layer plate in `b2` is the −22.5° plate, set here at 67.5°
/// (same optic axis, `V → (H + V)/√2`).
pub fn joining_circuit() -> Circuit {
    let q = 22.5;
    Circuit::new(vec![
        Step::labelled("HWP_{a,0}", Element::hwp("a", q)),
        Step::labelled("PBS_{a,c}", Element::pbs("a", "c")),
        Step::labelled("PBS_{b1,b2}", Element::pbs("b1", "b2")),
        Step::labelled("HWP_{a,1}", Element::hwp("a", q)),
        Step::labelled("HWP_{c,1}", Element::hwp("c", q)),
        Step::labelled("HWP_{b1,1}", Element::hwp("b1", q)),
        Step::labelled("HWP_{b2,1}", Element::hwp("b2", 67.5)),
        Step::labelled("PBS_{a,b1}", Element::pbs("a", "b1")),
        Step::labelled("PBS_{c,b2}", Element::pbs("c", "b2")),
        Step::labelled("HWP_{a,2}", Element::hwp("a", q)),
        Step::labelled("HWP_{c,2}", Element::hwp("c", q)),
        Step::labelled("HWP_{b1,2}", Element::hwp("b1", q)),
        Step::labelled("HWP_{b2,2}", Element::hwp("b2", q)),
        Step::labelled("D_a", Element::detector("a", Some(Polarization::H))),
        Step::labelled("D_c", Element::detector("c", Some(Polarization::H))),
    ])
}

/// `(x₀HH + x₁HV + x₂VH + x₃VV)_{b1,c} ⊗ H_a`.
pub fn joining_input(x: &[C64; 4]) -> PhotonicState {
    let mut fock = crate::fock::FockState::default();
    let pol = [Polarization::H, Polarization::V];
    for (k, amp) in x.iter().enumerate() {
        let modes = vec![
            ModeLabel::new("a", Polarization::H),
            ModeLabel::new("b1", pol[k / 2]),
            ModeLabel::new("c", pol[k % 2]),
        ];
        fock.insert(modes, *amp);
    }
    fock.prune(crate::tolerance::AMPLITUDE_PRUNE);
    PhotonicState::new(JOIN_PATHS, fock).expect("modes lie on the joining paths")
}

#[derive(Debug, Clone, PartialEq)]
pub struct JoinOutcome {
    /// Single photon on `b1`/`b2`, renormalized.
    pub joined: PhotonicState,
    pub probability: f64,
    pub trace: Vec<StepTrace>,
}

pub fn quantum_join(x: &[C64; 4]) -> Result<JoinOutcome, OpticsError> {
    let norm = x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
        return Err(OpticsError::NotNormalized(norm));
    }
    let run = joining_circuit().run(&joining_input(x))?;
    let branch = run
        .branches
        .into_iter()
        .next()
        .expect("both detectors are polarization resolved");
    Ok(JoinOutcome {
        joined: branch.state,
        probability: branch.probability,
        trace: run.trace,
    })
}

/// `x₀|H_b1⟩ + x₁|V_b1⟩ + x₂|H_b2⟩ + x₃|V_b2⟩`.
pub fn joined_target(x: &[C64; 4]) -> PhotonicState {
    let modes = [
        ModeLabel::new("b1", Polarization::H),
        ModeLabel::new("b1", Polarization::V),
        ModeLabel::new("b2", Polarization::H),
        ModeLabel::new("b2", Polarization::V),
    ];
    let form: Vec<(ModeLabel, C64)> = modes.into_iter().zip(x.iter().copied()).collect();
    PhotonicState::from_photons(["b1", "b2"], &[form]).expect("modes lie on b1/b2")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_inputs_land_on_their_modes() {
        for k in 0..4 {
            let mut x = [C64::new(0.0, 0.0); 4];
            x[k] = C64::new(1.0, 0.0);
            let out = quantum_join(&x).unwrap();
            assert!((out.probability - 1.0 / 32.0).abs() < 1e-12);
            assert!((out.joined.fidelity(&joined_target(&x)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let x = [
            C64::new(0.9, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        assert!(matches!(quantum_join(&x), Err(OpticsError::NotNormalized(_))));
    }
}
