mod common;

use common::ledger::{distance, form, ledger, random_x};
use homwit::fock::{FockState, LinearForm};
use homwit::optics::{
    apply, joined_target, joining_circuit, joining_input, oam_encode, post_select, quantum_join, Element, ModeLabel,
    OpticsError, PhotonicState, Polarization, JOIN_PATHS,
};
use homwit::C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn evolution_matches_printed_intermediate_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let x = random_x(&mut rng);
        let states = joining_circuit().evolve(&joining_input(&x)).unwrap();
        for (label, expected) in ledger(&x) {
            let (_, state) = states.iter().find(|(l, _)| l == label).unwrap();
            let d = distance(state.fock(), &expected);
            assert!(d < 1e-10, "{label}: distance {d:e}");
        }
    }
}

#[test]
fn all_four_heralded_branches_match_the_printed_table() {
    use Polarization::{H, V};
    // modes of x₀..x₃ in each branch
    let table = [
        ((H, H), ["H_b1", "V_b1", "H_b2", "V_b2"]),
        ((H, V), ["H_b1", "V_b1", "V_b2", "H_b2"]),
        ((V, H), ["V_b1", "H_b1", "H_b2", "V_b2"]),
        ((V, V), ["V_b1", "H_b1", "V_b2", "H_b2"]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = random_x(&mut rng);
    let run = joining_circuit().run(&joining_input(&x)).unwrap();
    for ((pa, pc), modes) in table {
        let sel = post_select(&run.output, &[("a", pa), ("c", pc)]).unwrap();
        assert!((sel.probability - 1.0 / 32.0).abs() < 1e-12);
        for (k, m) in modes.iter().enumerate() {
            let mode = form(m)[0].0.clone();
            assert!(
                (sel.state.amplitude(&[mode]) - x[k]).norm() < 1e-10,
                "branch {pa}{pc} x{k}"
            );
        }
    }
}

#[test]
fn joining_is_exact_for_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let x = random_x(&mut rng);
        let out = quantum_join(&x).unwrap();
        assert!((out.probability - 1.0 / 32.0).abs() < 1e-12);
        assert!(out.joined.fidelity(&joined_target(&x)) >= 1.0 - 1e-10);
        for step in &out.trace {
            assert!((step.norm_sqr - 1.0).abs() < 1e-12, "{}", step.label);
        }
    }
}

#[test]
fn joining_examples() {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let out = quantum_join(&[zero, zero, zero, one]).unwrap();
    assert!((out.joined.amplitude(&[ModeLabel::new("b2", Polarization::V)]).norm() - 1.0).abs() < 1e-12);
    let half = C64::new(0.5, 0.0);
    let out = quantum_join(&[half; 4]).unwrap();
    assert!((out.probability - 1.0 / 32.0).abs() < 1e-12);
    for (_, a) in out.joined.fock().terms() {
        assert!((a.norm() - 0.5).abs() < 1e-12);
    }
    assert!(matches!(
        quantum_join(&[C64::new(0.9, 0.0), zero, zero, zero]),
        Err(OpticsError::NotNormalized(_))
    ));
}

#[test]
fn heralding_on_h_v_swaps_the_b2_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = random_x(&mut rng);
    let run = joining_circuit().run(&joining_input(&x)).unwrap();
    let sel = post_select(&run.output, &[("a", Polarization::H), ("c", Polarization::V)]).unwrap();
    let swapped = [x[0], x[1], x[3], x[2]];
    assert!(sel.state.fidelity(&joined_target(&swapped)) > 1.0 - 1e-10);
}

#[test]
fn encoded_state_preserves_the_joined_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in [1, -2, 5] {
        let x = random_x(&mut rng);
        let joined = quantum_join(&x).unwrap().joined;
        let enc = oam_encode(&joined, q).unwrap();
        for p in enc.branch_probability {
            assert!((p - 0.5).abs() < 1e-12);
        }
        for state in [&enc.upper, &enc.lower_sign_corrected()] {
            let overlap: C64 = state.amplitudes().iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-10);
        }
        for (a, b) in enc.upper.amplitudes().iter().zip(&x) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}

#[test]
fn encoding_rejects_photons_outside_the_b_paths() {
    let s = PhotonicState::from_photons(JOIN_PATHS, &[form("H_a")]).unwrap();
    assert!(matches!(oam_encode(&s, 1), Err(OpticsError::UnsupportedInput(_))));
}

fn arbitrary_element() -> impl Strategy<Value = Element> {
    let path = prop::sample::select(vec!["a", "b1", "b2", "c"]);
    prop_oneof![
        (path.clone(), -180.0..180.0f64).prop_map(|(p, t)| Element::hwp(p, t)),
        (path.clone(), path.clone())
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(|(a, b)| Element::pbs(a, b)),
        (path, -4..4i32).prop_map(|(p, q)| Element::hologram(p, q)),
    ]
}

proptest! {
    #[test]
    fn unitary_elements_preserve_the_norm(
        elements in prop::collection::vec(arbitrary_element(), 1..12),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_x(&mut rng);
        let mut state = joining_input(&x);
        for e in &elements {
            state = apply(&state, e).unwrap();
            prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn beam_splitter_preserves_the_norm(seed in any::<u64>(), two_photons in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_x(&mut rng);
        let photon = |k: usize| -> LinearForm<ModeLabel> {
            let mut f = Vec::new();
            for (i, (path, pol)) in [("b1", Polarization::H), ("b1", Polarization::V), ("b2", Polarization::H), ("b2", Polarization::V)].into_iter().enumerate() {
                f.push((ModeLabel::new(path, pol), x[(i + k) % 4]));
            }
            f
        };
        let photons: Vec<_> = if two_photons { vec![photon(0), photon(1)] } else { vec![photon(0)] };
        let fock = FockState::from_creation_product(&photons);
        let n = fock.norm_sqr().sqrt();
        let mut fock = fock;
        fock.scale(C64::new(1.0 / n, 0.0));
        let state = PhotonicState::new(["b1", "b2", "c1", "c2"], fock).unwrap();
        let out = apply(&state, &Element::bs("b1", "b2", "c1", "c2")).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
