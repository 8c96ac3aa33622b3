mod common;

use common::*;
use homwit::quantum::{
    eigendecompose, ensemble_of, overlap, partial_transpose, partial_transpose_matrix, random, schmidt, DensityMatrix,
    Ensemble, PureState, QuantumError, Tensor,
};
use homwit::C64;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn tensor_of_basis_and_plus_states() {
    let zz = ket(0, &[2]).tensor(&ket(0, &[2]));
    assert_eq!(zz, ket(0, &[2, 2]));

    let plus = PureState::normalized(vec![c(1.0), c(1.0)], vec![2]).unwrap();
    let pp = plus.tensor(&plus);
    assert_eq!(pp.dims(), &[2, 2]);
    for a in pp.amplitudes().iter() {
        assert!((a - c(0.5)).norm() < 1e-15);
    }

    let half = DensityMatrix::maximally_mixed(vec![2]);
    let quarter = half.tensor(&half);
    assert!(max_abs_diff(quarter.matrix(), DensityMatrix::maximally_mixed(vec![2, 2]).matrix()) < 1e-15);
    assert_eq!(quarter.dims(), &[2, 2]);
}

#[test]
fn overlap_examples() {
    let bell = phi_plus().projector();
    assert!((overlap(&bell, &bell).unwrap() - 1.0).abs() < 1e-12);
    let zero = ket(0, &[2, 2]).projector();
    assert!((overlap(&zero, &bell).unwrap() - 0.5).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rho = random::density_matrix(&mut rng, &[2, 2], 3);
    let mixed = DensityMatrix::maximally_mixed(vec![2, 2]);
    assert!((overlap(&mixed, &rho).unwrap() - 0.25).abs() < 1e-12);
    let other = DensityMatrix::maximally_mixed(vec![3]);
    assert!(matches!(
        overlap(&mixed, &other),
        Err(QuantumError::DimensionMismatch { .. })
    ));
}

#[test]
fn eigendecompose_examples() {
    let s = eigendecompose(DensityMatrix::maximally_mixed(vec![2, 2]).matrix()).unwrap();
    assert!(s.values.iter().all(|l| (l - 0.25).abs() < 1e-12));

    let w = bell_witness();
    let s = eigendecompose(w.matrix()).unwrap();
    let expected = [-0.5, 0.5, 0.5, 0.5];
    for (l, e) in s.values.iter().zip(expected) {
        assert!((l - e).abs() < 1e-12);
    }
    assert!(max_abs_diff(&s.rebuild(), w.matrix()) < 1e-10);

    let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![c(3.0), c(1.0), c(2.0)]));
    let s = eigendecompose(&diag).unwrap();
    assert_eq!(s.values.len(), 3);
    for (k, (l, v)) in s.values.iter().zip(&s.vectors).enumerate() {
        assert!((l - (k + 1) as f64).abs() < 1e-12);
        // eigenvector of eigenvalue 1 is e1, of 2 is e2, of 3 is e0
        let idx = [1, 2, 0][k];
        assert!((v[idx].norm() - 1.0).abs() < 1e-12);
    }

    let mut skew = DMatrix::<C64>::identity(2, 2);
    skew[(0, 1)] = c(1.0);
    assert!(matches!(eigendecompose(&skew), Err(QuantumError::NotHermitian { .. })));
}

#[test]
fn eigenvectors_are_orthonormal() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2, 4, 9, 16] {
        let h = random::hermitian(&mut rng, n);
        let s = eigendecompose(&h).unwrap();
        for i in 0..n {
            for j in 0..n {
                let ip = s.vectors[i].dotc(&s.vectors[j]);
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c(e)).norm() < 1e-10);
            }
        }
        assert!(max_abs_diff(&s.rebuild(), &h) < 1e-10);
        assert!(s.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn partial_transpose_examples() {
    let mixed = DensityMatrix::maximally_mixed(vec![2, 2]);
    assert!(max_abs_diff(&partial_transpose(&mixed, 1).unwrap(), mixed.matrix()) < 1e-15);

    let pt = partial_transpose(&phi_plus().projector(), 1).unwrap();
    let s = eigendecompose(&pt).unwrap();
    for (l, e) in s.values.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
        assert!((l - e).abs() < 1e-12);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let wa = random::density_matrix(&mut rng, &[2], 2);
    let wb = random::density_matrix(&mut rng, &[3], 2);
    let pt = partial_transpose(&wa.tensor(&wb), 1).unwrap();
    let expected = wa.matrix().kronecker(&wb.matrix().transpose());
    assert!(max_abs_diff(&pt, &expected) < 1e-15);
    assert!(eigendecompose(&pt).unwrap().min() > -1e-12);

    assert!(matches!(
        partial_transpose(&mixed, 2),
        Err(QuantumError::SubsystemOutOfRange { index: 2, count: 2 })
    ));
}

#[test]
fn schmidt_examples() {
    let s = schmidt(&ket(0, &[2, 2]), 2, 2).unwrap();
    assert!((s.coefficients[0] - 1.0).abs() < 1e-12 && s.coefficients[1].abs() < 1e-12);

    let s = schmidt(&phi_plus(), 2, 2).unwrap();
    for c in &s.coefficients {
        assert!((c - 0.5f64.sqrt()).abs() < 1e-12);
    }

    let psi = PureState::new(vec![c(0.8f64.sqrt()), c(0.0), c(0.0), c(0.2f64.sqrt())], vec![2, 2]).unwrap();
    let s = schmidt(&psi, 2, 2).unwrap();
    assert!((s.coefficients[0] - 0.8f64.sqrt()).abs() < 1e-12);
    assert!((s.coefficients[1] - 0.2f64.sqrt()).abs() < 1e-12);

    assert!(matches!(
        schmidt(&ket(0, &[4]), 2, 2),
        Err(QuantumError::NotBipartite { .. })
    ));
}

#[test]
fn schmidt_reconstructs_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (da, db) in [(2, 2), (2, 3), (3, 3), (4, 2)] {
        let psi = random::pure_state(&mut rng, &[da, db]);
        let s = schmidt(&psi, da, db).unwrap();
        let total: f64 = s.coefficients.iter().map(|c| c * c).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((s.reconstruct() - psi.amplitudes()).camax() < 1e-10);
        assert!(s.coefficients.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn ensemble_of_examples() {
    let e = ensemble_of(&phi_plus().projector()).unwrap();
    assert_eq!(e.len(), 1);
    assert!((e.entries()[0].0 - 1.0).abs() < 1e-12);
    assert!(e.entries()[0].1.eq_up_to_phase(&phi_plus(), 1e-10));

    let e = ensemble_of(&DensityMatrix::maximally_mixed(vec![2, 2])).unwrap();
    assert_eq!(e.len(), 4);
    assert!(e.entries().iter().all(|(w, _)| (w - 0.25).abs() < 1e-12));

    let aew = DensityMatrix::new(bell_aew_matrix(), vec![2, 2]).unwrap();
    let e = ensemble_of(&aew).unwrap();
    assert_eq!(e.len(), 3);
    for (w, s) in e.entries() {
        assert!((w - 1.0 / 3.0).abs() < 1e-12);
        assert!(s.fidelity(&phi_plus()).unwrap() < 1e-12);
    }
    assert!(max_abs_diff(e.density_matrix().unwrap().matrix(), aew.matrix()) < 1e-10);
}

#[test]
fn density_matrix_validation() {
    let bad_trace = DMatrix::<C64>::identity(2, 2);
    assert!(matches!(
        DensityMatrix::new(bad_trace, vec![2]),
        Err(QuantumError::Trace { .. })
    ));

    let negative = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.1), c(-0.1)]));
    assert!(matches!(
        DensityMatrix::new(negative, vec![2]),
        Err(QuantumError::NotPositive { .. })
    ));

    // roundoff-level negativity is clamped
    let tiny = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0 + 5e-13), c(-5e-13)]));
    let rho = DensityMatrix::new(tiny, vec![2]).unwrap();
    assert!(eigendecompose(rho.matrix()).unwrap().min() >= 0.0);

    assert!(matches!(
        DensityMatrix::new(DMatrix::<C64>::identity(4, 4).unscale(4.0), vec![3]),
        Err(QuantumError::DimsProduct { .. })
    ));
    assert!(PureState::new(vec![c(1.0), c(1.0)], vec![2]).is_err());
}

/// Mixing the √p-weighted eigenvectors by a unitary gives another valid
/// ensemble of the same state.
fn mixed_ensemble(rho: &DensityMatrix, u: &DMatrix<C64>) -> Ensemble {
    let base = ensemble_of(rho).unwrap();
    let k = base.len();
    let d = rho.dim();
    let mut cols = Vec::new();
    for (w, s) in base.entries() {
        cols.push(s.amplitudes().scale(w.sqrt()));
    }
    let n = u.nrows();
    let mut entries = Vec::new();
    for i in 0..n {
        let mut v = DVector::<C64>::zeros(d);
        for (j, col) in cols.iter().enumerate().take(k) {
            v += col * u[(i, j)];
        }
        let p = v.norm_squared();
        if p > 1e-14 {
            let s = PureState::normalized(v.iter().cloned().collect(), rho.dims().to_vec()).unwrap();
            entries.push((p, s));
        }
    }
    let total: f64 = entries.iter().map(|(p, _)| p).sum();
    Ensemble::new(entries.into_iter().map(|(p, s)| (p / total, s)).collect()).unwrap()
}

fn ensemble_overlap(a: &Ensemble, b: &Ensemble) -> f64 {
    let mut t = 0.0;
    for (p, x) in a.entries() {
        for (q, y) in b.entries() {
            t += p * q * x.fidelity(y).unwrap();
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn overlap_is_decomposition_independent(seed in any::<u64>(), rank in 1usize..5, extra in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random::density_matrix(&mut rng, &[2, 2], rank);
        let sigma = random::density_matrix(&mut rng, &[2, 2], 4);
        let n_rho = ensemble_of(&rho).unwrap().len() + extra;
        let n_sigma = ensemble_of(&sigma).unwrap().len() + extra;
        let e_rho = mixed_ensemble(&rho, &random::unitary(&mut rng, n_rho));
        let e_sigma = mixed_ensemble(&sigma, &random::unitary(&mut rng, n_sigma));
        let direct = overlap(&rho, &sigma).unwrap();
        prop_assert!((ensemble_overlap(&e_rho, &e_sigma) - direct).abs() < 1e-10);
        prop_assert!((overlap(&sigma, &rho).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), da in 1usize..4, db in 1usize..4, sub in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random::density_matrix(&mut rng, &[da, db], 2);
        let once = partial_transpose(&rho, sub).unwrap();
        let twice = partial_transpose_matrix(&once, &[da, db], sub).unwrap();
        prop_assert_eq!(&twice, rho.matrix());
        prop_assert!((once.trace() - rho.matrix().trace()).norm() < 1e-14);
    }

    #[test]
    fn eigen_ensemble_reconstructs(seed in any::<u64>(), rank in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random::density_matrix(&mut rng, &[3, 3], rank);
        let rebuilt = ensemble_of(&rho).unwrap().density_matrix().unwrap();
        prop_assert!(max_abs_diff(rebuilt.matrix(), rho.matrix()) < 1e-10);
        let again = ensemble_of(&rebuilt).unwrap().density_matrix().unwrap();
        prop_assert!(max_abs_diff(again.matrix(), rebuilt.matrix()) < 1e-10);
    }
}
