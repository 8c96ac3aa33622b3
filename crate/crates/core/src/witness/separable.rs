//! Separable approximate witnesses and their product-state decompositions.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{approximate, minimal_feasible, nnls, Witness, WitnessError};
use crate::quantum::{eigendecompose, partial_transpose_matrix, random, DensityMatrix, QuantumError, Tensor};
use crate::tolerance;
use crate::C64;

/// Eigenvalue floor for the positivity tests inside the bisection.
const PSD_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeparabilityMode {
    /// PPT is equivalent to separability (`d_A·d_B ≤ 6`).
    #[serde(rename = "exact")]
    Exact,
    /// PPT only bounds the separable threshold from below.
    #[serde(rename = "ppt-lower-bound")]
    PptLowerBound,
}

#[derive(Debug, Clone)]
pub struct ProductTerm {
    pub weight: f64,
    pub a: DensityMatrix,
    pub b: DensityMatrix,
}

/// `Σₖ pₖ wₖ^(A) ⊗ wₖ^(B)`.
#[derive(Debug, Clone)]
pub struct SeparableDecomposition {
    pub terms: Vec<ProductTerm>,
    /// Max elementwise deviation from the matrix it was fitted to.
    pub residual: f64,
}

impl SeparableDecomposition {
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let t0 = &self.terms[0];
        let d = t0.a.dim() * t0.b.dim();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for t in &self.terms {
            m += t.a.tensor(&t.b).matrix().scale(t.weight);
        }
        m
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.terms[0].a.dim(), self.terms[0].b.dim()]
    }
}

#[derive(Debug, Clone)]
pub struct SeparableApproxWitness {
    pub source: Witness,
    pub p_star: f64,
    pub p_s: f64,
    pub mode: SeparabilityMode,
    pub matrix: DensityMatrix,
    pub decomposition: Option<SeparableDecomposition>,
}

impl SeparableApproxWitness {
    /// Attaches a decomposition after checking that it reconstructs the matrix.
    pub fn with_decomposition(mut self, dec: SeparableDecomposition) -> Result<Self, WitnessError> {
        let total: f64 = dec.terms.iter().map(|t| t.weight).sum();
        if (total - 1.0).abs() > tolerance::STRUCTURE {
            return Err(WitnessError::InvalidParameter(format!("weights sum to {total}")));
        }
        let residual = (dec.reconstruct() - self.matrix.matrix()).camax();
        if residual >= tolerance::DECOMPOSITION_RESIDUAL {
            return Err(WitnessError::InvalidDecomposition { residual });
        }
        self.decomposition = Some(dec);
        Ok(self)
    }
}

fn is_psd(m: &DMatrix<C64>) -> bool {
    eigendecompose(m).map(|s| s.min() >= -PSD_FLOOR).unwrap_or(false)
}

/// Smallest `p_s` (bisection to 1e-9) such that `(1 − p)W + p·𝟙/D` is both
/// positive and has a positive partial transpose.
pub fn separable_approximate(w: &Witness) -> Result<SeparableApproxWitness, WitnessError> {
    let aew = approximate(w)?;
    let dims = w.dims().to_vec();
    let mode = if dims[0] * dims[1] <= 6 {
        SeparabilityMode::Exact
    } else {
        SeparabilityMode::PptLowerBound
    };
    let feasible = |p: f64| {
        let m = w.noisy(p);
        is_psd(&m)
            && partial_transpose_matrix(&m, &dims, 1)
                .map(|pt| is_psd(&pt))
                .unwrap_or(false)
    };
    let p_s = minimal_feasible(0.0, 1.0, tolerance::BISECTION, feasible)?;
    let matrix = DensityMatrix::new(w.noisy(p_s), dims)?;
    Ok(SeparableApproxWitness {
        source: w.clone(),
        p_star: aew.p_star,
        p_s,
        mode,
        matrix,
        decomposition: None,
    })
}

/// Search parameters for [`decompose_separable`].
#[derive(Debug, Clone, Copy)]
pub struct DecompositionConfig {
    /// Random product states drawn per attempt.
    pub ensemble_size: usize,
    /// Attempts, each with fresh product states.
    pub restarts: usize,
    /// Column-generation rounds per attempt after the initial random fit.
    pub refinement_rounds: usize,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        Self {
            ensemble_size: 2000,
            restarts: 5,
            refinement_rounds: 300,
        }
    }
}

/// Real coordinates of a Hermitian matrix in which the Euclidean norm is the
/// Frobenius norm.
fn hermitian_coordinates(m: &DMatrix<C64>) -> DVector<f64> {
    let n = m.nrows();
    let mut v = Vec::with_capacity(n * n);
    for i in 0..n {
        v.push(m[(i, i)].re);
    }
    let s = std::f64::consts::SQRT_2;
    for i in 0..n {
        for j in i + 1..n {
            v.push(s * m[(i, j)].re);
            v.push(s * m[(i, j)].im);
        }
    }
    DVector::from_vec(v)
}

/// Product pure state `|a⟩⊗|b⟩` kept as its two local vectors.
#[derive(Debug, Clone)]
struct Atom {
    a: DVector<C64>,
    b: DVector<C64>,
}

impl Atom {
    fn projector(&self) -> DMatrix<C64> {
        let v = self.a.kronecker(&self.b);
        &v * v.adjoint()
    }
}

/// `(𝟙 ⊗ ⟨b|) R (𝟙 ⊗ |b⟩)`.
fn contract_right(r: &DMatrix<C64>, b: &DVector<C64>, da: usize) -> DMatrix<C64> {
    let db = b.len();
    DMatrix::from_fn(da, da, |i, k| {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..db {
            for l in 0..db {
                acc += b[j].conj() * r[(i * db + j, k * db + l)] * b[l];
            }
        }
        acc
    })
}

/// `(⟨a| ⊗ 𝟙) R (|a⟩ ⊗ 𝟙)`.
fn contract_left(r: &DMatrix<C64>, a: &DVector<C64>, db: usize) -> DMatrix<C64> {
    let da = a.len();
    DMatrix::from_fn(db, db, |j, l| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..da {
            for k in 0..da {
                acc += a[i].conj() * r[(i * db + j, k * db + l)] * a[k];
            }
        }
        acc
    })
}

fn top_eigenvector(m: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let s = eigendecompose(&(m + m.adjoint()).scale(0.5)).expect("Hermitian by construction");
    (s.max(), s.vectors.last().unwrap().clone())
}

/// Locally maximizes `⟨ab|R|ab⟩` over product states by alternating
/// eigenvector updates from a random start.
fn best_product_direction(r: &DMatrix<C64>, da: usize, db: usize, rng: &mut ChaCha8Rng) -> (f64, Atom) {
    let mut b = random::pure_state(rng, &[db]).amplitudes().clone();
    let mut a = top_eigenvector(&contract_right(r, &b, da)).1;
    let mut value = f64::NEG_INFINITY;
    for _ in 0..50 {
        let (vb, nb) = top_eigenvector(&contract_left(r, &a, db));
        b = nb;
        let (va, na) = top_eigenvector(&contract_right(r, &b, da));
        a = na;
        let converged = (va - value).abs() <= 1e-15 * va.abs().max(1.0);
        value = va.max(vb);
        if converged {
            break;
        }
    }
    (value, Atom { a, b })
}

fn fit(atoms: &[Atom], target: &DVector<f64>) -> DVector<f64> {
    let columns: Vec<DVector<f64>> = atoms.iter().map(|at| hermitian_coordinates(&at.projector())).collect();
    nnls(&DMatrix::from_columns(&columns), target)
}

fn assemble(atoms: &[Atom], x: &DVector<f64>, target: &DMatrix<C64>) -> Option<SeparableDecomposition> {
    let total: f64 = x.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let local = |v: &DVector<C64>| {
        let m = v * v.adjoint();
        DensityMatrix::from_parts_unchecked(m, vec![v.len()])
    };
    let terms: Vec<ProductTerm> = x
        .iter()
        .zip(atoms)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, at)| ProductTerm {
            weight: w / total,
            a: local(&at.a),
            b: local(&at.b),
        })
        .collect();
    let mut dec = SeparableDecomposition { terms, residual: 0.0 };
    dec.residual = (dec.reconstruct() - target).camax();
    Some(dec)
}

/// Fits `target` by a nonnegative mixture of product pure states.
///
/// A target that is diagonal in the local product basis is decomposed directly
/// into basis projectors. Otherwise each restart draws `ensemble_size` Haar
/// product states and solves a nonnegative least-squares fit. The fit is then
/// refined by column generation: the product states most aligned with the
/// current residual are added and the fit is re-solved. Once the fit is close,
/// the product factors of the support are polished by Gauss-Newton. The first
/// mixture matching `target` to 1e-6 elementwise wins. Failure is reported as [`WitnessError::DecompositionNotFound`],
/// which says nothing about whether the target is entangled.
pub fn decompose_separable(
    target: &DensityMatrix,
    config: DecompositionConfig,
    seed: u64,
) -> Result<SeparableDecomposition, WitnessError> {
    let dims = target.dims();
    if dims.len() != 2 {
        return Err(WitnessError::NotBipartite(dims.to_vec()));
    }
    let (da, db) = (dims[0], dims[1]);
    let m = target.matrix();

    if let Some(dec) = diagonal_decomposition(m, da, db) {
        return Ok(dec);
    }

    let b = hermitian_coordinates(m);
    let mut best: Option<SeparableDecomposition> = None;
    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64);
        let mut atoms: Vec<Atom> = (0..config.ensemble_size)
            .map(|_| {
                let (a, b) = random::product_state(&mut rng, da, db);
                Atom {
                    a: a.amplitudes().clone(),
                    b: b.amplitudes().clone(),
                }
            })
            .collect();

        for _ in 0..=config.refinement_rounds {
            let x = fit(&atoms, &b);
            let Some(dec) = assemble(&atoms, &x, m) else { break };
            if best.as_ref().is_none_or(|b| dec.residual < b.residual) {
                best = Some(dec);
            }
            // keep the support, then add the best-aligned product directions
            let mut residual = m.clone();
            let mut support = Vec::new();
            for (w, at) in x.iter().zip(&atoms) {
                if *w > 0.0 {
                    residual -= at.projector().scale(*w);
                    support.push((*w, at.clone()));
                }
            }
            if residual.camax() < POLISH_START {
                if let Some(dec) = polish(&support, m) {
                    if dec.residual < tolerance::DECOMPOSITION_RESIDUAL {
                        return Ok(dec);
                    }
                }
            }
            let before = support.len();
            for _ in 0..PRICING_STARTS {
                let (value, atom) = best_product_direction(&residual, da, db, &mut rng);
                if value > PRICING_FLOOR {
                    support.push((0.0, atom));
                }
            }
            if support.len() == before {
                break;
            }
            atoms = support.into_iter().map(|(_, at)| at).collect();
        }
        if let Some(dec) = best.as_ref().filter(|d| d.residual < tolerance::DECOMPOSITION_RESIDUAL) {
            return Ok(dec.clone());
        }
    }
    let residual = best.map_or(f64::INFINITY, |d| d.residual);
    Err(WitnessError::DecompositionNotFound { residual })
}

/// Fit residual below which Gauss-Newton polishing of the support is attempted.
const POLISH_START: f64 = 1e-2;

/// Gauss-Newton on the unnormalized factors of `Σₖ (uₖuₖ†) ⊗ (vₖvₖ†) = target`.
///
/// Writing each term through unnormalized vectors keeps every iterate a
/// separable operator with nonnegative weight `‖uₖ‖²‖vₖ‖²`, so no constraint
/// handling is needed. Steps are Levenberg-Marquardt damped minimum-norm
/// solutions of the underdetermined linearization.
fn polish(support: &[(f64, Atom)], target: &DMatrix<C64>) -> Option<SeparableDecomposition> {
    let (da, db) = (support[0].1.a.len(), support[0].1.b.len());
    let per_term = 2 * (da + db);
    let mut theta: Vec<C64> = Vec::with_capacity(support.len() * (da + db));
    for (w, at) in support {
        theta.extend(at.a.iter().map(|z| z * w.sqrt()));
        theta.extend(at.b.iter().copied());
    }
    let unpack = |theta: &[C64], k: usize| {
        let base = k * (da + db);
        (
            DVector::from_column_slice(&theta[base..base + da]),
            DVector::from_column_slice(&theta[base + da..base + da + db]),
        )
    };
    let residual_of = |theta: &[C64]| {
        let mut r = -target.clone();
        for k in 0..support.len() {
            let (u, v) = unpack(theta, k);
            let w = u.kronecker(&v);
            r += &w * w.adjoint();
        }
        r
    };

    let mut r = residual_of(&theta);
    let mut cost = hermitian_coordinates(&r).norm_squared();
    let mut damping = 1e-6;
    for _ in 0..POLISH_ITERATIONS {
        if r.camax() < POLISH_TARGET {
            break;
        }
        let mut columns = Vec::with_capacity(support.len() * per_term);
        for k in 0..support.len() {
            let (u, v) = unpack(&theta, k);
            let w = u.kronecker(&v);
            for unit in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                for i in 0..da {
                    let mut du = DVector::zeros(da);
                    du[i] = unit;
                    let dw = du.kronecker(&v);
                    columns.push(hermitian_coordinates(&(&dw * w.adjoint() + &w * dw.adjoint())));
                }
                for j in 0..db {
                    let mut dv = DVector::zeros(db);
                    dv[j] = unit;
                    let dw = u.kronecker(&dv);
                    columns.push(hermitian_coordinates(&(&dw * w.adjoint() + &w * dw.adjoint())));
                }
            }
        }
        // parameter order in `columns`: per term, real parts of (u, v) then imaginary parts
        let jac = DMatrix::from_columns(&columns);
        let rv = hermitian_coordinates(&r);
        let jjt = &jac * jac.transpose();
        let mut improved = false;
        for _ in 0..20 {
            let mut lhs = jjt.clone();
            for i in 0..lhs.nrows() {
                lhs[(i, i)] += damping;
            }
            let Some(y) = lhs.cholesky().map(|c| c.solve(&rv)) else {
                damping *= 10.0;
                continue;
            };
            let step = -(jac.transpose() * y);
            let mut trial = theta.clone();
            for k in 0..support.len() {
                let base = k * (da + db);
                let sbase = k * per_term;
                for i in 0..da + db {
                    trial[base + i] += C64::new(step[sbase + i], step[sbase + da + db + i]);
                }
            }
            let tr = residual_of(&trial);
            let tcost = hermitian_coordinates(&tr).norm_squared();
            if tcost < cost {
                theta = trial;
                r = tr;
                cost = tcost;
                damping = (damping * 0.1).max(1e-15);
                improved = true;
                break;
            }
            damping *= 10.0;
        }
        if !improved {
            break;
        }
    }

    let mut terms = Vec::with_capacity(support.len());
    for k in 0..support.len() {
        let (u, v) = unpack(&theta, k);
        let (nu, nv) = (u.norm_squared(), v.norm_squared());
        if nu * nv == 0.0 {
            continue;
        }
        let a = DensityMatrix::from_parts_unchecked(&u * u.adjoint() / C64::new(nu, 0.0), vec![da]);
        let b = DensityMatrix::from_parts_unchecked(&v * v.adjoint() / C64::new(nv, 0.0), vec![db]);
        terms.push(ProductTerm { weight: nu * nv, a, b });
    }
    let total: f64 = terms.iter().map(|t| t.weight).sum();
    if terms.is_empty() || total <= 0.0 {
        return None;
    }
    for t in &mut terms {
        t.weight /= total;
    }
    let mut dec = SeparableDecomposition { terms, residual: 0.0 };
    dec.residual = (dec.reconstruct() - target).camax();
    Some(dec)
}

const POLISH_ITERATIONS: usize = 100;
const POLISH_TARGET: f64 = 1e-14;

/// Random starts of the alternating product search per refinement round.
const PRICING_STARTS: usize = 4;
/// Alignment below which a product direction is not worth adding.
const PRICING_FLOOR: f64 = 1e-15;

fn diagonal_decomposition(m: &DMatrix<C64>, da: usize, db: usize) -> Option<SeparableDecomposition> {
    let n = m.nrows();
    let off_diagonal = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)].norm())
        .fold(0.0, f64::max);
    if off_diagonal > tolerance::STRUCTURE {
        return None;
    }
    let basis = |k: usize, d: usize| {
        crate::quantum::PureState::basis(k, vec![d])
            .expect("index in range")
            .projector()
    };
    let terms = (0..n)
        .filter(|&k| m[(k, k)].re > tolerance::ENSEMBLE_WEIGHT)
        .map(|k| ProductTerm {
            weight: m[(k, k)].re,
            a: basis(k / db, da),
            b: basis(k % db, db),
        })
        .collect();
    let mut dec = SeparableDecomposition { terms, residual: 0.0 };
    dec.residual = (dec.reconstruct() - m).camax();
    Some(dec)
}

/// Runs [`decompose_separable`] on an SAEW obtained in exact mode.
pub fn find_separable_decomposition(
    saew: &SeparableApproxWitness,
    ensemble_size: usize,
    seed: u64,
) -> Result<SeparableDecomposition, WitnessError> {
    if saew.mode != SeparabilityMode::Exact {
        return Err(WitnessError::RequiresExactMode);
    }
    let config = DecompositionConfig {
        ensemble_size,
        ..DecompositionConfig::default()
    };
    decompose_separable(&saew.matrix, config, seed)
}

/// `Σₖ pₖ tr[(wₖ^(A) ⊗ wₖ^(B))ρ]`, the locally measurable form of `tr[ρW̃_s]`.
pub fn locc_expectation(dec: &SeparableDecomposition, rho: &DensityMatrix) -> Result<f64, WitnessError> {
    let [da, db] = dec.dims();
    if rho.dims() != [da, db] {
        return Err(QuantumError::DimensionMismatch {
            left: vec![da, db],
            right: rho.dims().to_vec(),
        }
        .into());
    }
    let mut total = 0.0;
    for t in &dec.terms {
        let product = t.a.tensor(&t.b);
        total += t.weight * crate::quantum::overlap(&product, rho)?;
    }
    Ok(total)
}
