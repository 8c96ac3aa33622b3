//! Intermediate states of the joining circuit as printed term by term,
//! transcribed for comparison against the simulator.

use homwit::fock::{FockState, LinearForm};
use homwit::optics::{ModeLabel, Polarization};
use homwit::C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Parses `"rH_a - V_b1 + ..."`; a leading `r` scales the term by 1/√2.
pub fn form(text: &str) -> LinearForm<ModeLabel> {
    let mut out = Vec::new();
    let mut sign = 1.0;
    for tok in text.split_whitespace() {
        match tok {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            t => {
                let (scale, t) = match t.strip_prefix('r') {
                    Some(rest) => (R, rest),
                    None => (1.0, t),
                };
                let (pol, path) = t.split_once('_').unwrap();
                let pol = if pol == "H" { Polarization::H } else { Polarization::V };
                out.push((ModeLabel::new(path, pol), C64::new(sign * scale, 0.0)));
                sign = 1.0;
            }
        }
    }
    out
}

/// `prefactor · Σₖ xₖ Πⱼ formₖⱼ · common`.
pub fn expression(x: &[C64; 4], prefactor: f64, terms: [[&str; 2]; 4], common: &str) -> FockState<ModeLabel> {
    let mut total = FockState::default();
    for (k, factors) in terms.iter().enumerate() {
        let photons = [form(factors[0]), form(factors[1]), form(common)];
        let part = FockState::from_creation_product(&photons);
        for (key, amp) in part.terms() {
            total.insert(key.to_vec(), amp * x[k] * prefactor);
        }
    }
    total.prune(1e-15);
    total
}

pub fn distance(a: &FockState<ModeLabel>, b: &FockState<ModeLabel>) -> f64 {
    let mut diff = a.clone();
    for (key, amp) in b.terms() {
        diff.insert(key.to_vec(), -amp);
    }
    diff.norm_sqr().sqrt()
}

pub fn random_x(rng: &mut ChaCha8Rng) -> [C64; 4] {
    let mut x = [C64::new(0.0, 0.0); 4];
    for a in &mut x {
        *a = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    }
    let n = x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    x.map(|a| a / n)
}

pub fn ledger(x: &[C64; 4]) -> Vec<(&'static str, FockState<ModeLabel>)> {
    let s2 = 2f64.sqrt();
    vec![
        (
            "HWP_{a,0}",
            expression(
                x,
                R,
                [["H_b1", "H_c"], ["H_b1", "V_c"], ["V_b1", "H_c"], ["V_b1", "V_c"]],
                "H_a + V_a",
            ),
        ),
        (
            "PBS_{a,c}",
            expression(
                x,
                R,
                [["H_b1", "H_c"], ["H_b1", "V_a"], ["V_b1", "H_c"], ["V_b1", "V_a"]],
                "H_a + V_c",
            ),
        ),
        (
            "PBS_{b1,b2}",
            expression(
                x,
                R,
                [["H_b1", "H_c"], ["H_b1", "V_a"], ["V_b2", "H_c"], ["V_b2", "V_a"]],
                "H_a + V_c",
            ),
        ),
        (
            "HWP_{c,1}",
            expression(
                x,
                1.0 / (2.0 * s2),
                [
                    ["H_b1", "H_c + V_c"],
                    ["H_b1", "H_a - V_a"],
                    ["V_b2", "H_c + V_c"],
                    ["V_b2", "H_a - V_a"],
                ],
                "H_a + V_a + H_c - V_c",
            ),
        ),
        (
            "HWP_{b2,1}",
            expression(
                x,
                0.25,
                [
                    ["H_b1 + V_b1", "H_c + V_c"],
                    ["H_b1 + V_b1", "H_a - V_a"],
                    ["H_b2 + V_b2", "H_c + V_c"],
                    ["H_b2 + V_b2", "H_a - V_a"],
                ],
                "H_a + V_a + H_c - V_c",
            ),
        ),
        (
            "PBS_{a,b1}",
            expression(
                x,
                0.25,
                [
                    ["H_b1 + V_a", "H_c + V_c"],
                    ["H_b1 + V_a", "H_a - V_b1"],
                    ["H_b2 + V_b2", "H_c + V_c"],
                    ["H_b2 + V_b2", "H_a - V_b1"],
                ],
                "H_a + V_b1 + H_c - V_c",
            ),
        ),
        (
            "PBS_{c,b2}",
            expression(
                x,
                0.25,
                [
                    ["H_b1 + V_a", "H_c + V_b2"],
                    ["H_b1 + V_a", "H_a - V_b1"],
                    ["H_b2 + V_c", "H_c + V_b2"],
                    ["H_b2 + V_c", "H_a - V_b1"],
                ],
                "H_a + V_b1 + H_c - V_b2",
            ),
        ),
        (
            "HWP_{a,2}",
            expression(
                x,
                0.25,
                [
                    ["H_b1 + rH_a - rV_a", "H_c + V_b2"],
                    ["H_b1 + rH_a - rV_a", "rH_a + rV_a - V_b1"],
                    ["H_b2 + V_c", "H_c + V_b2"],
                    ["H_b2 + V_c", "rH_a + rV_a - V_b1"],
                ],
                "rH_a + rV_a + V_b1 + H_c - V_b2",
            ),
        ),
        (
            "HWP_{c,2}",
            expression(
                x,
                0.25,
                [
                    ["H_b1 + rH_a - rV_a", "rH_c + rV_c + V_b2"],
                    ["H_b1 + rH_a - rV_a", "rH_a + rV_a - V_b1"],
                    ["H_b2 + rH_c - rV_c", "rH_c + rV_c + V_b2"],
                    ["H_b2 + rH_c - rV_c", "rH_a + rV_a - V_b1"],
                ],
                "rH_a + rV_a + V_b1 + rH_c + rV_c - V_b2",
            ),
        ),
        (
            "HWP_{b1,2}",
            expression(
                x,
                0.25,
                [
                    ["rH_b1 + rV_b1 + rH_a - rV_a", "rH_c + rV_c + V_b2"],
                    ["rH_b1 + rV_b1 + rH_a - rV_a", "rH_a + rV_a - rH_b1 + rV_b1"],
                    ["H_b2 + rH_c - rV_c", "rH_c + rV_c + V_b2"],
                    ["H_b2 + rH_c - rV_c", "rH_a + rV_a - rH_b1 + rV_b1"],
                ],
                "rH_a + rV_a + rH_b1 - rV_b1 + rH_c + rV_c - V_b2",
            ),
        ),
        (
            "HWP_{b2,2}",
            expression(
                x,
                1.0 / (8.0 * s2),
                [
                    ["H_b1 + V_b1 + H_a - V_a", "H_c + V_c + H_b2 - V_b2"],
                    ["H_b1 + V_b1 + H_a - V_a", "H_a + V_a - H_b1 + V_b1"],
                    ["H_b2 + V_b2 + H_c - V_c", "H_c + V_c + H_b2 - V_b2"],
                    ["H_b2 + V_b2 + H_c - V_c", "H_a + V_a - H_b1 + V_b1"],
                ],
                "H_a + V_a + H_b1 - V_b1 + H_c + V_c - H_b2 + V_b2",
            ),
        ),
    ]
}
