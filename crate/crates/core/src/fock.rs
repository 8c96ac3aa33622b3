//! Few-photon bosonic states in the normalized Fock basis.
//!
//! A term is keyed by the sorted multiset of occupied modes. Its amplitude is
//! the coefficient of the *normalized* Fock ket, so a doubly occupied mode
//! carries the √2 of `(a†)²|vac⟩ = √2|2⟩`. Linear mode maps are applied by
//! converting to creation-operator coefficients, expanding, and converting
//! back.

use std::collections::BTreeMap;

use crate::C64;

/// A linear combination of modes, e.g. `(c + d)/√2`.
pub type LinearForm<M> = Vec<(M, C64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct FockState<M: Ord + Clone> {
    terms: BTreeMap<Vec<M>, C64>,
}

/// `Π √(nₖ!)` over the occupations of a sorted key.
fn occupation_norm<M: Ord>(key: &[M]) -> f64 {
    let mut norm = 1.0;
    let mut run = 0usize;
    for (i, m) in key.iter().enumerate() {
        run = if i > 0 && key[i - 1] == *m { run + 1 } else { 1 };
        norm *= (run as f64).sqrt();
    }
    norm
}

fn insert_sorted<M: Ord + Clone>(key: &[M], m: &M) -> Vec<M> {
    let pos = key.partition_point(|k| k <= m);
    let mut out = Vec::with_capacity(key.len() + 1);
    out.extend_from_slice(&key[..pos]);
    out.push(m.clone());
    out.extend_from_slice(&key[pos..]);
    out
}

impl<M: Ord + Clone> Default for FockState<M> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<M: Ord + Clone> FockState<M> {
    /// `(Σ c a†)(Σ c a†)…|vac⟩` for the given factors, one per photon.
    pub fn from_creation_product(factors: &[LinearForm<M>]) -> Self {
        let mut poly: BTreeMap<Vec<M>, C64> = BTreeMap::new();
        poly.insert(Vec::new(), C64::new(1.0, 0.0));
        for form in factors {
            poly = multiply(&poly, form);
        }
        Self::from_polynomial(poly)
    }

    /// Single normalized Fock ket.
    pub fn ket(mut modes: Vec<M>, amplitude: C64) -> Self {
        modes.sort();
        let mut terms = BTreeMap::new();
        terms.insert(modes, amplitude);
        Self { terms }
    }

    fn from_polynomial(poly: BTreeMap<Vec<M>, C64>) -> Self {
        let terms = poly
            .into_iter()
            .map(|(k, c)| {
                let n = occupation_norm(&k);
                (k, c * n)
            })
            .collect();
        Self { terms }
    }

    /// Applies the single-photon substitution `m ↦ f(m)` to every photon.
    pub fn substitute<F>(&self, f: F) -> Self
    where
        F: Fn(&M) -> LinearForm<M>,
    {
        let mut out: BTreeMap<Vec<M>, C64> = BTreeMap::new();
        for (key, amp) in &self.terms {
            let coeff = amp / occupation_norm(key);
            let mut partial: BTreeMap<Vec<M>, C64> = BTreeMap::new();
            partial.insert(Vec::new(), coeff);
            for m in key {
                partial = multiply(&partial, &f(m));
            }
            for (k, c) in partial {
                *out.entry(k).or_insert(C64::new(0.0, 0.0)) += c;
            }
        }
        Self::from_polynomial(out)
    }

    /// Drops terms with `|amplitude| < threshold`.
    pub fn prune(&mut self, threshold: f64) {
        self.terms.retain(|_, a| a.norm() >= threshold);
    }

    pub fn insert(&mut self, mut modes: Vec<M>, amplitude: C64) {
        modes.sort();
        *self.terms.entry(modes).or_insert(C64::new(0.0, 0.0)) += amplitude;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&mut self, s: C64) {
        for a in self.terms.values_mut() {
            *a *= s;
        }
    }

    pub fn amplitude(&self, modes: &[M]) -> C64 {
        let mut key = modes.to_vec();
        key.sort();
        self.terms.get(&key).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[M], C64)> {
        self.terms.iter().map(|(k, a)| (k.as_slice(), *a))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Photon number of the first term; all terms share it by construction.
    pub fn photon_count(&self) -> usize {
        self.terms.keys().next().map_or(0, |k| k.len())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.terms
            .iter()
            .filter_map(|(k, a)| other.terms.get(k).map(|b| a.conj() * b))
            .sum()
    }

    /// Keeps the terms selected by `keep`, mapping their keys (e.g. removing
    /// detected photons). Amplitudes are not renormalized. Only singly occupied
    /// modes may be removed, so the remaining occupation factors are unchanged.
    pub fn filter_map_keys<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(&[M]) -> Option<Vec<M>>,
    {
        let mut out = Self::default();
        for (k, a) in &self.terms {
            if let Some(nk) = keep(k) {
                out.insert(nk, *a);
            }
        }
        out
    }
}

fn multiply<M: Ord + Clone>(poly: &BTreeMap<Vec<M>, C64>, form: &LinearForm<M>) -> BTreeMap<Vec<M>, C64> {
    let mut out: BTreeMap<Vec<M>, C64> = BTreeMap::new();
    for (key, c) in poly {
        for (m, a) in form {
            let k = insert_sorted(key, m);
            *out.entry(k).or_insert(C64::new(0.0, 0.0)) += c * a;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn double_occupation_carries_sqrt_two() {
        let s = FockState::from_creation_product(&[vec![(0u8, c(1.0))], vec![(0u8, c(1.0))]]);
        assert!((s.amplitude(&[0, 0]).re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn substitution_is_norm_preserving_for_unitary_maps() {
        let h = 1.0 / 2f64.sqrt();
        let s = FockState::ket(vec![0u8, 1u8], c(1.0));
        let out = s.substitute(|m| match m {
            0 => vec![(2, c(h)), (3, c(h))],
            _ => vec![(2, c(h)), (3, c(-h))],
        });
        assert!((out.norm_sqr() - 1.0).abs() < 1e-14);
        // textbook HOM: no |2,3⟩ component survives
        assert!(out.amplitude(&[2, 3]).norm() < 1e-15);
    }
}
