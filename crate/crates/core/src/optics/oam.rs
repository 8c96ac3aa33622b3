//! Path-to-OAM conversion: a hologram on `b2` followed by a 50:50 merge of
//! `b1` and `b2` into `c1` and `c2`.
//!
//! Both outputs carry the joined state over `(H,0), (V,0), (H,q), (V,q)`.
//! `c1` carries it as is; `c2` carries it with the `q` components negated.

use super::{apply, Element, OpticsError, PhotonicState, Polarization};
use crate::quantum::PureState;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct OamEncoding {
    /// State in `c1`, dims `[2, 2]` ordered (OAM bit, polarization).
    pub upper: PureState,
    /// State in `c2`, same basis, `q` components negated.
    pub lower: PureState,
    /// Probability of finding the photon in each output path.
    pub branch_probability: [f64; 2],
}

impl OamEncoding {
    /// `lower` with the merge sign undone, equal to `upper`.
    pub fn lower_sign_corrected(&self) -> PureState {
        let mut v: Vec<C64> = self.lower.amplitudes().iter().copied().collect();
        v[2] = -v[2];
        v[3] = -v[3];
        PureState::new(v, vec![2, 2]).expect("sign flips keep the norm")
    }
}

pub fn oam_encode(joined: &PhotonicState, q: i32) -> Result<OamEncoding, OpticsError> {
    if q == 0 {
        return Err(OpticsError::UnsupportedInput(
            "a zero OAM shift leaves the two paths indistinguishable".into(),
        ));
    }
    if joined.photon_count() != 1 {
        return Err(OpticsError::UnsupportedInput(format!(
            "expected one photon, found {}",
            joined.photon_count()
        )));
    }
    for (key, _) in joined.fock().terms() {
        let m = &key[0];
        if m.path != "b1" && m.path != "b2" {
            return Err(OpticsError::UnsupportedInput(format!("photon on path `{}`", m.path)));
        }
        if m.oam != 0 {
            return Err(OpticsError::UnsupportedInput(format!(
                "photon already carries OAM {}",
                m.oam
            )));
        }
    }

    let state = PhotonicState::new(["b1", "b2", "c1", "c2"], joined.fock().clone())?;
    let state = apply(&state, &Element::hologram("b2", q))?;
    let state = apply(&state, &Element::bs("b1", "b2", "c1", "c2"))?;

    let mut amplitudes = [vec![C64::new(0.0, 0.0); 4], vec![C64::new(0.0, 0.0); 4]];
    for (key, amp) in state.fock().terms() {
        let m = &key[0];
        let port = usize::from(m.path == "c2");
        let bit = usize::from(m.oam == q);
        let pol = usize::from(m.polarization == Polarization::V);
        amplitudes[port][bit * 2 + pol] += amp;
    }
    let weight = |v: &[C64]| v.iter().map(|a| a.norm_sqr()).sum::<f64>();
    let probability = [weight(&amplitudes[0]), weight(&amplitudes[1])];
    let [a, b] = amplitudes;
    Ok(OamEncoding {
        upper: PureState::normalized(a, vec![2, 2])?,
        lower: PureState::normalized(b, vec![2, 2])?,
        branch_probability: probability,
    })
}
