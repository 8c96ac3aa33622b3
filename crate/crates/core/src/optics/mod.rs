//! Amplitude-level simulation of few-photon linear-optical circuits.
//!
//! Modes are labelled by path, polarization and orbital angular momentum.
//! Elements act as single-photon substitutions on the creation operators, so
//! multi-photon interference and bosonic normalization come for free from
//! [`FockState`].

mod circuit;
mod joining;
mod oam;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{FockState, LinearForm};
use crate::tolerance;
use crate::C64;

pub use circuit::{Branch, Circuit, CircuitRun, Step, StepTrace};
pub use joining::{joined_target, joining_circuit, joining_input, quantum_join, JoinOutcome, JOIN_PATHS, JOIN_PRESET};
pub use oam::{oam_encode, OamEncoding};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpticsError {
    #[error("path `{0}` is not part of the circuit")]
    UnknownPath(String),
    #[error("element is invalid: {0}")]
    InvalidElement(String),
    #[error("output path `{0}` is already occupied")]
    OccupiedOutput(String),
    #[error("detectors act through post-selection, not `apply`")]
    DetectorInApply,
    #[error("a mode refers to path `{0}` outside the declared path set")]
    UndeclaredMode(String),
    #[error("terms have different photon numbers")]
    MixedPhotonNumber,
    #[error("post-selection pattern is invalid: {0}")]
    InvalidPattern(String),
    #[error("detection merges distinguishable outcomes into one conditional state")]
    IndistinctOutcomes,
    #[error("input amplitudes have norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("state does not fit the encoding stage: {0}")]
    UnsupportedInput(String),
    #[error(transparent)]
    Quantum(#[from] crate::quantum::QuantumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::H => "H",
            Polarization::V => "V",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeLabel {
    pub path: String,
    pub polarization: Polarization,
    #[serde(default)]
    pub oam: i32,
}

impl ModeLabel {
    pub fn new(path: &str, polarization: Polarization) -> Self {
        Self {
            path: path.to_owned(),
            polarization,
            oam: 0,
        }
    }

    pub fn with_oam(mut self, oam: i32) -> Self {
        self.oam = oam;
        self
    }

    fn moved(&self, path: &str) -> Self {
        Self {
            path: path.to_owned(),
            ..self.clone()
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.polarization, self.path)?;
        if self.oam != 0 {
            write!(f, "[l={}]", self.oam)?;
        }
        Ok(())
    }
}

/// A photonic state together with the set of paths its circuit declares.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonicState {
    paths: BTreeSet<String>,
    fock: FockState<ModeLabel>,
}

impl PhotonicState {
    pub fn new<I, S>(paths: I, fock: FockState<ModeLabel>) -> Result<Self, OpticsError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let paths: BTreeSet<String> = paths.into_iter().map(Into::into).collect();
        let n = fock.photon_count();
        for (key, _) in fock.terms() {
            if key.len() != n {
                return Err(OpticsError::MixedPhotonNumber);
            }
            if let Some(m) = key.iter().find(|m| !paths.contains(&m.path)) {
                return Err(OpticsError::UndeclaredMode(m.path.clone()));
            }
        }
        Ok(Self { paths, fock })
    }

    /// One photon per factor, each in the given superposition of modes.
    pub fn from_photons<I, S>(paths: I, photons: &[LinearForm<ModeLabel>]) -> Result<Self, OpticsError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(paths, FockState::from_creation_product(photons))
    }

    /// The branch with no surviving terms, returned for impossible detections.
    pub fn empty<I, S>(paths: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            paths: paths.into_iter().map(Into::into).collect(),
            fock: FockState::default(),
        }
    }

    pub fn paths(&self) -> &BTreeSet<String> {
        &self.paths
    }

    pub fn fock(&self) -> &FockState<ModeLabel> {
        &self.fock
    }

    pub fn photon_count(&self) -> usize {
        self.fock.photon_count()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.fock.norm_sqr()
    }

    pub fn is_empty(&self) -> bool {
        self.fock.is_empty()
    }

    /// Amplitude of the normalized Fock ket with the given photons.
    pub fn amplitude(&self, modes: &[ModeLabel]) -> C64 {
        self.fock.amplitude(modes)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.fock.inner(&other.fock)
    }

    /// `|⟨self|other⟩|²` for normalized states.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    fn occupies(&self, path: &str) -> bool {
        self.fock.terms().any(|(k, _)| k.iter().any(|m| m.path == path))
    }

    fn require(&self, path: &str) -> Result<(), OpticsError> {
        if self.paths.contains(path) {
            Ok(())
        } else {
            Err(OpticsError::UnknownPath(path.to_owned()))
        }
    }
}

/// Linear-optical elements. Angles are in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Element {
    #[serde(rename = "HWP")]
    HalfWavePlate { path: String, angle: f64 },
    /// Transmits H, reflects V into the other path.
    #[serde(rename = "PBS")]
    PolarizingBeamSplitter { path1: String, path2: String },
    #[serde(rename = "BS")]
    BeamSplitter {
        in1: String,
        in2: String,
        out1: String,
        out2: String,
    },
    #[serde(rename = "HOLO")]
    Hologram { path: String, q: i32 },
    /// Ideal photon counter, optionally behind a polarizer.
    #[serde(rename = "DETECT")]
    Detector {
        path: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        polarization: Option<Polarization>,
    },
}

impl Element {
    pub fn hwp(path: &str, angle: f64) -> Self {
        Element::HalfWavePlate {
            path: path.into(),
            angle,
        }
    }

    pub fn pbs(path1: &str, path2: &str) -> Self {
        Element::PolarizingBeamSplitter {
            path1: path1.into(),
            path2: path2.into(),
        }
    }

    pub fn bs(in1: &str, in2: &str, out1: &str, out2: &str) -> Self {
        Element::BeamSplitter {
            in1: in1.into(),
            in2: in2.into(),
            out1: out1.into(),
            out2: out2.into(),
        }
    }

    pub fn hologram(path: &str, q: i32) -> Self {
        Element::Hologram { path: path.into(), q }
    }

    pub fn detector(path: &str, polarization: Option<Polarization>) -> Self {
        Element::Detector {
            path: path.into(),
            polarization,
        }
    }

    pub fn paths(&self) -> Vec<&str> {
        match self {
            Element::HalfWavePlate { path, .. } | Element::Hologram { path, .. } | Element::Detector { path, .. } => {
                vec![path]
            }
            Element::PolarizingBeamSplitter { path1, path2 } => vec![path1, path2],
            Element::BeamSplitter { in1, in2, out1, out2 } => vec![in1, in2, out1, out2],
        }
    }

    pub fn validate(&self) -> Result<(), OpticsError> {
        match self {
            Element::HalfWavePlate { angle, .. } if !angle.is_finite() => Err(OpticsError::InvalidElement(format!(
                "waveplate angle {angle} is not finite"
            ))),
            Element::PolarizingBeamSplitter { path1, path2 } if path1 == path2 => {
                Err(OpticsError::InvalidElement(format!("PBS joins `{path1}` to itself")))
            }
            Element::BeamSplitter { .. } => {
                let p = self.paths();
                let distinct: BTreeSet<&str> = p.iter().copied().collect();
                if distinct.len() == 4 {
                    Ok(())
                } else {
                    Err(OpticsError::InvalidElement(
                        "beam splitter ports must be four distinct paths".into(),
                    ))
                }
            }
            _ => Ok(()),
        }
    }
}

fn unit(m: ModeLabel) -> LinearForm<ModeLabel> {
    vec![(m, C64::new(1.0, 0.0))]
}

/// Applies a unitary element, pruning negligible amplitudes afterwards.
pub fn apply(state: &PhotonicState, element: &Element) -> Result<PhotonicState, OpticsError> {
    element.validate()?;
    for p in element.paths() {
        state.require(p)?;
    }
    let fock = match element {
        Element::HalfWavePlate { path, angle } => {
            let two_theta = 2.0 * angle.to_radians();
            let (s, c) = two_theta.sin_cos();
            state.fock.substitute(|m| {
                if m.path != *path {
                    return unit(m.clone());
                }
                let h = ModeLabel {
                    polarization: Polarization::H,
                    ..m.clone()
                };
                let v = ModeLabel {
                    polarization: Polarization::V,
                    ..m.clone()
                };
                match m.polarization {
                    Polarization::H => vec![(h, C64::new(c, 0.0)), (v, C64::new(s, 0.0))],
                    Polarization::V => vec![(h, C64::new(s, 0.0)), (v, C64::new(-c, 0.0))],
                }
            })
        }
        Element::PolarizingBeamSplitter { path1, path2 } => state.fock.substitute(|m| {
            if m.polarization == Polarization::V && m.path == *path1 {
                unit(m.moved(path2))
            } else if m.polarization == Polarization::V && m.path == *path2 {
                unit(m.moved(path1))
            } else {
                unit(m.clone())
            }
        }),
        Element::BeamSplitter { in1, in2, out1, out2 } => {
            for out in [out1, out2] {
                if state.occupies(out) {
                    return Err(OpticsError::OccupiedOutput(out.clone()));
                }
            }
            let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            state.fock.substitute(|m| {
                if m.path == *in1 {
                    vec![(m.moved(out1), h), (m.moved(out2), h)]
                } else if m.path == *in2 {
                    vec![(m.moved(out1), h), (m.moved(out2), -h)]
                } else {
                    unit(m.clone())
                }
            })
        }
        Element::Hologram { path, q } => state.fock.substitute(|m| {
            if m.path == *path {
                unit(m.clone().with_oam(m.oam + q))
            } else {
                unit(m.clone())
            }
        }),
        Element::Detector { .. } => return Err(OpticsError::DetectorInApply),
    };
    let mut fock = fock;
    fock.prune(tolerance::AMPLITUDE_PRUNE);
    Ok(PhotonicState {
        paths: state.paths.clone(),
        fock,
    })
}

/// A conditional state and the probability of the detection that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelection {
    /// Renormalized; empty when the detection is impossible.
    pub state: PhotonicState,
    pub probability: f64,
}

/// Conditions on one photon of the given polarization in each pattern path
/// and no other photon there. Detected photons are removed and the detector
/// paths leave the path set.
pub fn post_select(state: &PhotonicState, pattern: &[(&str, Polarization)]) -> Result<PostSelection, OpticsError> {
    let mut detected = BTreeSet::new();
    for (path, _) in pattern {
        state.require(path)?;
        if !detected.insert(*path) {
            return Err(OpticsError::InvalidPattern(format!("path `{path}` appears twice")));
        }
    }
    let remaining: BTreeSet<String> = state
        .paths
        .iter()
        .filter(|p| !detected.contains(p.as_str()))
        .cloned()
        .collect();

    let mut seen = BTreeSet::new();
    let mut collision = false;
    let fock = state.fock.filter_map_keys(|key| {
        for (path, pol) in pattern {
            let mut on_path = key.iter().filter(|m| m.path == *path);
            match (on_path.next(), on_path.next()) {
                (Some(m), None) if m.polarization == *pol => {}
                _ => return None,
            }
        }
        let kept: Vec<ModeLabel> = key
            .iter()
            .filter(|m| !detected.contains(m.path.as_str()))
            .cloned()
            .collect();
        if !seen.insert(kept.clone()) {
            collision = true;
        }
        Some(kept)
    });
    if collision {
        return Err(OpticsError::IndistinctOutcomes);
    }

    let probability = fock.norm_sqr();
    if probability == 0.0 {
        return Ok(PostSelection {
            state: PhotonicState::empty(remaining),
            probability: 0.0,
        });
    }
    let mut fock = fock;
    fock.scale(C64::new(1.0 / probability.sqrt(), 0.0));
    Ok(PostSelection {
        state: PhotonicState { paths: remaining, fock },
        probability,
    })
}
