use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{apply, post_select, Element, OpticsError, PhotonicState, Polarization};

/// One circuit element with an optional display label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub element: Element,
}

impl Step {
    pub fn labelled(label: &str, element: Element) -> Self {
        Self {
            label: Some(label.to_owned()),
            element,
        }
    }

    pub fn name(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match &self.element {
            Element::HalfWavePlate { path, angle } => format!("HWP({path}, {angle})"),
            Element::PolarizingBeamSplitter { path1, path2 } => format!("PBS({path1}, {path2})"),
            Element::BeamSplitter { in1, in2, out1, out2 } => format!("BS({in1}, {in2} -> {out1}, {out2})"),
            Element::Hologram { path, q } => format!("HOLO({path}, {q})"),
            Element::Detector { path, .. } => format!("DETECT({path})"),
        }
    }
}

/// An ordered list of elements; detectors must come last.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Circuit {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepTrace {
    pub label: String,
    pub norm_sqr: f64,
    pub terms: usize,
}

/// One joint detector outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub pattern: Vec<(String, Polarization)>,
    pub state: PhotonicState,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitRun {
    pub trace: Vec<StepTrace>,
    /// Pre-detection output state.
    pub output: PhotonicState,
    /// Every polarization outcome of the detectors; a single entry when all of
    /// them sit behind polarizers.
    pub branches: Vec<Branch>,
}

impl Circuit {
    pub fn new(steps: Vec<Step>) -> Self {
        Self { steps }
    }

    /// Every path an element touches, in sorted order.
    pub fn paths(&self) -> BTreeSet<String> {
        self.steps
            .iter()
            .flat_map(|s| s.element.paths())
            .map(str::to_owned)
            .collect()
    }

    fn split(&self) -> Result<(&[Step], &[Step]), OpticsError> {
        let first_detector = self
            .steps
            .iter()
            .position(|s| matches!(s.element, Element::Detector { .. }))
            .unwrap_or(self.steps.len());
        let (optics, detectors) = self.steps.split_at(first_detector);
        if detectors.iter().any(|s| !matches!(s.element, Element::Detector { .. })) {
            return Err(OpticsError::InvalidElement(format!(
                "`{}` follows a detector",
                detectors
                    .iter()
                    .find(|s| !matches!(s.element, Element::Detector { .. }))
                    .unwrap()
                    .name()
            )));
        }
        Ok((optics, detectors))
    }

    /// The state after each optical element, labelled.
    pub fn evolve(&self, input: &PhotonicState) -> Result<Vec<(String, PhotonicState)>, OpticsError> {
        let (optics, _) = self.split()?;
        let mut out = Vec::with_capacity(optics.len());
        let mut state = input.clone();
        for step in optics {
            state = apply(&state, &step.element)?;
            out.push((step.name(), state.clone()));
        }
        Ok(out)
    }

    pub fn run(&self, input: &PhotonicState) -> Result<CircuitRun, OpticsError> {
        let (_, detectors) = self.split()?;
        let states = self.evolve(input)?;
        let trace = states
            .iter()
            .map(|(label, s)| StepTrace {
                label: label.clone(),
                norm_sqr: s.norm_sqr(),
                terms: s.fock().len(),
            })
            .collect();
        let output = states.last().map_or_else(|| input.clone(), |(_, s)| s.clone());

        let mut patterns: Vec<Vec<(String, Polarization)>> = vec![Vec::new()];
        for step in detectors {
            let Element::Detector { path, polarization } = &step.element else {
                unreachable!()
            };
            let options = match polarization {
                Some(p) => vec![*p],
                None => vec![Polarization::H, Polarization::V],
            };
            patterns = patterns
                .into_iter()
                .flat_map(|pat| {
                    options.iter().map(move |p| {
                        let mut next = pat.clone();
                        next.push((path.clone(), *p));
                        next
                    })
                })
                .collect();
        }

        let mut branches = Vec::with_capacity(patterns.len());
        for pattern in patterns {
            let borrowed: Vec<(&str, Polarization)> = pattern.iter().map(|(p, pol)| (p.as_str(), *pol)).collect();
            let sel = post_select(&output, &borrowed)?;
            branches.push(Branch {
                pattern,
                state: sel.state,
                probability: sel.probability,
            });
        }
        Ok(CircuitRun {
            trace,
            output,
            branches,
        })
    }
}
