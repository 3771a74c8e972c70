//! Wire formats for file-based I/O.
//!
//! Conventions: complex numbers are two-element `[re, im]` arrays;
//! matrices are flattened row-major next to an explicit `dim` field.
//! Every type here derives both directions, so outputs round-trip
//! through their own schema.

use serde::{Deserialize, Serialize};

use crate::discrimination::{MinErrorResult, MinErrorSearch, UnambiguousResult, UnambiguousSearch};
use crate::error::{Error, Result};
use crate::hilbert::{Operator, StateVector, C64};
use crate::quantum::{DensityOperator, Effect, Povm, PovmReport, PureState, SpinDirection, State};
use crate::scheme::MeasurementScheme;
use crate::signaling::{Decision, SignalingProtocol, TrialRecord};

/// `[re, im]`.
pub type ComplexPair = [f64; 2];

fn pair(z: C64) -> ComplexPair {
    [z.re, z.im]
}

fn unpair(p: ComplexPair) -> C64 {
    C64::new(p[0], p[1])
}

/// Complex column vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub dim: usize,
    pub amplitudes: Vec<ComplexPair>,
}

impl VectorJson {
    pub fn from_state_vector(v: &StateVector) -> Self {
        Self {
            dim: v.dim(),
            amplitudes: v.amplitudes().iter().map(|&z| pair(z)).collect(),
        }
    }

    pub fn from_pure_state(s: &PureState) -> Self {
        Self::from_state_vector(s.vector())
    }

    pub fn to_state_vector(&self) -> Result<StateVector> {
        if self.amplitudes.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: self.amplitudes.len(),
            });
        }
        StateVector::new(self.amplitudes.iter().map(|&p| unpair(p)).collect())
    }

    pub fn to_pure_state(&self) -> Result<PureState> {
        PureState::new(self.to_state_vector()?)
    }
}

/// Complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub elements: Vec<ComplexPair>,
}

impl MatrixJson {
    pub fn from_operator(op: &Operator) -> Self {
        let d = op.dim();
        let mut elements = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                elements.push(pair(op.entry(i, j)));
            }
        }
        Self { dim: d, elements }
    }

    pub fn to_operator(&self) -> Result<Operator> {
        if self.elements.len() != self.dim * self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim * self.dim,
                right: self.elements.len(),
            });
        }
        Operator::from_rows(self.dim, self.elements.iter().map(|&p| unpair(p)).collect())
    }

    pub fn to_effect(&self) -> Result<Effect> {
        Effect::new(self.to_operator()?)
    }

    pub fn from_density(rho: &DensityOperator) -> Self {
        Self::from_operator(rho.matrix())
    }

    pub fn to_density(&self) -> Result<DensityOperator> {
        DensityOperator::new(self.to_operator()?)
    }
}

/// Labeled outcome family; validity is checked on conversion, not parse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmJson {
    pub outcomes: Vec<PovmOutcomeJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmOutcomeJson {
    pub label: String,
    pub matrix: MatrixJson,
}

impl PovmJson {
    pub fn from_povm(p: &Povm) -> Self {
        Self {
            outcomes: p
                .outcomes()
                .iter()
                .map(|(label, e)| PovmOutcomeJson {
                    label: label.clone(),
                    matrix: MatrixJson::from_operator(e.matrix()),
                })
                .collect(),
        }
    }

    /// Raw (label, operator) pairs for diagnostics that must not reject
    /// bad physics outright.
    pub fn to_candidates(&self) -> Result<Vec<(String, Operator)>> {
        self.outcomes
            .iter()
            .map(|o| Ok((o.label.clone(), o.matrix.to_operator()?)))
            .collect()
    }

    pub fn to_povm(&self) -> Result<Povm> {
        let outcomes = self
            .outcomes
            .iter()
            .map(|o| Ok((o.label.clone(), o.matrix.to_effect()?)))
            .collect::<Result<Vec<_>>>()?;
        Povm::new(outcomes)
    }
}

/// Two pure states to discriminate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatePairJson {
    pub phi: VectorJson,
    pub psi: VectorJson,
}

impl StatePairJson {
    pub fn to_states(&self) -> Result<(PureState, PureState)> {
        Ok((self.phi.to_pure_state()?, self.psi.to_pure_state()?))
    }
}

/// A pure or mixed state, whichever the file provides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateJson {
    Pure(VectorJson),
    Density(MatrixJson),
}

impl StateJson {
    pub fn from_state(s: &State) -> Self {
        match s {
            State::Pure(p) => Self::Pure(VectorJson::from_pure_state(p)),
            State::Mixed(m) => Self::Density(MatrixJson::from_density(m)),
        }
    }

    pub fn to_state(&self) -> Result<State> {
        Ok(match self {
            Self::Pure(v) => State::Pure(v.to_pure_state()?),
            Self::Density(m) => State::Mixed(m.to_density()?),
        })
    }
}

/// Decision measurement on the far side of the singlet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionJson {
    Effect(MatrixJson),
    Povm(PovmJson),
}

/// Letter alphabet + priors + decision measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolJson {
    /// Unit Bloch vectors, one spin direction per letter.
    pub letters: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<Vec<f64>>,
    pub decision: DecisionJson,
}

impl ProtocolJson {
    pub fn from_protocol(p: &SignalingProtocol) -> Self {
        Self {
            letters: p.letters().iter().map(|d| d.components()).collect(),
            priors: Some(p.priors().to_vec()),
            decision: match p.decision() {
                Decision::Effect(e) => DecisionJson::Effect(MatrixJson::from_operator(e.matrix())),
                Decision::Povm(q) => DecisionJson::Povm(PovmJson::from_povm(q)),
            },
        }
    }

    pub fn to_protocol(&self) -> Result<SignalingProtocol> {
        let letters = self
            .letters
            .iter()
            .map(|&n| SpinDirection::new(n))
            .collect::<Result<Vec<_>>>()?;
        let decision = match &self.decision {
            DecisionJson::Effect(m) => Decision::Effect(m.to_effect()?),
            DecisionJson::Povm(p) => Decision::Povm(p.to_povm()?),
        };
        SignalingProtocol::new(letters, decision, self.priors.clone())
    }
}

/// Probe + coupling + pointer, the full measurement scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeJson {
    pub object_dim: usize,
    pub probe_dim: usize,
    pub probe_init: VectorJson,
    pub coupling: MatrixJson,
    pub pointer: PovmJson,
}

impl SchemeJson {
    pub fn from_scheme(s: &MeasurementScheme) -> Self {
        Self {
            object_dim: s.object_dim(),
            probe_dim: s.probe_dim(),
            probe_init: VectorJson::from_pure_state(s.probe_init()),
            coupling: MatrixJson::from_operator(s.coupling()),
            pointer: PovmJson::from_povm(s.pointer()),
        }
    }

    pub fn to_scheme(&self) -> Result<MeasurementScheme> {
        MeasurementScheme::new(
            self.object_dim,
            self.probe_dim,
            self.probe_init.to_pure_state()?,
            self.coupling.to_operator()?,
            self.pointer.to_povm()?,
        )
    }
}

/// POVM diagnostics, mirroring [`PovmReport`] plus the completeness rank
/// check that only applies to valid families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationJson {
    /// One-line verdict, e.g. "valid, unsharp, informationally complete".
    pub summary: String,
    pub dim: usize,
    pub n_outcomes: usize,
    pub completeness_residual: f64,
    pub max_hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub is_valid: bool,
    pub is_sharp: bool,
    /// Present only when the family is a valid POVM.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub informationally_complete: Option<bool>,
}

impl ValidationJson {
    pub fn from_report(r: &PovmReport, informationally_complete: Option<bool>) -> Self {
        let summary = if r.is_valid {
            format!(
                "valid, {}, {}",
                if r.is_sharp { "sharp" } else { "unsharp" },
                match informationally_complete {
                    Some(true) => "informationally complete",
                    _ => "not informationally complete",
                }
            )
        } else {
            "invalid".to_string()
        };
        Self {
            summary,
            dim: r.dim,
            n_outcomes: r.hermiticity_residuals.len(),
            completeness_residual: r.completeness_residual,
            max_hermiticity_residual: r
                .hermiticity_residuals
                .iter()
                .copied()
                .fold(0.0, f64::max),
            min_eigenvalue: r
                .min_eigenvalues
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min),
            max_eigenvalue: r
                .max_eigenvalues
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max),
            is_valid: r.is_valid,
            is_sharp: r.is_sharp,
            informationally_complete,
        }
    }
}

/// Grid-search cross-check attached to a closed-form answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinErrorOracleJson {
    pub resolution: usize,
    pub p_success: f64,
    /// |closed-form − oracle|.
    pub residual: f64,
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub azimuth: f64,
}

impl MinErrorOracleJson {
    pub fn new(closed_form: f64, search: &MinErrorSearch, resolution: usize) -> Self {
        Self {
            resolution,
            p_success: search.p,
            residual: (closed_form - search.p).abs(),
            alpha: search.alpha,
            beta: search.beta,
            theta: search.theta,
            azimuth: search.azimuth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinErrorJson {
    pub prior_phi: f64,
    pub prior_psi: f64,
    pub overlap: f64,
    pub p_success: f64,
    pub effect: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<MinErrorOracleJson>,
}

impl MinErrorJson {
    pub fn new(r: &MinErrorResult, prior_phi: f64, oracle: Option<MinErrorOracleJson>) -> Self {
        Self {
            prior_phi,
            prior_psi: 1.0 - prior_phi,
            overlap: r.overlap,
            p_success: r.p_success,
            effect: MatrixJson::from_operator(r.effect.matrix()),
            oracle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnambiguousOracleJson {
    pub resolution: usize,
    pub p_success: f64,
    /// |closed-form − oracle|.
    pub residual: f64,
    pub e1: f64,
    pub e2: f64,
}

impl UnambiguousOracleJson {
    pub fn new(closed_form: f64, search: &UnambiguousSearch, resolution: usize) -> Self {
        Self {
            resolution,
            p_success: search.p,
            residual: (closed_form - search.p).abs(),
            e1: search.e1,
            e2: search.e2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnambiguousJson {
    pub overlap: f64,
    /// 1 − overlap².
    pub w: f64,
    pub e1: f64,
    pub e2: f64,
    pub p_success: f64,
    pub degenerate: bool,
    pub effects: PovmJson,
    /// Set when a higher-dimensional pair was first rotated into its
    /// two-dimensional span; effects are then in the {φ, φ⊥} basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restricted_to_span: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<UnambiguousOracleJson>,
}

impl UnambiguousJson {
    pub fn new(r: &UnambiguousResult, oracle: Option<UnambiguousOracleJson>) -> Self {
        Self {
            overlap: r.overlap,
            w: r.w,
            e1: r.e1,
            e2: r.e2,
            p_success: r.p_success,
            degenerate: r.degenerate,
            effects: PovmJson::from_povm(&r.effects),
            restricted_to_span: None,
            oracle,
        }
    }
}

/// Monte Carlo run over the singlet: empirical fields carry `n` and
/// `stderr`; the analytic field is exactly ½ for any decision effect.
/// Inference success is only defined for two-letter protocols, so the
/// analytic value is absent for larger alphabets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSummaryJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic_success: Option<f64>,
    pub n: u64,
    pub seed: u64,
    pub success_rate: f64,
    pub stderr: f64,
    pub mutual_information_bits: f64,
    /// counts[letter][decision].
    pub counts: Vec<Vec<u64>>,
}

/// One row of the optional per-trial CSV dump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecordJson {
    pub trial: u64,
    pub letter: usize,
    pub bob_outcome: i8,
    pub decision: usize,
}

impl TrialRecordJson {
    pub fn from_record(r: &TrialRecord) -> Self {
        Self {
            trial: r.trial,
            letter: r.letter,
            bob_outcome: r.bob_outcome,
            decision: r.decision,
        }
    }
}

/// Pointer statistics vs induced-observable statistics, one row per
/// outcome; the two probability columns must agree (reproducibility).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeOutcomeJson {
    pub label: String,
    pub pointer_probability: f64,
    pub induced_probability: f64,
    pub trivial: bool,
    /// λ with E = λI, when trivial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixing_weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeReportJson {
    pub object_dim: usize,
    pub probe_dim: usize,
    pub induced: PovmJson,
    pub outcomes: Vec<SchemeOutcomeJson>,
}

/// Reconstruction report: the true state next to what the frequencies
/// (exact or sampled) give back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyJson {
    /// 0 means exact Born frequencies, no sampling.
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub frequencies: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
    pub true_state: MatrixJson,
    pub reconstructed: MatrixJson,
    pub trace_distance: f64,
}

/// Two states the sharp observable cannot tell apart, with the unsharp
/// statistics that do.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTwinJson {
    pub state: VectorJson,
    pub twin: VectorJson,
    pub phases: Vec<f64>,
    pub observable_eigenvalues: Vec<f64>,
    pub sharp_stats_state: Vec<f64>,
    pub sharp_stats_twin: Vec<f64>,
    pub sharp_max_gap: f64,
    pub tetrahedron_stats_state: Vec<f64>,
    pub tetrahedron_stats_twin: Vec<f64>,
    pub tetrahedron_max_gap: f64,
    pub states_coincide: bool,
}
