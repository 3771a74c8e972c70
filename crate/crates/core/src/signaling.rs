//! Entanglement signaling, attempted and refuted.
//!
//! Bob and Abner share a singlet; Bob encodes a letter by choosing which
//! spin component to measure on his half, Abner tries to read it back
//! from his. Conditioning only on Bob's *choice* (not his outcome),
//! Abner's half sits in the same maximally mixed state either way, so
//! every decision rule succeeds with probability exactly ½ — computed
//! analytically here and reproduced by seeded Monte Carlo with a
//! mutual-information estimate.
//!
//! Convention: Bob holds the first tensor factor, Abner the second.

use crate::error::{Error, Result};
use crate::hilbert::{Operator, Subsystem};
use crate::mc::{binomial_stderr, mutual_information_bits, run_trial_blocks, sample_index};
use crate::quantum::{
    singlet, spin_component, DensityOperator, Effect, Povm, SpinDirection,
};
use crate::DEFAULT_TOL;

/// Abner's read-out rule.
#[derive(Debug, Clone)]
pub enum Decision {
    /// Two letters: the effect answers "it was the first letter".
    Effect(Effect),
    /// One effect per letter; outcome k means "infer letter k".
    Povm(Povm),
}

/// One attempted signaling setup: Bob's letter alphabet with priors and
/// Abner's decision rule.
#[derive(Debug, Clone)]
pub struct SignalingProtocol {
    letters: Vec<SpinDirection>,
    priors: Vec<f64>,
    decision: Decision,
}

impl SignalingProtocol {
    pub fn new(
        letters: Vec<SpinDirection>,
        decision: Decision,
        priors: Option<Vec<f64>>,
    ) -> Result<Self> {
        if letters.len() < 2 {
            return Err(Error::LetterCount(letters.len()));
        }
        let priors = match priors {
            Some(p) => {
                if p.len() != letters.len() {
                    return Err(Error::LetterCount(p.len()));
                }
                if p.iter().any(|&x| x < 0.0 || !x.is_finite()) {
                    return Err(Error::InvalidPrior(
                        p.iter().copied().fold(f64::NAN, |_, x| x),
                    ));
                }
                let total: f64 = p.iter().sum();
                if (total - 1.0).abs() > DEFAULT_TOL {
                    return Err(Error::InvalidPrior(total));
                }
                p
            }
            None => vec![1.0 / letters.len() as f64; letters.len()],
        };
        match &decision {
            Decision::Effect(e) => {
                if letters.len() != 2 {
                    return Err(Error::LetterCount(letters.len()));
                }
                if e.dim() != 2 {
                    return Err(Error::RequiresDimension {
                        expected: 2,
                        actual: e.dim(),
                    });
                }
            }
            Decision::Povm(p) => {
                if p.len() != letters.len() {
                    return Err(Error::LetterCount(p.len()));
                }
                if p.dim() != 2 {
                    return Err(Error::RequiresDimension {
                        expected: 2,
                        actual: p.dim(),
                    });
                }
            }
        }
        Ok(Self {
            letters,
            priors,
            decision,
        })
    }

    /// The standard two-letter setup with uniform priors.
    pub fn two_letter(a: SpinDirection, b: SpinDirection, effect: Effect) -> Result<Self> {
        Self::new(vec![a, b], Decision::Effect(effect), None)
    }

    pub fn letters(&self) -> &[SpinDirection] {
        &self.letters
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn decision(&self) -> &Decision {
        &self.decision
    }

    fn decision_arity(&self) -> usize {
        match &self.decision {
            Decision::Effect(_) => 2,
            Decision::Povm(p) => p.len(),
        }
    }

    /// P(decision = k | Abner holds ρ).
    fn decision_distribution(&self, rho: &DensityOperator) -> Result<Vec<f64>> {
        match &self.decision {
            Decision::Effect(e) => {
                let p = e.probability_mixed(rho)?;
                Ok(vec![p, 1.0 - p])
            }
            Decision::Povm(p) => p.probabilities(&rho.clone().into()),
        }
    }
}

/// The ensemble Abner holds given only that Bob measured along `n`:
/// the equal mixture of the two collapse results, ½|+,n⟩⟨+,n| + ½|−,n⟩⟨−,n|.
///
/// This always equals ½I — the whole reason signaling fails — but the
/// mixture is assembled from the projections, not short-circuited, so the
/// collapse to ½I is something tests can observe rather than assume.
pub fn conditional_ensemble(direction: &SpinDirection) -> DensityOperator {
    let obs = spin_component(direction);
    let mix = obs.projections()[0]
        .matrix()
        .scale(0.5)
        .add(&obs.projections()[1].matrix().scale(0.5))
        .expect("same dim");
    DensityOperator::new(mix).expect("equal mixture of orthogonal pure states")
}

/// Abner's state when Bob measures nothing: the reduced singlet.
pub fn unconditional_state() -> DensityOperator {
    singlet()
        .to_density()
        .reduce(Subsystem::Second, (2, 2))
        .expect("singlet is 2⊗2")
}

/// Abner's best-case success probability for the two-letter protocol,
/// prior_a·Tr[Eρ_a] + prior_b·Tr[(I−E)ρ_b] with ρ the conditional
/// ensembles. Equals ½ for every effect and every direction pair.
pub fn inference_success(protocol: &SignalingProtocol) -> Result<f64> {
    if protocol.letters.len() != 2 {
        return Err(Error::LetterCount(protocol.letters.len()));
    }
    let rho_a = conditional_ensemble(&protocol.letters[0]);
    let rho_b = conditional_ensemble(&protocol.letters[1]);
    let e = match &protocol.decision {
        Decision::Effect(e) => e.clone(),
        Decision::Povm(p) => p.outcomes()[0].1.clone(),
    };
    Ok(protocol.priors[0] * e.probability_mixed(&rho_a)?
        + protocol.priors[1] * e.complement().probability_mixed(&rho_b)?)
}

/// Distribution of Abner's decision when Bob does not measure at all.
pub fn decision_marginal_without_measurement(protocol: &SignalingProtocol) -> Result<Vec<f64>> {
    protocol.decision_distribution(&unconditional_state())
}

/// Letter × decision contingency table from a seeded run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialLog {
    pub n_trials: u64,
    pub seed: u64,
    /// counts[letter][decision].
    pub counts: Vec<Vec<u64>>,
}

impl TrialLog {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Trials where the inferred letter matched the sent one.
    pub fn success_count(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, row)| row.get(k).copied().unwrap_or(0))
            .sum()
    }

    pub fn success_rate(&self) -> f64 {
        self.success_count() as f64 / self.n_trials as f64
    }

    pub fn mutual_information_bits(&self) -> f64 {
        mutual_information_bits(&self.counts)
    }

    /// Column sums: the empirical distribution of Abner's decision.
    pub fn decision_marginal(&self) -> Vec<f64> {
        let cols = self.counts.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut sums = vec![0.0; cols];
        for row in &self.counts {
            for (j, &c) in row.iter().enumerate() {
                sums[j] += c as f64;
            }
        }
        sums.iter().map(|s| s / self.n_trials as f64).collect()
    }
}

/// Headline numbers of a simulation run.
#[derive(Debug, Clone, Copy)]
pub struct SignalingSummary {
    pub n_trials: u64,
    pub success_rate: f64,
    /// Binomial standard error of the success rate.
    pub standard_error: f64,
    pub mutual_information_bits: f64,
}

/// One simulated trial, for the optional full dump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub letter: usize,
    /// +1 or −1: Bob's pointer along his chosen axis.
    pub bob_outcome: i8,
    pub decision: usize,
}

/// Per-letter sampling tables, fixed before the trial loop.
struct SamplingTables {
    priors: Vec<f64>,
    /// bob_probs[k] = P(±) when Bob measures letter k.
    bob_probs: Vec<[f64; 2]>,
    /// decision_given[k][b] = decision distribution after Bob saw b.
    decision_given: Vec<[Vec<f64>; 2]>,
}

/// Derives the per-trial distributions from the singlet: Bob's outcome by
/// the Born rule on the joint state, Abner's collapsed state by projecting
/// with P_b ⊗ I and tracing Bob out, the decision by the Born rule on
/// that state.
fn build_tables(protocol: &SignalingProtocol) -> Result<SamplingTables> {
    let joint = singlet();
    let joint_vec = joint.vector();
    let mut bob_probs = Vec::with_capacity(protocol.letters.len());
    let mut decision_given = Vec::with_capacity(protocol.letters.len());
    for n in &protocol.letters {
        let obs = spin_component(n);
        let mut probs = [0.0; 2];
        let mut decisions: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for (b, proj) in obs.projections().iter().enumerate() {
            let lifted = proj.matrix().tensor(&Operator::identity(2));
            let projected = lifted.apply(joint_vec)?;
            let p = projected.norm().powi(2);
            probs[b] = p;
            if p > 1e-12 {
                let collapsed = projected
                    .outer(&projected)?
                    .partial_trace(Subsystem::Second, (2, 2))?
                    .scale(1.0 / p);
                let rho = DensityOperator::new(collapsed)?;
                decisions[b] = protocol.decision_distribution(&rho)?;
            } else {
                decisions[b] = vec![0.0; protocol.decision_arity()];
            }
        }
        bob_probs.push(probs);
        decision_given.push(decisions);
    }
    Ok(SamplingTables {
        priors: protocol.priors.clone(),
        bob_probs,
        decision_given,
    })
}

fn simulate_impl(
    protocol: &SignalingProtocol,
    n_trials: u64,
    seed: u64,
    trace: bool,
) -> Result<(TrialLog, SignalingSummary, Vec<TrialRecord>)> {
    if n_trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let tables = build_tables(protocol)?;
    let n_letters = protocol.letters.len();
    let arity = protocol.decision_arity();
    let blocks = run_trial_blocks(seed, n_trials, |rng, first, count| {
        let mut counts = vec![vec![0u64; arity]; n_letters];
        let mut records = Vec::with_capacity(if trace { count as usize } else { 0 });
        for i in 0..count {
            let letter = sample_index(&tables.priors, rng);
            let bob = sample_index(&tables.bob_probs[letter], rng);
            let decision = sample_index(&tables.decision_given[letter][bob], rng);
            counts[letter][decision] += 1;
            if trace {
                records.push(TrialRecord {
                    trial: first + i,
                    letter,
                    bob_outcome: if bob == 0 { 1 } else { -1 },
                    decision,
                });
            }
        }
        (counts, records)
    });
    let mut counts = vec![vec![0u64; arity]; n_letters];
    let mut records = Vec::new();
    for (block_counts, block_records) in blocks {
        for (row, brow) in counts.iter_mut().zip(&block_counts) {
            for (c, bc) in row.iter_mut().zip(brow) {
                *c += bc;
            }
        }
        records.extend(block_records);
    }
    let log = TrialLog {
        n_trials,
        seed,
        counts,
    };
    let rate = log.success_rate();
    let summary = SignalingSummary {
        n_trials,
        success_rate: rate,
        standard_error: binomial_stderr(rate, n_trials),
        mutual_information_bits: log.mutual_information_bits(),
    };
    Ok((log, summary, records))
}

/// Seeded Monte Carlo of the protocol.
pub fn simulate_signaling(
    protocol: &SignalingProtocol,
    n_trials: u64,
    seed: u64,
) -> Result<(TrialLog, SignalingSummary)> {
    simulate_impl(protocol, n_trials, seed, false).map(|(log, summary, _)| (log, summary))
}

/// As [`simulate_signaling`], also returning every trial in order.
pub fn simulate_signaling_traced(
    protocol: &SignalingProtocol,
    n_trials: u64,
    seed: u64,
) -> Result<(TrialLog, SignalingSummary, Vec<TrialRecord>)> {
    simulate_impl(protocol, n_trials, seed, true)
}

/// Joint outcome statistics of measuring both singlet halves along one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationLog {
    pub n_trials: u64,
    pub seed: u64,
    /// counts[bob][abner], index 0 = outcome +, 1 = outcome −.
    pub counts: [[u64; 2]; 2],
    /// The sampler's joint distribution, after exact zeros are pinned.
    pub joint_distribution: [[f64; 2]; 2],
}

impl CorrelationLog {
    /// Fraction of trials with opposite outcomes.
    pub fn anticorrelated_fraction(&self) -> f64 {
        (self.counts[0][1] + self.counts[1][0]) as f64 / self.n_trials as f64
    }

    pub fn frequency(&self, bob: usize, abner: usize) -> f64 {
        self.counts[bob][abner] as f64 / self.n_trials as f64
    }
}

/// Samples both halves of the singlet along a common axis.
///
/// Joint probabilities come from the Born rule on the singlet; the
/// equal-outcome cells are then exactly zero up to rounding dust
/// (≤ 10⁻¹²), which the sampler pins to 0 and renormalizes — opposite
/// outcomes are anticorrelated in every trial by construction, matching
/// the exact statement rather than approximating it.
pub fn singlet_outcome_correlation(
    direction: &SpinDirection,
    n_trials: u64,
    seed: u64,
) -> Result<CorrelationLog> {
    if n_trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let obs = spin_component(direction);
    let joint = singlet();
    let mut dist = [[0.0f64; 2]; 2];
    let mut total = 0.0;
    for (a, pa) in obs.projections().iter().enumerate() {
        for (b, pb) in obs.projections().iter().enumerate() {
            let lifted = pa.matrix().tensor(pb.matrix());
            let p = lifted.expectation(joint.vector())?.re.max(0.0);
            let p = if p <= 1e-12 { 0.0 } else { p };
            dist[a][b] = p;
            total += p;
        }
    }
    for row in &mut dist {
        for p in row.iter_mut() {
            *p /= total;
        }
    }
    let flat = [dist[0][0], dist[0][1], dist[1][0], dist[1][1]];
    let blocks = run_trial_blocks(seed, n_trials, |rng, _first, count| {
        let mut counts = [[0u64; 2]; 2];
        for _ in 0..count {
            let k = sample_index(&flat, rng);
            counts[k / 2][k % 2] += 1;
        }
        counts
    });
    let mut counts = [[0u64; 2]; 2];
    for block in blocks {
        for a in 0..2 {
            for b in 0..2 {
                counts[a][b] += block[a][b];
            }
        }
    }
    Ok(CorrelationLog {
        n_trials,
        seed,
        counts,
        joint_distribution: dist,
    })
}
