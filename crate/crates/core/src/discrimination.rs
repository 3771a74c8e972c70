//! Optimal discrimination of two known pure states.
//!
//! Two figures of merit, two closed forms, and for each an independent
//! brute-force oracle over a gridded effect family:
//!
//! * minimum-error: guess every time, maximize the success probability;
//!   optimum ½(1+√(1−c²)) for equal priors, c = |⟨φ|ψ⟩|.
//! * unambiguous: never misidentify, allow an inconclusive outcome;
//!   optimum 1−c, achieved by subnormalized projections onto the
//!   complements of the two states.
//!
//! The oracles deliberately share no code with the closed forms: they
//! scan explicit effect families and report the best grid point found.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{Operator, StateVector, C64};
use crate::quantum::{Effect, Povm, PureState};

/// A-priori weights for the two hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorPair {
    prior_phi: f64,
    prior_psi: f64,
}

impl PriorPair {
    pub fn new(prior_phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&prior_phi) || !prior_phi.is_finite() {
            return Err(Error::InvalidPrior(prior_phi));
        }
        Ok(Self {
            prior_phi,
            prior_psi: 1.0 - prior_phi,
        })
    }

    pub fn equal() -> Self {
        Self {
            prior_phi: 0.5,
            prior_psi: 0.5,
        }
    }

    pub fn phi(&self) -> f64 {
        self.prior_phi
    }

    pub fn psi(&self) -> f64 {
        self.prior_psi
    }
}

/// Optimal guess-every-time measurement for one state pair.
#[derive(Debug, Clone)]
pub struct MinErrorResult {
    /// The effect answering "it was φ"; projection onto the positive
    /// eigenspace of prior_φ|φ⟩⟨φ| − prior_ψ|ψ⟩⟨ψ|.
    pub effect: Effect,
    pub p_success: f64,
    /// |⟨φ|ψ⟩|.
    pub overlap: f64,
}

/// Optimal never-wrong measurement for one qubit state pair.
#[derive(Debug, Clone)]
pub struct UnambiguousResult {
    pub e1: f64,
    pub e2: f64,
    /// 1 − overlap².
    pub w: f64,
    /// Outcomes "identify_phi", "identify_psi", "inconclusive".
    pub effects: Povm,
    pub p_success: f64,
    /// |⟨φ|ψ⟩|.
    pub overlap: f64,
    /// States coincide up to phase: conclusive outcomes never fire.
    pub degenerate: bool,
}

fn check_same_dim(phi: &PureState, psi: &PureState) -> Result<()> {
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            left: phi.dim(),
            right: psi.dim(),
        });
    }
    Ok(())
}

/// Minimum-error discrimination: maximizes
/// p = prior_φ⟨φ|Eφ⟩ + prior_ψ⟨ψ|(I−E)ψ⟩ over effects E.
///
/// The maximum is p = prior_ψ + Σ λ⁺ over positive eigenvalues of
/// D = prior_φ|φ⟩⟨φ| − prior_ψ|ψ⟩⟨ψ|, attained by the projection onto
/// their eigenvectors. Eigenvalues with |λ| ≤ 10⁻¹² count as zero and are
/// excluded — either choice leaves p unchanged, excluding is deterministic.
pub fn helstrom(phi: &PureState, psi: &PureState, priors: PriorPair) -> Result<MinErrorResult> {
    check_same_dim(phi, psi)?;
    let overlap = phi.overlap(psi)?.norm();
    let d = phi
        .projector()
        .scale(priors.phi())
        .sub(&psi.projector().scale(priors.psi()))?;
    let pairs = d.hermitian_eigensystem(crate::DEFAULT_TOL)?;
    let dim = phi.dim();
    let mut projection = Operator::zeros(dim);
    let mut gain = 0.0;
    for (lambda, v) in &pairs {
        if *lambda > 1e-12 {
            projection = projection.add(&v.outer(v)?)?;
            gain += lambda;
        }
    }
    Ok(MinErrorResult {
        effect: Effect::new(projection)?,
        p_success: priors.psi() + gain,
        overlap,
    })
}

/// Unambiguous discrimination on a qubit, equal priors.
///
/// E₁ = e(I−|ψ⟩⟨ψ|) and E₂ = e(I−|φ⟩⟨φ|) with e = 1/(1+c) never
/// misidentify by construction; the remainder E₃ = I−E₁−E₂ stays positive
/// exactly up to that e, which gives the optimum p = 1−c. The returned
/// p_success is evaluated through the Born rule on the constructed
/// effects, not copied from the formula, so tests can compare the two.
pub fn unambiguous(phi: &PureState, psi: &PureState) -> Result<UnambiguousResult> {
    check_same_dim(phi, psi)?;
    if phi.dim() != 2 {
        return Err(Error::RequiresDimension {
            expected: 2,
            actual: phi.dim(),
        });
    }
    let overlap = phi.overlap(psi)?.norm();
    let degenerate = overlap >= 1.0 - 1e-12;
    let w = (1.0 - overlap * overlap).max(0.0);
    let e = 1.0 / (1.0 + overlap);
    let identity = Operator::identity(2);
    let e1_op = identity.sub(&psi.projector())?.scale(e);
    let e2_op = identity.sub(&phi.projector())?.scale(e);
    let e3_op = identity.sub(&e1_op)?.sub(&e2_op)?;
    let e1 = Effect::new(e1_op)?;
    let e2 = Effect::new(e2_op)?;
    let e3 = Effect::new(e3_op)?;
    let p_success = 0.5 * e1.probability_pure(phi)? + 0.5 * e2.probability_pure(psi)?;
    let effects = Povm::new(vec![
        ("identify_phi".to_string(), e1),
        ("identify_psi".to_string(), e2),
        ("inconclusive".to_string(), e3),
    ])?;
    Ok(UnambiguousResult {
        e1: e,
        e2: e,
        w,
        effects,
        p_success,
        overlap,
        degenerate,
    })
}

/// Whether I − E₁ − E₂ stays positive for the subnormalized-complement
/// family: 1 − (e₁+e₂) + e₁e₂w ≥ 0, with w = 1 − c².
///
/// Callers supply e₁, e₂ ∈ [0,1] and w ∈ [0,1]. A −10⁻¹² slack keeps the
/// saturated optimum (residual exactly 0 in exact arithmetic) feasible
/// under rounding.
pub fn positivity_constraint(e1: f64, e2: f64, w: f64) -> bool {
    positivity_residual(e1, e2, w) >= -1e-12
}

/// The determinant-scale quantity whose sign decides the constraint.
pub fn positivity_residual(e1: f64, e2: f64, w: f64) -> f64 {
    1.0 - (e1 + e2) + e1 * e2 * w
}

/// Rotates a state pair into its common two-dimensional span, preserving
/// ⟨φ|ψ⟩ exactly: φ ↦ (1,0), ψ ↦ (⟨φ|ψ⟩, ‖ψ−⟨φ|ψ⟩φ‖).
///
/// For pairs equal up to phase the second axis is an arbitrary unit
/// vector orthogonal to φ; the image still reproduces the overlap.
pub fn restrict_to_span(phi: &PureState, psi: &PureState) -> Result<(PureState, PureState)> {
    check_same_dim(phi, psi)?;
    let c = phi.overlap(psi)?;
    let residual = psi.vector().sub(&phi.vector().scale(c))?;
    let perp_norm = residual.norm();
    let phi2 = PureState::new(StateVector::from_real(&[1.0, 0.0])?)?;
    let psi2 = PureState::normalizing(StateVector::new(vec![
        c,
        C64::new(perp_norm, 0.0),
    ])?)?;
    Ok((phi2, psi2))
}

/// Best grid point found by [`brute_force_min_error`], with its location.
#[derive(Debug, Clone, Copy)]
pub struct MinErrorSearch {
    pub p: f64,
    /// Weight on the scanned projection Π.
    pub alpha: f64,
    /// Weight on I−Π.
    pub beta: f64,
    /// Bloch polar angle of Π.
    pub theta: f64,
    /// Bloch azimuthal angle of Π.
    pub azimuth: f64,
}

/// Grid search over general two-outcome qubit effects
/// E = αΠ(θ,az) + β(I−Π): the minimum-error oracle.
///
/// The success probability is linear in α and β separately, so for each Π
/// the grid maximum over (α,β) sits at {0,1} endpoints — evaluated
/// directly, with ties resolved to 0. Angles are scanned in parallel;
/// the reduction orders ties by grid index, so the result is identical
/// for any worker count.
pub fn brute_force_min_error(
    phi: &PureState,
    psi: &PureState,
    priors: PriorPair,
    resolution: usize,
) -> Result<f64> {
    brute_force_min_error_search(phi, psi, priors, resolution).map(|s| s.p)
}

pub fn brute_force_min_error_search(
    phi: &PureState,
    psi: &PureState,
    priors: PriorPair,
    resolution: usize,
) -> Result<MinErrorSearch> {
    check_same_dim(phi, psi)?;
    if phi.dim() != 2 {
        return Err(Error::RequiresDimension {
            expected: 2,
            actual: phi.dim(),
        });
    }
    if resolution < 50 {
        return Err(Error::ResolutionTooCoarse {
            min: 50,
            got: resolution,
        });
    }
    let phi_v = phi.vector().clone();
    let psi_v = psi.vector().clone();
    let wp = priors.phi();
    let wq = priors.psi();
    let n = resolution;
    let best = (0..n)
        .into_par_iter()
        .map(|ti| {
            // θ spans [0,π] inclusive; azimuth spans [0,2π) half-open
            let theta = std::f64::consts::PI * ti as f64 / (n - 1) as f64;
            let mut local: Option<(f64, usize, MinErrorSearch)> = None;
            for ai in 0..n {
                let azimuth = 2.0 * std::f64::consts::PI * ai as f64 / n as f64;
                let proj = bloch_projection(theta, azimuth);
                let p_phi = proj.expectation(&phi_v).expect("dim 2").re;
                let p_psi = proj.expectation(&psi_v).expect("dim 2").re;
                // gain from weighting Π by α and I−Π by β, linear in each
                let a = wp * p_phi - wq * p_psi;
                let b = wp * (1.0 - p_phi) - wq * (1.0 - p_psi);
                let alpha = if a > 0.0 { 1.0 } else { 0.0 };
                let beta = if b > 0.0 { 1.0 } else { 0.0 };
                let p = wq + a.max(0.0) + b.max(0.0);
                let idx = ti * n + ai;
                let candidate = (
                    p,
                    idx,
                    MinErrorSearch {
                        p,
                        alpha,
                        beta,
                        theta,
                        azimuth,
                    },
                );
                local = Some(match local {
                    None => candidate,
                    Some(cur) => pick_better(cur, candidate),
                });
            }
            local.expect("n ≥ 50")
        })
        .reduce_with(pick_better)
        .expect("n ≥ 50");
    Ok(best.2)
}

/// Better p wins; equal p resolves to the lower grid index. Associative,
/// hence partition-independent.
fn pick_better<T>(a: (f64, usize, T), b: (f64, usize, T)) -> (f64, usize, T) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Rank-1 projection at Bloch angles (θ, az).
fn bloch_projection(theta: f64, azimuth: f64) -> Operator {
    let half = theta / 2.0;
    let v = StateVector::new(vec![
        C64::new(half.cos(), 0.0),
        C64::new(azimuth.cos(), azimuth.sin()) * half.sin(),
    ])
    .expect("finite");
    v.outer(&v).expect("same dim")
}

/// Best grid point found by [`brute_force_unambiguous`], with its location.
#[derive(Debug, Clone, Copy)]
pub struct UnambiguousSearch {
    pub p: f64,
    pub e1: f64,
    pub e2: f64,
}

/// Grid search over the subnormalized-complement family
/// E₁ = e₁(I−|ψ⟩⟨ψ|), E₂ = e₂(I−|φ⟩⟨φ|): the unambiguous oracle.
///
/// Grid points violating [`positivity_constraint`] are rejected. The
/// objective depends on e₁+e₂ only, so maximizers come in ties along
/// anti-diagonals; ties resolve first to the most symmetric pair
/// (smallest |e₁−e₂|), then to the lower grid index. Both rules are
/// associative under max-combining, so any grid partitioning agrees.
pub fn brute_force_unambiguous(
    phi: &PureState,
    psi: &PureState,
    resolution: usize,
) -> Result<f64> {
    brute_force_unambiguous_search(phi, psi, resolution).map(|s| s.p)
}

pub fn brute_force_unambiguous_search(
    phi: &PureState,
    psi: &PureState,
    resolution: usize,
) -> Result<UnambiguousSearch> {
    check_same_dim(phi, psi)?;
    if phi.dim() != 2 {
        return Err(Error::RequiresDimension {
            expected: 2,
            actual: phi.dim(),
        });
    }
    if resolution < 2 {
        return Err(Error::ResolutionTooCoarse {
            min: 2,
            got: resolution,
        });
    }
    let overlap = phi.overlap(psi)?.norm();
    let w = (1.0 - overlap * overlap).max(0.0);
    // ⟨φ|(I−P_ψ)|φ⟩ = ⟨ψ|(I−P_φ)|ψ⟩ = w; evaluate through the operators
    // anyway so the oracle exercises the actual effect family
    let identity = Operator::identity(2);
    let comp_psi = identity.sub(&psi.projector())?;
    let comp_phi = identity.sub(&phi.projector())?;
    let yield_phi = comp_psi.expectation(phi.vector())?.re;
    let yield_psi = comp_phi.expectation(psi.vector())?.re;
    let n = resolution;
    let step = 1.0 / (n - 1) as f64;
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let e1 = i as f64 * step;
            let mut local: Option<((f64, usize, usize), UnambiguousSearch)> = None;
            for j in 0..n {
                let e2 = j as f64 * step;
                if !positivity_constraint(e1, e2, w) {
                    continue;
                }
                let p = 0.5 * e1 * yield_phi + 0.5 * e2 * yield_psi;
                let asym = i.abs_diff(j);
                let idx = i * n + j;
                let key = (p, asym, idx);
                let candidate = (key, UnambiguousSearch { p, e1, e2 });
                local = Some(match local {
                    None => candidate,
                    Some(cur) => pick_better_symmetric(cur, candidate),
                });
            }
            local
        })
        .reduce_with(|a, b| match (a, b) {
            (Some(x), Some(y)) => Some(pick_better_symmetric(x, y)),
            (x, None) => x,
            (None, y) => y,
        })
        .flatten()
        .expect("e1 = e2 = 0 is always feasible");
    Ok(best.1)
}

/// Higher p wins; ties prefer smaller |i−j|, then smaller index.
fn pick_better_symmetric<T>(
    a: ((f64, usize, usize), T),
    b: ((f64, usize, usize), T),
) -> ((f64, usize, usize), T) {
    let (pa, sa, ia) = a.0;
    let (pb, sb, ib) = b.0;
    if pb > pa || (pb == pa && (sb < sa || (sb == sa && ib < ia))) {
        b
    } else {
        a
    }
}
