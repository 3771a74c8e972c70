//! Quantum domain objects: states, effects, POVMs, sharp observables,
//! spin components. Constructors enforce the defining inequalities
//! (unit norm, 0 ≤ E ≤ I, ΣE_k = I, ...) so downstream code can assume
//! well-formed inputs.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hilbert::{random_state_vector, C64, CMatrix, Operator, StateVector, Subsystem};
use crate::DEFAULT_TOL;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn pauli_x() -> Operator {
    Operator::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).expect("static")
}

pub fn pauli_y() -> Operator {
    Operator::from_rows(
        2,
        vec![
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    )
    .expect("static")
}

pub fn pauli_z() -> Operator {
    Operator::from_real_rows(2, &[1.0, 0.0, 0.0, -1.0]).expect("static")
}

/// Unit vector in Hilbert space.
#[derive(Debug, Clone)]
pub struct PureState {
    vector: StateVector,
}

impl PureState {
    pub fn new(vector: StateVector) -> Result<Self> {
        let n = vector.norm();
        if (n - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { vector })
    }

    /// Accepts any nonzero vector and rescales it to unit norm.
    pub fn normalizing(vector: StateVector) -> Result<Self> {
        Ok(Self {
            vector: vector.normalized()?,
        })
    }

    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        Self::new(StateVector::basis(dim, k)?)
    }

    pub fn dim(&self) -> usize {
        self.vector.dim()
    }

    pub fn vector(&self) -> &StateVector {
        &self.vector
    }

    /// |ψ⟩⟨ψ|.
    pub fn projector(&self) -> Operator {
        self.vector.outer(&self.vector).expect("same dim")
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::new(self.projector()).expect("pure projector is a valid state")
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        self.vector.inner(&other.vector)
    }

    /// True when the states agree up to a global phase: |⟨self|other⟩| ≥ 1−tol.
    pub fn coincides_with(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self.overlap(other)?.norm() >= 1.0 - tol)
    }
}

/// ½‖ρ−σ‖₁: the operational distinguishability of two states.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    let diff = a.matrix().sub(b.matrix())?;
    let eigs = diff.hermitian_eigenvalues(DEFAULT_TOL)?;
    Ok(0.5 * eigs.iter().map(|l| l.abs()).sum::<f64>())
}

/// Positive unit-trace operator.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: Operator,
}

impl DensityOperator {
    pub fn new(matrix: Operator) -> Result<Self> {
        let herm = matrix.hermiticity_residual();
        if herm > DEFAULT_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DEFAULT_TOL || tr.im.abs() > DEFAULT_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = matrix
            .hermitian_eigenvalues(DEFAULT_TOL)?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -DEFAULT_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Self::new(Operator::identity(dim).scale(1.0 / dim as f64))
    }

    /// Convex mixture Σ wᵢ ρᵢ; weights must be a probability vector.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyPovm);
        }
        let dim = parts[0].1.dim();
        let mut acc = Operator::zeros(dim);
        let mut total = 0.0;
        for (w, rho) in parts {
            if *w < -DEFAULT_TOL {
                return Err(Error::InvalidPrior(*w));
            }
            total += w;
            acc = acc.add(&rho.matrix.scale(*w))?;
        }
        if (total - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::InvalidPrior(total));
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    /// Reduced state of one factor of a bipartite system.
    pub fn reduce(&self, keep: Subsystem, dims: (usize, usize)) -> Result<Self> {
        Self::new(self.matrix.partial_trace(keep, dims)?)
    }
}

/// Operator with spectrum in [0, 1]: the general yes-no measurement element.
#[derive(Debug, Clone)]
pub struct Effect {
    matrix: Operator,
}

impl Effect {
    pub fn new(matrix: Operator) -> Result<Self> {
        let herm = matrix.hermiticity_residual();
        if herm > DEFAULT_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let eigs = matrix.hermitian_eigenvalues(DEFAULT_TOL)?;
        let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        let max = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let violation = (-min).max(max - 1.0);
        if violation > DEFAULT_TOL {
            return Err(Error::NotEffect(violation));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: Operator::identity(dim),
        }
    }

    /// λI for λ ∈ [0,1]: the effects that carry no information about the state.
    pub fn trivial(dim: usize, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::NotEffect((-lambda).max(lambda - 1.0)));
        }
        Self::new(Operator::identity(dim).scale(lambda))
    }

    pub fn from_projector(state: &PureState) -> Self {
        Self {
            matrix: state.projector(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    /// I − E, the complementary effect.
    pub fn complement(&self) -> Self {
        Self {
            matrix: Operator::identity(self.dim())
                .sub(&self.matrix)
                .expect("same dim"),
        }
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.matrix.is_projection(tol)
    }

    /// ⟨ψ|Eψ⟩ clamped to [0,1] against rounding dust.
    pub fn probability_pure(&self, state: &PureState) -> Result<f64> {
        let z = self.matrix.expectation(state.vector())?;
        Ok(z.re.clamp(0.0, 1.0))
    }

    /// Tr[ρE] clamped to [0,1].
    pub fn probability_mixed(&self, rho: &DensityOperator) -> Result<f64> {
        let prod = rho.matrix().mul(&self.matrix)?;
        Ok(prod.trace().re.clamp(0.0, 1.0))
    }
}

/// Pure or mixed preparation, for operations that accept either.
#[derive(Debug, Clone)]
pub enum State {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Pure(p) => p.dim(),
            State::Mixed(m) => m.dim(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        match self {
            State::Pure(p) => p.to_density(),
            State::Mixed(m) => m.clone(),
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityOperator> for State {
    fn from(m: DensityOperator) -> Self {
        State::Mixed(m)
    }
}

/// Outcome probability of an effect in a given state.
pub fn born_probability(e: &Effect, state: &State) -> Result<f64> {
    if e.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: e.dim(),
            right: state.dim(),
        });
    }
    match state {
        State::Pure(p) => e.probability_pure(p),
        State::Mixed(m) => e.probability_mixed(m),
    }
}

/// Labeled effects summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    outcomes: Vec<(String, Effect)>,
}

impl Povm {
    pub fn new(outcomes: Vec<(String, Effect)>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::EmptyPovm);
        }
        let dim = outcomes[0].1.dim();
        let mut seen = std::collections::HashSet::new();
        let mut sum = Operator::zeros(dim);
        for (label, e) in &outcomes {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: e.dim(),
                });
            }
            if !seen.insert(label.clone()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
            sum = sum.add(e.matrix())?;
        }
        let residual = sum
            .sub(&Operator::identity(dim))
            .expect("same dim")
            .frobenius_norm();
        if residual > DEFAULT_TOL {
            return Err(Error::IncompletePovm(residual));
        }
        Ok(Self { outcomes })
    }

    /// Labels outcomes "0", "1", ... in the given order.
    pub fn from_effects(effects: Vec<Effect>) -> Result<Self> {
        Self::new(
            effects
                .into_iter()
                .enumerate()
                .map(|(k, e)| (k.to_string(), e))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].1.dim()
    }

    pub fn outcomes(&self) -> &[(String, Effect)] {
        &self.outcomes
    }

    pub fn effects(&self) -> impl Iterator<Item = &Effect> {
        self.outcomes.iter().map(|(_, e)| e)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.outcomes.iter().map(|(l, _)| l.as_str())
    }

    pub fn effect(&self, label: &str) -> Result<&Effect> {
        self.outcomes
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Born probabilities over all outcomes, in outcome order.
    pub fn probabilities(&self, state: &State) -> Result<Vec<f64>> {
        self.outcomes
            .iter()
            .map(|(_, e)| born_probability(e, state))
            .collect()
    }

    /// True when every effect is a projection: the sharp (ideal) case.
    pub fn is_sharp(&self, tol: f64) -> bool {
        self.effects().all(|e| e.is_projection(tol))
    }
}

/// Structural diagnostics for a candidate POVM, valid or not.
#[derive(Debug, Clone)]
pub struct PovmReport {
    pub dim: usize,
    /// ‖Σ E_k − I‖ (Frobenius).
    pub completeness_residual: f64,
    /// ‖E_k − E_k†‖ per outcome.
    pub hermiticity_residuals: Vec<f64>,
    /// Smallest eigenvalue per outcome; negative values signal a positivity failure.
    pub min_eigenvalues: Vec<f64>,
    /// Largest eigenvalue per outcome; values above 1 exceed the unit bound.
    pub max_eigenvalues: Vec<f64>,
    /// ‖E_k² − E_k‖ per outcome; all ≈ 0 iff the observable is sharp.
    pub projection_residuals: Vec<f64>,
    pub is_valid: bool,
    pub is_sharp: bool,
}

/// Checks a raw operator family against the POVM axioms.
///
/// Diagnostic: never fails on bad physics, only on structural problems
/// (empty input, mismatched dimensions, non-Hermitian entries that have
/// no real spectrum to report).
pub fn validate_povm(candidates: &[(String, Operator)], tol: f64) -> Result<PovmReport> {
    if candidates.is_empty() {
        return Err(Error::EmptyPovm);
    }
    let dim = candidates[0].1.dim();
    let mut sum = Operator::zeros(dim);
    let mut hermiticity = Vec::with_capacity(candidates.len());
    let mut mins = Vec::with_capacity(candidates.len());
    let mut maxs = Vec::with_capacity(candidates.len());
    let mut proj = Vec::with_capacity(candidates.len());
    for (_, op) in candidates {
        if op.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: op.dim(),
            });
        }
        sum = sum.add(op)?;
        let h = op.hermiticity_residual();
        hermiticity.push(h);
        // eigenvalues of the Hermitian part still expose gross violations
        let eigs = Operator::new((op.matrix() + op.matrix().adjoint()) * C64::new(0.5, 0.0))?
            .hermitian_eigenvalues(f64::INFINITY)?;
        mins.push(eigs.iter().copied().fold(f64::INFINITY, f64::min));
        maxs.push(eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        proj.push(op.projection_residual());
    }
    let completeness = sum
        .sub(&Operator::identity(dim))
        .expect("same dim")
        .frobenius_norm();
    let is_valid = completeness <= tol
        && hermiticity.iter().all(|&h| h <= tol)
        && mins.iter().all(|&m| m >= -tol)
        && maxs.iter().all(|&m| m <= 1.0 + tol);
    let is_sharp = is_valid && proj.iter().all(|&r| r <= tol);
    Ok(PovmReport {
        dim,
        completeness_residual: completeness,
        hermiticity_residuals: hermiticity,
        min_eigenvalues: mins,
        max_eigenvalues: maxs,
        projection_residuals: proj,
        is_valid,
        is_sharp,
    })
}

/// Real-eigenvalue observable given by orthogonal projections.
#[derive(Debug, Clone)]
pub struct SharpObservable {
    eigenvalues: Vec<f64>,
    projections: Vec<Effect>,
}

impl SharpObservable {
    pub fn new(spectral_pairs: Vec<(f64, Operator)>) -> Result<Self> {
        if spectral_pairs.is_empty() {
            return Err(Error::EmptyPovm);
        }
        let dim = spectral_pairs[0].1.dim();
        let mut sum = Operator::zeros(dim);
        for (b, p) in &spectral_pairs {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.dim(),
                });
            }
            if !p.is_projection(DEFAULT_TOL) {
                return Err(Error::NotProjection(p.projection_residual()));
            }
            if !b.is_finite() {
                return Err(Error::NonFinite);
            }
            sum = sum.add(p)?;
        }
        for (i, (bi, pi)) in spectral_pairs.iter().enumerate() {
            for (bj, pj) in spectral_pairs.iter().skip(i + 1) {
                if (bi - bj).abs() <= DEFAULT_TOL {
                    return Err(Error::MalformedObservable(format!(
                        "duplicate eigenvalue {bi}"
                    )));
                }
                let cross = pi.mul(pj)?.operator_norm();
                if cross > DEFAULT_TOL {
                    return Err(Error::MalformedObservable(format!(
                        "projections for {bi} and {bj} overlap (‖PᵢPⱼ‖ = {cross:.3e})"
                    )));
                }
            }
        }
        let residual = sum
            .sub(&Operator::identity(dim))
            .expect("same dim")
            .frobenius_norm();
        if residual > DEFAULT_TOL {
            return Err(Error::IncompletePovm(residual));
        }
        let (eigenvalues, projections) = spectral_pairs
            .into_iter()
            .map(|(b, p)| (b, Effect::new(p).expect("projection is an effect")))
            .unzip();
        Ok(Self {
            eigenvalues,
            projections,
        })
    }

    pub fn dim(&self) -> usize {
        self.projections[0].dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projections(&self) -> &[Effect] {
        &self.projections
    }

    /// Σ b_k P_k.
    pub fn operator(&self) -> Operator {
        let mut acc = Operator::zeros(self.dim());
        for (b, p) in self.eigenvalues.iter().zip(&self.projections) {
            acc = acc.add(&p.matrix().scale(*b)).expect("same dim");
        }
        acc
    }

    /// Forgets eigenvalues, keeping them as outcome labels.
    pub fn to_povm(&self) -> Povm {
        Povm::new(
            self.eigenvalues
                .iter()
                .zip(&self.projections)
                .map(|(b, p)| (format!("{b}"), p.clone()))
                .collect(),
        )
        .expect("orthogonal complete projections form a POVM")
    }
}

/// Unit vector on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDirection {
    n: [f64; 3],
}

impl SpinDirection {
    pub fn new(n: [f64; 3]) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::NotUnitDirection(norm));
        }
        Ok(Self { n })
    }

    /// Rescales any nonzero 3-vector.
    pub fn normalizing(n: [f64; 3]) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if norm < 1e-12 || !norm.is_finite() {
            return Err(Error::NotUnitDirection(norm));
        }
        Self::new([n[0] / norm, n[1] / norm, n[2] / norm])
    }

    pub fn x() -> Self {
        Self { n: [1.0, 0.0, 0.0] }
    }

    pub fn y() -> Self {
        Self { n: [0.0, 1.0, 0.0] }
    }

    pub fn z() -> Self {
        Self { n: [0.0, 0.0, 1.0] }
    }

    pub fn components(&self) -> [f64; 3] {
        self.n
    }

    /// n·σ.
    pub fn dot_sigma(&self) -> Operator {
        pauli_x()
            .scale(self.n[0])
            .add(&pauli_y().scale(self.n[1]))
            .and_then(|m| m.add(&pauli_z().scale(self.n[2])))
            .expect("same dim")
    }
}

/// Spin-½ component along `n`: eigenvalues ±½, projections ½(I ± n·σ).
pub fn spin_component(n: &SpinDirection) -> SharpObservable {
    let ns = n.dot_sigma();
    let plus = Operator::identity(2).add(&ns).expect("same dim").scale(0.5);
    let minus = Operator::identity(2).sub(&ns).expect("same dim").scale(0.5);
    SharpObservable::new(vec![(0.5, plus), (-0.5, minus)])
        .expect("unit direction gives orthogonal projections")
}

/// Two spin-½ systems with total spin zero: amplitudes (0, 1/√2, −1/√2, 0).
pub fn singlet() -> PureState {
    PureState::new(
        StateVector::from_real(&[0.0, SQRT_HALF, -SQRT_HALF, 0.0]).expect("static"),
    )
    .expect("unit norm by construction")
}

/// Yes/no/undetermined answer to "does the state have this property".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyStatus {
    /// Pρ = ρ: the property holds with certainty.
    Real,
    /// Pρ = 0: the property is excluded with certainty.
    Absent,
    Indeterminate,
}

impl std::fmt::Display for PropertyStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PropertyStatus::Real => write!(f, "real"),
            PropertyStatus::Absent => write!(f, "absent"),
            PropertyStatus::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

/// Operator-norm residuals (‖Pρ − ρ‖, ‖Pρ‖) behind [`property_status`].
pub fn property_residuals(p: &Effect, rho: &DensityOperator) -> Result<(f64, f64)> {
    let prho = p.matrix().mul(rho.matrix())?;
    let real_residual = prho.sub(rho.matrix())?.operator_norm();
    let absent_residual = prho.operator_norm();
    Ok((real_residual, absent_residual))
}

/// Classifies a projection property as real, absent, or indeterminate in ρ.
pub fn property_status(p: &Effect, rho: &DensityOperator, tol: f64) -> Result<PropertyStatus> {
    if !p.is_projection(DEFAULT_TOL.max(tol)) {
        return Err(Error::NotProjection(p.matrix().projection_residual()));
    }
    let (real_residual, absent_residual) = property_residuals(p, rho)?;
    if real_residual <= tol {
        Ok(PropertyStatus::Real)
    } else if absent_residual <= tol {
        Ok(PropertyStatus::Absent)
    } else {
        Ok(PropertyStatus::Indeterminate)
    }
}

/// Both sides of the certainty lemma for one (effect, state) pair.
///
/// The lemma: ⟨φ|Eφ⟩ = 1 iff Eφ = φ, and dually ⟨φ|Eφ⟩ = 0 iff Eφ = 0.
/// Quantitatively, 0 ≤ E ≤ I gives ‖Eφ−φ‖² ≤ 1−⟨φ|Eφ⟩ and ‖Eφ‖² ≤ ⟨φ|Eφ⟩,
/// so probability within `tol` of an endpoint forces the residual below
/// √tol, and a residual below √tol forces the probability within √tol of
/// the endpoint. The boolean flags apply exactly those scales.
#[derive(Debug, Clone, Copy)]
pub struct CertaintyReport {
    pub probability: f64,
    /// ‖Eφ − φ‖.
    pub fixed_point_residual: f64,
    /// ‖Eφ‖.
    pub annihilation_residual: f64,
    /// probability ≥ 1 − tol.
    pub prob_is_one: bool,
    /// fixed_point_residual ≤ √tol.
    pub fixes_state: bool,
    /// probability ≤ tol.
    pub prob_is_zero: bool,
    /// annihilation_residual ≤ √tol.
    pub annihilates_state: bool,
}

impl CertaintyReport {
    /// Certainty and the eigenvector condition agree on both branches.
    pub fn lemma_holds(&self) -> bool {
        self.prob_is_one == self.fixes_state && self.prob_is_zero == self.annihilates_state
    }
}

pub fn effect_certainty_lemma(e: &Effect, state: &PureState, tol: f64) -> Result<CertaintyReport> {
    if e.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: e.dim(),
            right: state.dim(),
        });
    }
    let applied = e.matrix().apply(state.vector())?;
    let probability = state
        .vector()
        .inner(&applied)?
        .re
        .clamp(0.0, 1.0);
    let fixed_point_residual = applied.sub(state.vector())?.norm();
    let annihilation_residual = applied.norm();
    let root = tol.sqrt();
    Ok(CertaintyReport {
        probability,
        fixed_point_residual,
        annihilation_residual,
        prob_is_one: probability >= 1.0 - tol,
        fixes_state: fixed_point_residual <= root,
        prob_is_zero: probability <= tol,
        annihilates_state: annihilation_residual <= root,
    })
}

/// True iff the effects span the full space of Hermitian operators,
/// i.e. the measurement statistics determine every state.
///
/// Tested as rank of the row-stacked frame matrix: for Hermitian rows,
/// complex rank equals the real dimension of the real span.
pub fn is_informationally_complete(p: &Povm) -> bool {
    let d = p.dim();
    let m = p.len();
    let mut frame = CMatrix::zeros(m, d * d);
    for (k, e) in p.effects().enumerate() {
        for i in 0..d {
            for j in 0..d {
                frame[(k, i * d + j)] = e.matrix().entry(i, j);
            }
        }
    }
    let singular = frame.svd(false, false).singular_values;
    let top = singular.iter().copied().fold(0.0f64, f64::max);
    let threshold = DEFAULT_TOL * top.max(1.0);
    let rank = singular.iter().filter(|&&s| s > threshold).count();
    rank == d * d
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    PureState::new(random_state_vector(dim, rng)).expect("sampler outputs unit vectors")
}

/// Random effect U diag(u₁..u_d) U† with uniform eigenvalues in [0,1].
pub fn random_effect<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Effect {
    let u = crate::hilbert::random_unitary(dim, rng);
    let mut diag = Operator::zeros(dim).matrix().clone();
    for k in 0..dim {
        diag[(k, k)] = C64::new(rng.gen::<f64>(), 0.0);
    }
    let m = u.matrix() * diag * u.matrix().adjoint();
    Effect::new(Operator::new(m).expect("square")).expect("spectrum in [0,1] by construction")
}

/// Random full-rank density operator: mixture of dim+1 Haar pure states
/// with exponential weights.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    let count = dim + 1;
    let raw: Vec<f64> = (0..count)
        .map(|_| -(rng.gen::<f64>().max(1e-12)).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let parts: Vec<(f64, DensityOperator)> = raw
        .iter()
        .map(|w| (w / total, random_pure_state(dim, rng).to_density()))
        .collect();
    DensityOperator::mixture(&parts).expect("convex mixture of states is a state")
}
