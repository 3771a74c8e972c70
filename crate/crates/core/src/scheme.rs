//! Indirect measurement schemes: a probe prepared in a fixed state, a
//! unitary coupling on object⊗probe, and a projective pointer reading on
//! the probe. The scheme induces a POVM on the object alone; this module
//! builds that observable, conditions the object state on pointer
//! outcomes, and detects outcomes that carry no information.
//!
//! Index convention throughout: object is the first (slow) tensor factor.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hilbert::{random_unitary, CMatrix, Operator, StateVector, Subsystem};
use crate::quantum::{Effect, Povm, PureState};
use crate::DEFAULT_TOL;

/// Probe + unitary coupling + projective pointer.
#[derive(Debug, Clone)]
pub struct MeasurementScheme {
    object_dim: usize,
    probe_dim: usize,
    probe_init: PureState,
    coupling: Operator,
    pointer: Povm,
}

impl MeasurementScheme {
    pub fn new(
        object_dim: usize,
        probe_dim: usize,
        probe_init: PureState,
        coupling: Operator,
        pointer: Povm,
    ) -> Result<Self> {
        if object_dim == 0 || probe_dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if probe_init.dim() != probe_dim {
            return Err(Error::DimensionMismatch {
                left: probe_dim,
                right: probe_init.dim(),
            });
        }
        if pointer.dim() != probe_dim {
            return Err(Error::DimensionMismatch {
                left: probe_dim,
                right: pointer.dim(),
            });
        }
        if coupling.dim() != object_dim * probe_dim {
            return Err(Error::DimensionMismatch {
                left: object_dim * probe_dim,
                right: coupling.dim(),
            });
        }
        let ur = coupling.unitarity_residual();
        if ur > DEFAULT_TOL {
            return Err(Error::NotUnitary(ur));
        }
        for (label, q) in pointer.outcomes() {
            if !q.is_projection(DEFAULT_TOL) {
                return Err(Error::MalformedScheme(format!(
                    "pointer outcome {label} is not a projection (residual {:.3e})",
                    q.matrix().projection_residual()
                )));
            }
        }
        // completeness is the Povm invariant; orthogonality still deserves a check
        for (i, (li, qi)) in pointer.outcomes().iter().enumerate() {
            for (lj, qj) in pointer.outcomes().iter().skip(i + 1) {
                let cross = qi.matrix().mul(qj.matrix())?.operator_norm();
                if cross > DEFAULT_TOL {
                    return Err(Error::MalformedScheme(format!(
                        "pointer outcomes {li} and {lj} overlap (‖QᵢQⱼ‖ = {cross:.3e})"
                    )));
                }
            }
        }
        Ok(Self {
            object_dim,
            probe_dim,
            probe_init,
            coupling,
            pointer,
        })
    }

    /// Coupling that applies `operations[a]` to the object when the probe
    /// sits in basis state |a⟩, read out in the probe basis. Every induced
    /// effect is then λI: the pointer never learns anything, while outcomes
    /// whose operation is the identity do not even disturb the object.
    pub fn probe_controlled(probe_init: PureState, operations: Vec<Operator>) -> Result<Self> {
        if operations.is_empty() {
            return Err(Error::EmptyDimension);
        }
        let probe_dim = operations.len();
        if probe_init.dim() != probe_dim {
            return Err(Error::DimensionMismatch {
                left: probe_dim,
                right: probe_init.dim(),
            });
        }
        let object_dim = operations[0].dim();
        let joint = object_dim * probe_dim;
        let mut u = CMatrix::zeros(joint, joint);
        for (a, v) in operations.iter().enumerate() {
            if v.dim() != object_dim {
                return Err(Error::DimensionMismatch {
                    left: object_dim,
                    right: v.dim(),
                });
            }
            let vr = v.unitarity_residual();
            if vr > DEFAULT_TOL {
                return Err(Error::NotUnitary(vr));
            }
            for i in 0..object_dim {
                for j in 0..object_dim {
                    u[(i * probe_dim + a, j * probe_dim + a)] = v.entry(i, j);
                }
            }
        }
        let pointer = standard_basis_pointer(probe_dim)?;
        Self::new(
            object_dim,
            probe_dim,
            probe_init,
            Operator::new(u)?,
            pointer,
        )
    }

    pub fn object_dim(&self) -> usize {
        self.object_dim
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    pub fn probe_init(&self) -> &PureState {
        &self.probe_init
    }

    pub fn coupling(&self) -> &Operator {
        &self.coupling
    }

    pub fn pointer(&self) -> &Povm {
        &self.pointer
    }

    /// U(ψ ⊗ φ_probe): the joint state after the coupling.
    pub fn evolve(&self, state: &PureState) -> Result<StateVector> {
        if state.dim() != self.object_dim {
            return Err(Error::DimensionMismatch {
                left: self.object_dim,
                right: state.dim(),
            });
        }
        let joint = state.vector().tensor(self.probe_init.vector());
        self.coupling.apply(&joint)
    }

    /// I ⊗ Q for a pointer effect.
    fn lift_pointer(&self, q: &Effect) -> Operator {
        Operator::identity(self.object_dim).tensor(q.matrix())
    }
}

/// Pointer outcome with its probability and the conditioned object state.
#[derive(Debug, Clone)]
pub struct OutcomeRecord {
    pub label: String,
    pub probability: f64,
    pub post_state: crate::quantum::DensityOperator,
}

/// The object-space observable whose statistics reproduce the pointer's.
///
/// E_k has matrix elements ⟨i⊗φ_probe|U†(I⊗Q_k)U|j⊗φ_probe⟩ — the unique
/// operator family matching the pointer probabilities for every object
/// state, by sesquilinearity.
pub fn induced_observable(s: &MeasurementScheme) -> Result<Povm> {
    let (d, p) = (s.object_dim, s.probe_dim);
    // V = U · (I_d ⊗ |φ_probe⟩), a (d·p) × d isometry
    let mut embed = CMatrix::zeros(d * p, d);
    for j in 0..d {
        for a in 0..p {
            embed[(j * p + a, j)] = s.probe_init.vector().amplitude(a);
        }
    }
    let v = s.coupling.matrix() * embed;
    let mut outcomes = Vec::with_capacity(s.pointer.len());
    for (label, q) in s.pointer.outcomes() {
        let lifted = s.lift_pointer(q);
        let e = v.adjoint() * lifted.matrix() * &v;
        outcomes.push((label.clone(), Effect::new(Operator::new(e)?)?));
    }
    Povm::new(outcomes)
}

/// Pointer-side outcome distribution: p_k = ⟨Uψφ|(I⊗Q_k)|Uψφ⟩.
///
/// Deliberately computed on the joint space, not through
/// [`induced_observable`]; the two routes agreeing is the probability
/// reproducibility condition and is asserted in tests, not assumed here.
pub fn outcome_probabilities(
    s: &MeasurementScheme,
    state: &PureState,
) -> Result<Vec<(String, f64)>> {
    let evolved = s.evolve(state)?;
    s.pointer
        .outcomes()
        .iter()
        .map(|(label, q)| {
            let lifted = s.lift_pointer(q);
            let p = lifted.expectation(&evolved)?.re.clamp(0.0, 1.0);
            Ok((label.clone(), p))
        })
        .collect()
}

/// Object state conditioned on one pointer outcome: project the joint
/// state with I⊗Q_k, trace out the probe, normalize.
pub fn conditional_post_state(
    s: &MeasurementScheme,
    state: &PureState,
    label: &str,
) -> Result<OutcomeRecord> {
    let q = s.pointer.effect(label)?;
    let evolved = s.evolve(state)?;
    let projected = s.lift_pointer(q).apply(&evolved)?;
    let probability = projected.norm().powi(2);
    if probability <= 1e-12 {
        return Err(Error::ZeroProbabilityOutcome {
            label: label.to_string(),
            probability,
        });
    }
    let joint = projected.outer(&projected)?;
    let reduced = joint
        .partial_trace(Subsystem::First, (s.object_dim, s.probe_dim))?
        .scale(1.0 / probability);
    Ok(OutcomeRecord {
        label: label.to_string(),
        probability,
        post_state: crate::quantum::DensityOperator::new(reduced)?,
    })
}

/// Flags outcomes whose induced effect is λI, i.e. whose probability is
/// the same for every object state. Returns λ_k = Tr[E_k]/d when
/// ‖E_k − λ_kI‖ ≤ tol, None otherwise.
pub fn detect_trivial_effects(
    s: &MeasurementScheme,
    tol: f64,
) -> Result<Vec<(String, Option<f64>)>> {
    let povm = induced_observable(s)?;
    let d = s.object_dim as f64;
    povm.outcomes()
        .iter()
        .map(|(label, e)| {
            let lambda = e.matrix().trace().re / d;
            let residual = e
                .matrix()
                .sub(&Operator::identity(s.object_dim).scale(lambda))?
                .operator_norm();
            Ok((
                label.clone(),
                if residual <= tol { Some(lambda) } else { None },
            ))
        })
        .collect()
}

/// Retention/leakage of one pointer subset: Q = Σ_{k∈S} Q_k,
/// retention = ⟨Uφφ|(I⊗Q)|Uφφ⟩, leakage = ⟨Uψφ|(I⊗Q)|Uψφ⟩.
#[derive(Debug, Clone)]
pub struct PointerSubsetStat {
    pub labels: Vec<String>,
    pub retention: f64,
    pub leakage: f64,
}

/// Outcome of scanning every pointer subset for a discriminating reading.
#[derive(Debug, Clone)]
pub struct NoGoReport {
    /// |⟨φ|ψ⟩|².
    pub overlap_sq: f64,
    pub subsets: Vec<PointerSubsetStat>,
    /// Smallest leakage among subsets with retention ≥ 1 − tol.
    pub min_leakage_at_full_retention: Option<f64>,
    /// A subset with retention ≥ 1 − tol and leakage ≤ tol exists.
    pub perfect_discrimination_found: bool,
    /// Every full-retention subset has leakage ≥ overlap_sq − slack,
    /// slack = 2√tol + tol. Vacuously true with no full-retention subset.
    pub certainty_bound_holds: bool,
}

/// Tests whether any pointer reading keeps φ with certainty while
/// excluding ψ. Unitarity preserves ⟨φ|ψ⟩ on the joint space, so for
/// non-orthogonal pairs every subset that retains φ must leak at least
/// |⟨φ|ψ⟩|² on ψ; the report quantifies this over all 2^m subsets.
pub fn scheme_no_go_check(
    s: &MeasurementScheme,
    phi: &PureState,
    psi: &PureState,
    tol: f64,
) -> Result<NoGoReport> {
    let m = s.pointer.len();
    if m > 16 {
        return Err(Error::MalformedScheme(format!(
            "pointer subset scan over {m} outcomes is 2^{m} subsets; refusing"
        )));
    }
    let overlap_sq = phi.overlap(psi)?.norm_sqr();
    let evolved_phi = s.evolve(phi)?;
    let evolved_psi = s.evolve(psi)?;
    // per-outcome quadratic forms; subset values are their sums
    let mut phi_terms = Vec::with_capacity(m);
    let mut psi_terms = Vec::with_capacity(m);
    for (_, q) in s.pointer.outcomes() {
        let lifted = s.lift_pointer(q);
        phi_terms.push(lifted.expectation(&evolved_phi)?.re);
        psi_terms.push(lifted.expectation(&evolved_psi)?.re);
    }
    let labels: Vec<&str> = s.pointer.labels().collect();
    let mut subsets = Vec::with_capacity(1 << m);
    let mut min_leakage: Option<f64> = None;
    let mut perfect = false;
    let slack = 2.0 * tol.sqrt() + tol;
    let mut bound_holds = true;
    for mask in 0u32..(1 << m) {
        let mut retention = 0.0;
        let mut leakage = 0.0;
        let mut chosen = Vec::new();
        for (k, label) in labels.iter().enumerate() {
            if mask & (1 << k) != 0 {
                retention += phi_terms[k];
                leakage += psi_terms[k];
                chosen.push(label.to_string());
            }
        }
        let retention = retention.clamp(0.0, 1.0);
        let leakage = leakage.clamp(0.0, 1.0);
        if retention >= 1.0 - tol {
            min_leakage = Some(min_leakage.map_or(leakage, |v: f64| v.min(leakage)));
            if leakage <= tol {
                perfect = true;
            }
            if leakage < overlap_sq - slack {
                bound_holds = false;
            }
        }
        subsets.push(PointerSubsetStat {
            labels: chosen,
            retention,
            leakage,
        });
    }
    Ok(NoGoReport {
        overlap_sq,
        subsets,
        min_leakage_at_full_retention: min_leakage,
        perfect_discrimination_found: perfect,
        certainty_bound_holds: bound_holds,
    })
}

/// Pointer that reads the probe in its standard basis.
pub fn standard_basis_pointer(probe_dim: usize) -> Result<Povm> {
    let outcomes = (0..probe_dim)
        .map(|k| {
            let e = PureState::basis(probe_dim, k)?;
            Ok((k.to_string(), Effect::from_projector(&e)))
        })
        .collect::<Result<Vec<_>>>()?;
    Povm::new(outcomes)
}

/// Scheme with a Haar-random coupling and a Haar-random orthonormal
/// pointer basis; the generic case for property tests.
pub fn random_scheme<R: Rng + ?Sized>(
    object_dim: usize,
    probe_dim: usize,
    rng: &mut R,
) -> MeasurementScheme {
    let coupling = random_unitary(object_dim * probe_dim, rng);
    let basis_change = random_unitary(probe_dim, rng);
    let outcomes = (0..probe_dim)
        .map(|k| {
            let col = StateVector::new(basis_change.matrix().column(k).iter().copied().collect())
                .expect("unitary column");
            (
                k.to_string(),
                Effect::new(col.outer(&col).expect("same dim")).expect("projection"),
            )
        })
        .collect();
    let pointer = Povm::new(outcomes).expect("orthonormal basis projectors");
    let probe_init = crate::quantum::random_pure_state(probe_dim, rng);
    MeasurementScheme::new(object_dim, probe_dim, probe_init, coupling, pointer)
        .expect("constructed from unitaries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::C64;
    use crate::quantum::{born_probability, random_pure_state, PureState};
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    /// |i⟩|a⟩ → |a⟩|i⟩ on 2⊗2.
    fn swap_scheme() -> MeasurementScheme {
        let mut u = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for a in 0..2 {
                u[(a * 2 + i, i * 2 + a)] = C64::new(1.0, 0.0);
            }
        }
        MeasurementScheme::new(
            2,
            2,
            PureState::basis(2, 0).unwrap(),
            Operator::new(u).unwrap(),
            standard_basis_pointer(2).unwrap(),
        )
        .unwrap()
    }

    /// |i⟩|a⟩ → |i⟩|a⊕i⟩: object controls the probe flip.
    fn cnot_scheme() -> MeasurementScheme {
        let mut u = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for a in 0..2 {
                u[(i * 2 + (a ^ i), i * 2 + a)] = C64::new(1.0, 0.0);
            }
        }
        MeasurementScheme::new(
            2,
            2,
            PureState::basis(2, 0).unwrap(),
            Operator::new(u).unwrap(),
            standard_basis_pointer(2).unwrap(),
        )
        .unwrap()
    }

    fn identity_scheme() -> MeasurementScheme {
        let probe_init = PureState::new(
            StateVector::from_real(&[0.6, 0.8]).unwrap(),
        )
        .unwrap();
        MeasurementScheme::new(
            2,
            2,
            probe_init,
            Operator::identity(4),
            standard_basis_pointer(2).unwrap(),
        )
        .unwrap()
    }

    fn plus_x() -> PureState {
        PureState::new(StateVector::from_real(&[SQRT_HALF, SQRT_HALF]).unwrap()).unwrap()
    }

    fn plus_y() -> PureState {
        PureState::new(
            StateVector::new(vec![C64::new(SQRT_HALF, 0.0), C64::new(0.0, SQRT_HALF)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn swap_scheme_induces_object_basis_measurement() {
        let povm = induced_observable(&swap_scheme()).unwrap();
        for k in 0..2 {
            let expect = PureState::basis(2, k).unwrap().projector();
            let got = povm.effect(&k.to_string()).unwrap();
            assert!(got.matrix().sub(&expect).unwrap().frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn uncoupled_scheme_induces_trivial_effects() {
        let povm = induced_observable(&identity_scheme()).unwrap();
        // λ_k = |⟨k|probe_init⟩|²
        for (k, lambda) in [(0usize, 0.36), (1usize, 0.64)] {
            let got = povm.effect(&k.to_string()).unwrap();
            let expect = Operator::identity(2).scale(lambda);
            assert!(got.matrix().sub(&expect).unwrap().frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn cnot_scheme_induces_sharp_z_measurement() {
        let povm = induced_observable(&cnot_scheme()).unwrap();
        for k in 0..2 {
            let expect = PureState::basis(2, k).unwrap().projector();
            let got = povm.effect(&k.to_string()).unwrap();
            assert!(got.matrix().sub(&expect).unwrap().frobenius_norm() < 1e-12);
        }
        // probability reproducibility spot-check on basis states and |+,x⟩
        for state in [
            PureState::basis(2, 0).unwrap(),
            PureState::basis(2, 1).unwrap(),
            plus_x(),
        ] {
            let pointer_side = outcome_probabilities(&cnot_scheme(), &state).unwrap();
            for (label, p) in pointer_side {
                let e = povm.effect(&label).unwrap();
                let object_side = born_probability(e, &state.clone().into()).unwrap();
                assert!((p - object_side).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn swap_scheme_probabilities_follow_object_state() {
        let probs = outcome_probabilities(&swap_scheme(), &PureState::basis(2, 0).unwrap()).unwrap();
        assert!((probs[0].1 - 1.0).abs() < 1e-12);
        assert!(probs[1].1.abs() < 1e-12);
    }

    #[test]
    fn cnot_on_transverse_state_is_unbiased() {
        let probs = outcome_probabilities(&cnot_scheme(), &plus_x()).unwrap();
        assert!((probs[0].1 - 0.5).abs() < 1e-12);
        assert!((probs[1].1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one_for_random_schemes() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let s = random_scheme(3, 2, &mut rng);
            let state = random_pure_state(3, &mut rng);
            let total: f64 = outcome_probabilities(&s, &state)
                .unwrap()
                .iter()
                .map(|(_, p)| p)
                .sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn cnot_collapse_gives_basis_post_state() {
        let record = conditional_post_state(&cnot_scheme(), &plus_x(), "0").unwrap();
        assert!((record.probability - 0.5).abs() < 1e-12);
        let expect = PureState::basis(2, 0).unwrap().projector();
        assert!(
            record
                .post_state
                .matrix()
                .sub(&expect)
                .unwrap()
                .frobenius_norm()
                < 1e-12
        );
    }

    #[test]
    fn uncoupled_scheme_does_not_disturb() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10 {
            let state = random_pure_state(2, &mut rng);
            for label in ["0", "1"] {
                let record = conditional_post_state(&identity_scheme(), &state, label).unwrap();
                let expect = state.projector();
                assert!(
                    record
                        .post_state
                        .matrix()
                        .sub(&expect)
                        .unwrap()
                        .frobenius_norm()
                        < 1e-12
                );
            }
        }
    }

    #[test]
    fn swap_post_state_is_probe_init() {
        // whichever outcome fires, the object now carries the swapped-in probe state
        let s = swap_scheme();
        let record = conditional_post_state(&s, &plus_x(), "0").unwrap();
        let expect = PureState::basis(2, 0).unwrap().projector();
        assert!(
            record
                .post_state
                .matrix()
                .sub(&expect)
                .unwrap()
                .frobenius_norm()
                < 1e-12
        );
    }

    #[test]
    fn zero_probability_outcome_is_an_error() {
        let s = swap_scheme();
        // swap + probe |0⟩ on object |1⟩: outcome 0 never fires
        let got = conditional_post_state(&s, &PureState::basis(2, 1).unwrap(), "0");
        assert!(matches!(got, Err(Error::ZeroProbabilityOutcome { .. })));
    }

    /// Conditional expectations computed on the joint space — the defining
    /// ratio — must match the reduced post state for every object operator.
    #[test]
    fn post_state_reproduces_joint_conditional_expectations() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..5 {
            let s = random_scheme(2, 3, &mut rng);
            let state = random_pure_state(2, &mut rng);
            let evolved = s.evolve(&state).unwrap();
            for (label, q) in s.pointer().outcomes() {
                let lifted = s.lift_pointer(q);
                let denom = lifted.expectation(&evolved).unwrap().re;
                if denom < 1e-6 {
                    continue;
                }
                let record = conditional_post_state(&s, &state, label).unwrap();
                // operator basis: matrix units E_ij
                for i in 0..2 {
                    for j in 0..2 {
                        let mut b = DMatrix::zeros(2, 2);
                        b[(i, j)] = C64::new(1.0, 0.0);
                        let b = Operator::new(b).unwrap();
                        let joint_num = b
                            .tensor(q.matrix())
                            .expectation(&evolved)
                            .unwrap();
                        let lhs = record.post_state.matrix().mul(&b).unwrap().trace();
                        let rhs = joint_num / C64::new(denom, 0.0);
                        assert!((lhs - rhs).norm() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_detection_flags_uncoupled_scheme() {
        let flags = detect_trivial_effects(&identity_scheme(), 1e-6).unwrap();
        let expect = [0.36, 0.64];
        for ((_, lambda), want) in flags.iter().zip(expect) {
            let lambda = lambda.expect("uncoupled outcome must be trivial");
            assert!((lambda - want).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_detection_passes_cnot_scheme() {
        let flags = detect_trivial_effects(&cnot_scheme(), 1e-6).unwrap();
        assert!(flags.iter().all(|(_, lambda)| lambda.is_none()));
    }

    #[test]
    fn probe_controlled_identity_outcome_is_trivial_and_undisturbing() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let probe_init = random_pure_state(2, &mut rng);
        let s = MeasurementScheme::probe_controlled(
            probe_init,
            vec![Operator::identity(2), random_unitary(2, &mut rng)],
        )
        .unwrap();
        let flags = detect_trivial_effects(&s, 1e-6).unwrap();
        assert!(flags.iter().all(|(_, l)| l.is_some()));
        // outcome "0" leaves the object exactly where it was
        for _ in 0..5 {
            let state = random_pure_state(2, &mut rng);
            let record = conditional_post_state(&s, &state, "0").unwrap();
            assert!(
                record
                    .post_state
                    .matrix()
                    .sub(&state.projector())
                    .unwrap()
                    .frobenius_norm()
                    < 1e-10
            );
        }
    }

    #[test]
    fn no_go_scan_finds_no_perfect_subset_for_nonorthogonal_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..10 {
            let s = random_scheme(2, 2, &mut rng);
            let report = scheme_no_go_check(&s, &plus_x(), &plus_y(), 1e-9).unwrap();
            assert!((report.overlap_sq - 0.5).abs() < 1e-12);
            assert!(!report.perfect_discrimination_found);
            assert!(report.certainty_bound_holds);
        }
    }

    #[test]
    fn no_go_scan_allows_orthogonal_discrimination_via_swap() {
        let phi = PureState::basis(2, 0).unwrap();
        let psi = PureState::basis(2, 1).unwrap();
        let report = scheme_no_go_check(&swap_scheme(), &phi, &psi, 1e-9).unwrap();
        assert!(report.overlap_sq < 1e-15);
        assert!(report.perfect_discrimination_found);
        assert_eq!(report.min_leakage_at_full_retention, Some(0.0));
    }

    #[test]
    fn no_go_scan_on_identical_inputs_has_equal_retention_and_leakage() {
        let report =
            scheme_no_go_check(&cnot_scheme(), &plus_x(), &plus_x(), 1e-9).unwrap();
        for stat in &report.subsets {
            assert!((stat.retention - stat.leakage).abs() < 1e-12);
        }
    }

    #[test]
    fn coupling_preserves_inner_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..10 {
            let s = random_scheme(2, 3, &mut rng);
            let phi = random_pure_state(2, &mut rng);
            let psi = random_pure_state(2, &mut rng);
            let before = phi.overlap(&psi).unwrap();
            let after = s
                .evolve(&phi)
                .unwrap()
                .inner(&s.evolve(&psi).unwrap())
                .unwrap();
            assert!((before - after).norm() < 1e-10);
        }
    }

    #[test]
    fn average_post_state_is_a_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let s = random_scheme(2, 3, &mut rng);
        let state = random_pure_state(2, &mut rng);
        let mut avg = Operator::zeros(2);
        for (label, p) in outcome_probabilities(&s, &state).unwrap() {
            if p <= 1e-12 {
                continue;
            }
            let record = conditional_post_state(&s, &state, &label).unwrap();
            avg = avg.add(&record.post_state.matrix().scale(p)).unwrap();
        }
        assert!((avg.trace().re - 1.0).abs() < 1e-10);
        assert!(avg.is_positive_semidefinite(1e-9));
    }

    #[test]
    fn scheme_constructor_rejects_non_unitary_coupling() {
        let got = MeasurementScheme::new(
            2,
            2,
            PureState::basis(2, 0).unwrap(),
            Operator::identity(4).scale(0.5),
            standard_basis_pointer(2).unwrap(),
        );
        assert!(matches!(got, Err(Error::NotUnitary(_))));
    }

    #[test]
    fn scheme_constructor_rejects_unsharp_pointer() {
        let fuzzy = Povm::new(vec![
            ("a".into(), Effect::trivial(2, 0.5).unwrap()),
            ("b".into(), Effect::trivial(2, 0.5).unwrap()),
        ])
        .unwrap();
        let got = MeasurementScheme::new(
            2,
            2,
            PureState::basis(2, 0).unwrap(),
            Operator::identity(4),
            fuzzy,
        );
        assert!(matches!(got, Err(Error::MalformedScheme(_))));
    }
}
