//! Full state reconstruction from measurement statistics, and the sharp
//! observable that can't do it.
//!
//! One unsharp four-outcome qubit POVM (tetrahedron on the Bloch sphere)
//! determines every density operator by linear inversion of its outcome
//! frequencies. Any sharp observable, by contrast, leaves a whole family
//! of "phase twins" — distinct states with bit-identical statistics —
//! which this module also constructs.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hilbert::{CMatrix, Operator, C64};
use crate::mc::{run_trial_blocks, sample_index};
use crate::quantum::{
    pauli_x, pauli_y, pauli_z, DensityOperator, Effect, Povm, PureState, SharpObservable, State,
};
use crate::DEFAULT_TOL;

/// Outcome frequencies tied to the POVM that produced them.
#[derive(Debug, Clone)]
pub struct FrequencyVector {
    povm: Povm,
    frequencies: Vec<f64>,
}

impl FrequencyVector {
    /// Frequencies from exact (Born-rule) computation: sum to 1 within 10⁻⁹.
    pub fn exact(povm: Povm, frequencies: Vec<f64>) -> Result<Self> {
        Self::checked(povm, frequencies, DEFAULT_TOL)
    }

    /// Frequencies from finite sampling: sum to 1 within 10⁻⁶.
    pub fn empirical(povm: Povm, frequencies: Vec<f64>) -> Result<Self> {
        Self::checked(povm, frequencies, 1e-6)
    }

    fn checked(povm: Povm, frequencies: Vec<f64>, tol: f64) -> Result<Self> {
        if frequencies.len() != povm.len() {
            return Err(Error::FrequencyMismatch {
                expected: povm.len(),
                got: frequencies.len(),
            });
        }
        if frequencies.iter().any(|f| !f.is_finite()) {
            return Err(Error::NonFinite);
        }
        if frequencies.iter().any(|&f| f < 0.0) {
            return Err(Error::NotPositive(
                frequencies.iter().copied().fold(f64::INFINITY, f64::min),
            ));
        }
        let total: f64 = frequencies.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidTrace(total));
        }
        Ok(Self { povm, frequencies })
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }
}

/// Phase assignment f(b_k), one real value per eigenvalue of a sharp
/// observable.
#[derive(Debug, Clone)]
pub struct PhaseFunction {
    values: Vec<f64>,
}

impl PhaseFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { values })
    }

    pub fn zero(len: usize) -> Self {
        Self {
            values: vec![0.0; len],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Up-to-additive-constant test: a constant f only changes the global
    /// phase, so only non-constant assignments produce genuine twins.
    pub fn is_constant(&self, tol: f64) -> bool {
        self.values
            .windows(2)
            .all(|w| (w[0] - w[1]).abs() <= tol)
    }
}

/// Tetrahedron vertex directions: Σ_k a_k = 0, pairwise dot −⅓.
pub const TETRAHEDRON_VERTICES: [[f64; 3]; 4] = [
    [0.0, 0.0, 1.0],
    [0.9428090415820634, 0.0, -1.0 / 3.0],
    [-0.4714045207910317, 0.816496580927726, -1.0 / 3.0],
    [-0.4714045207910317, -0.816496580927726, -1.0 / 3.0],
];

/// The symmetric informationally complete qubit POVM:
/// E_k = ¼(I + a_k·σ) over the tetrahedron vertices. Each effect has
/// eigenvalues 0 and ½ — far from any projection.
pub fn tetrahedron_povm() -> Povm {
    let outcomes = TETRAHEDRON_VERTICES
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let dotted = pauli_x()
                .scale(a[0])
                .add(&pauli_y().scale(a[1]))
                .and_then(|m| m.add(&pauli_z().scale(a[2])))
                .expect("same dim");
            let e = Operator::identity(2)
                .add(&dotted)
                .expect("same dim")
                .scale(0.25);
            (k.to_string(), Effect::new(e).expect("¼(1±|a|) ∈ [0,1]"))
        })
        .collect();
    Povm::new(outcomes).expect("vertices sum to zero")
}

/// Born-rule outcome distribution as a [`FrequencyVector`].
pub fn predict_frequencies(povm: &Povm, state: &DensityOperator) -> Result<FrequencyVector> {
    if povm.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            left: povm.dim(),
            right: state.dim(),
        });
    }
    let frequencies = povm.probabilities(&State::Mixed(state.clone()))?;
    FrequencyVector::exact(povm.clone(), frequencies)
}

/// Samples outcomes of `povm` on `state` and reports empirical
/// frequencies. Seeded and block-parallel: identical for any worker count.
pub fn sample_frequencies(
    povm: &Povm,
    state: &State,
    n_samples: u64,
    seed: u64,
) -> Result<FrequencyVector> {
    if n_samples == 0 {
        return Err(Error::ZeroTrials);
    }
    let probs = povm.probabilities(state)?;
    let blocks = run_trial_blocks(seed, n_samples, |rng, _first, count| {
        let mut counts = vec![0u64; probs.len()];
        for _ in 0..count {
            counts[sample_index(&probs, rng)] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; probs.len()];
    for block in blocks {
        for (c, b) in counts.iter_mut().zip(block) {
            *c += b;
        }
    }
    let frequencies = counts
        .iter()
        .map(|&c| c as f64 / n_samples as f64)
        .collect();
    FrequencyVector::empirical(povm.clone(), frequencies)
}

/// Orthonormal (Frobenius) basis of Hermitian d×d operators, d² of them.
fn hermitian_basis(dim: usize) -> Vec<CMatrix> {
    let mut basis = Vec::with_capacity(dim * dim);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..dim {
        let mut m = CMatrix::zeros(dim, dim);
        m[(i, i)] = C64::new(1.0, 0.0);
        basis.push(m);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut re = CMatrix::zeros(dim, dim);
            re[(i, j)] = C64::new(inv_sqrt2, 0.0);
            re[(j, i)] = C64::new(inv_sqrt2, 0.0);
            basis.push(re);
            let mut im = CMatrix::zeros(dim, dim);
            im[(i, j)] = C64::new(0.0, inv_sqrt2);
            im[(j, i)] = C64::new(0.0, -inv_sqrt2);
            basis.push(im);
        }
    }
    basis
}

/// Linear-inversion tomography: least-squares solve of Tr[ρE_k] = f_k
/// over Hermitian ρ, then projection to the state space (eigenvalue
/// clipping to [0,1], trace renormalization).
///
/// Exact frequencies of a valid state round-trip within 10⁻⁹; the repair
/// step only matters for noisy input. Rank-deficient POVMs (not
/// informationally complete) are rejected rather than silently completed.
pub fn reconstruct_state(povm: &Povm, freq: &FrequencyVector) -> Result<DensityOperator> {
    let d = povm.dim();
    let needed = d * d;
    if freq.frequencies().len() != povm.len() {
        return Err(Error::FrequencyMismatch {
            expected: povm.len(),
            got: freq.frequencies().len(),
        });
    }
    let basis = hermitian_basis(d);
    // design matrix: A[k][j] = Tr[E_k B_j], real because both are Hermitian
    let mut design = DMatrix::<f64>::zeros(povm.len(), needed);
    for (k, e) in povm.effects().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            design[(k, j)] = (e.matrix().matrix() * b).trace().re;
        }
    }
    let rhs = DVector::from_column_slice(freq.frequencies());
    let svd = design.svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0f64, f64::max);
    let eps = 1e-9 * sigma_max.max(1.0);
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    if rank < needed {
        return Err(Error::NotInformationallyComplete { rank, needed });
    }
    let coeffs = svd
        .solve(&rhs, eps)
        .map_err(|_| Error::DegenerateReconstruction)?;
    let mut raw = CMatrix::zeros(d, d);
    for (x, b) in coeffs.iter().zip(&basis) {
        raw += b * C64::new(*x, 0.0);
    }
    // repair: clip spectrum to [0,1], renormalize the trace
    let raw_op = Operator::new(raw)?;
    let pairs = raw_op.hermitian_eigensystem(1e-6)?;
    let mut repaired = Operator::zeros(d);
    let mut trace = 0.0;
    for (lambda, v) in &pairs {
        let clipped = lambda.clamp(0.0, 1.0);
        if clipped > 0.0 {
            repaired = repaired.add(&v.outer(v)?.scale(clipped))?;
            trace += clipped;
        }
    }
    if trace <= 1e-12 {
        return Err(Error::DegenerateReconstruction);
    }
    DensityOperator::new(repaired.scale(1.0 / trace))
}

/// Σ_k e^{if(b_k)} P_k ψ: a state with exactly the same statistics as ψ
/// under the sharp observable, yet a different state whenever ψ straddles
/// at least two eigenspaces and f is non-constant there.
pub fn phase_twin(
    psi: &PureState,
    observable: &SharpObservable,
    f: &PhaseFunction,
) -> Result<PureState> {
    if psi.dim() != observable.dim() {
        return Err(Error::DimensionMismatch {
            left: observable.dim(),
            right: psi.dim(),
        });
    }
    if f.values().len() != observable.eigenvalues().len() {
        return Err(Error::PhaseFunctionMismatch {
            expected: observable.eigenvalues().len(),
            got: f.values().len(),
        });
    }
    let mut twin = crate::hilbert::StateVector::new(vec![C64::new(0.0, 0.0); psi.dim()])
        .expect("dim ≥ 1");
    for (fk, p) in f.values().iter().zip(observable.projections()) {
        let phase = C64::new(fk.cos(), fk.sin());
        twin = twin.add(&p.matrix().apply(psi.vector())?.scale(phase))?;
    }
    // ‖twin‖ = 1 already (orthogonal pieces, unit phases); normalize away dust
    PureState::normalizing(twin)
}
