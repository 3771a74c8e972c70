//! Dense complex linear algebra over finite-dimensional Hilbert spaces.
//!
//! Everything here is desk-scale: dimensions of a few up to ~16, dense
//! storage, direct solvers. The fixed tensor convention is object-major:
//! the first factor owns the slow index, so a joint basis index is
//! `i_first * dim_second + i_second`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Which tensor factor survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Raw complex vector in a fixed orthonormal basis. Not necessarily normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: CVector,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            data: CVector::from_vec(amplitudes),
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Standard basis vector |k⟩ in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        assert!(k < dim, "basis index {k} out of range for dim {dim}");
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.data
    }

    pub fn amplitude(&self, k: usize) -> C64 {
        self.data[k]
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self.data.dotc(&other.data))
    }

    /// Rank-1 operator |self⟩⟨other|.
    pub fn outer(&self, other: &Self) -> Result<Operator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let m = &self.data * other.data.adjoint();
        Operator::new(m)
    }

    /// Kronecker product; `self` owns the slow (major) index.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.dim(), other.dim());
        let mut out = CVector::zeros(da * db);
        for i in 0..da {
            for j in 0..db {
                out[i * db + j] = self.data[i] * other.data[j];
            }
        }
        Self { data: out }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            data: &self.data * factor,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            data: &self.data - &other.data,
        })
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self {
            data: &self.data / C64::new(n, 0.0),
        })
    }

    pub(crate) fn from_cvector(data: CVector) -> Self {
        debug_assert!(!data.is_empty());
        Self { data }
    }
}

/// Square complex matrix acting on a fixed-dimension Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    data: CMatrix,
}

impl Operator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { data: entries })
    }

    /// Builds from a row-major list of dim*dim entries.
    pub fn from_rows(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        Self::new(CMatrix::from_row_iterator(dim, dim, entries))
    }

    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_rows(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Largest singular value, computed from the spectrum of A†A.
    pub fn operator_norm(&self) -> f64 {
        let gram = self.data.adjoint() * &self.data;
        let herm = hermitian_part(&gram);
        let eigs = nalgebra::SymmetricEigen::new(herm).eigenvalues;
        eigs.iter().fold(0.0f64, |m, &l| m.max(l.max(0.0))).sqrt()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            data: &self.data - &other.data,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            data: &self.data * &other.data,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            data: &self.data * C64::new(factor, 0.0),
        }
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self {
            data: &self.data * factor,
        }
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: state.dim(),
            });
        }
        Ok(StateVector::from_cvector(&self.data * state.amplitudes()))
    }

    /// ⟨state|A|state⟩.
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        let applied = self.apply(state)?;
        state.inner(&applied)
    }

    /// Kronecker product; `self` owns the slow (major) index.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            data: self.data.kronecker(&other.data),
        }
    }

    /// Traces out one tensor factor of an operator on a bipartite space.
    ///
    /// `dims = (d1, d2)` with joint index `i1 * d2 + i2`.
    pub fn partial_trace(&self, keep: Subsystem, dims: (usize, usize)) -> Result<Self> {
        let (d1, d2) = dims;
        if d1 == 0 || d2 == 0 {
            return Err(Error::EmptyDimension);
        }
        if d1 * d2 != self.dim() {
            return Err(Error::DimensionMismatch {
                left: d1 * d2,
                right: self.dim(),
            });
        }
        let out = match keep {
            Subsystem::First => {
                let mut m = CMatrix::zeros(d1, d1);
                for i in 0..d1 {
                    for ip in 0..d1 {
                        let mut acc = C64::new(0.0, 0.0);
                        for j in 0..d2 {
                            acc += self.data[(i * d2 + j, ip * d2 + j)];
                        }
                        m[(i, ip)] = acc;
                    }
                }
                m
            }
            Subsystem::Second => {
                let mut m = CMatrix::zeros(d2, d2);
                for j in 0..d2 {
                    for jp in 0..d2 {
                        let mut acc = C64::new(0.0, 0.0);
                        for i in 0..d1 {
                            acc += self.data[(i * d2 + j, i * d2 + jp)];
                        }
                        m[(j, jp)] = acc;
                    }
                }
                m
            }
        };
        Self::new(out)
    }

    /// ‖A − A†‖ (operator norm).
    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.adjoint()).expect("same dim").operator_norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// ‖A†A − I‖ (operator norm).
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.adjoint().mul(self).expect("same dim");
        gram.sub(&Self::identity(self.dim()))
            .expect("same dim")
            .operator_norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let eigs = nalgebra::SymmetricEigen::new(hermitian_part(&self.data)).eigenvalues;
        eigs.iter().all(|&l| l >= -tol)
    }

    /// ‖P² − P‖ (operator norm).
    pub fn projection_residual(&self) -> f64 {
        let sq = self.mul(self).expect("same dim");
        sq.sub(self).expect("same dim").operator_norm()
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.projection_residual() <= tol
    }

    /// Real eigenvalues of a Hermitian operator, unordered.
    pub fn hermitian_eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        let res = self.hermiticity_residual();
        if res > tol {
            return Err(Error::NotHermitian(res));
        }
        let eigs = nalgebra::SymmetricEigen::new(hermitian_part(&self.data)).eigenvalues;
        Ok(eigs.iter().copied().collect())
    }

    /// Full spectral decomposition of a Hermitian operator.
    ///
    /// Eigenvalues are sorted descending; eigenvectors are orthonormal and
    /// satisfy Σ λᵢ|vᵢ⟩⟨vᵢ| = A within numerical error.
    pub fn hermitian_eigensystem(&self, tol: f64) -> Result<Vec<(f64, StateVector)>> {
        let res = self.hermiticity_residual();
        if res > tol {
            return Err(Error::NotHermitian(res));
        }
        let d = self.dim();
        let se = nalgebra::SymmetricEigen::new(hermitian_part(&self.data));
        let mut pairs: Vec<(f64, StateVector)> = (0..d)
            .map(|k| {
                let v = StateVector::from_cvector(se.eigenvectors.column(k).into_owned());
                (se.eigenvalues[k], v)
            })
            .collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite eigenvalues"));
        Ok(pairs)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

/// (A + A†)/2; removes rounding-level asymmetry before eigensolves.
fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Complex matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unitary via QR of a complex Gaussian matrix, with the
/// R-diagonal phase fix that makes the distribution uniform.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let g = gaussian_matrix(dim, rng);
    let qr = g.qr();
    let r_diag: Vec<C64> = (0..dim).map(|k| qr.r()[(k, k)]).collect();
    let mut q = qr.q();
    for (k, rkk) in r_diag.iter().enumerate() {
        let phase = if rkk.norm() > 0.0 {
            rkk / rkk.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    Operator::new(q).expect("square by construction")
}

/// Haar-random unit vector.
pub fn random_state_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let n = v.norm();
        if n > 1e-6 {
            return StateVector::from_cvector(v / C64::new(n, 0.0));
        }
    }
}
