//! N-mode Gaussian states in the symplectic representation.
//!
//! Quadratures are ordered `(x₁, p₁, …, x_N, p_N)` and measured in units
//! where the vacuum covariance matrix is the identity (ħ = 2). A Gaussian
//! state is fully described by its first moments and covariance matrix.

mod spectrum;
mod states;
mod transforms;
mod wigner;

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::error::{Error, Result};
use crate::format::sig12;

pub use spectrum::{is_symplectic, physicality, symplectic_residual, Physicality};
pub use states::{
    coherent, general_single_mode, squeezed, thermal, tmst, tmsv, two_mode_from_blocks, vacuum,
};
pub use transforms::{
    beamsplitter, direct_sum, displacement, identity, rotation, squeezer, two_mode_squeezer,
};

/// Default tolerance for symmetry and symplecticity checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// `diag(1, -1)`, the single-mode reflection used throughout the fidelity formulas.
pub fn z_matrix() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

/// First moments `(x₁, p₁, …, x_N, p_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureVector(DVector<f64>);

impl QuadratureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() % 2 != 0 {
            return Err(Error::Dimension {
                expected: 2 * (values.len() / 2).max(1),
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("quadrature vector"));
        }
        Ok(Self(DVector::from_vec(values)))
    }

    pub fn zeros(modes: usize) -> Self {
        Self(DVector::zeros(2 * modes))
    }

    /// Single-mode vector `(x, p)`.
    pub fn pair(x: f64, p: f64) -> Self {
        Self(DVector::from_vec(vec![x, p]))
    }

    pub(crate) fn from_dvector(v: DVector<f64>) -> Self {
        Self(v)
    }

    pub fn mode_count(&self) -> usize {
        self.0.len() / 2
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<f64> {
        &self.0
    }

    /// `(x_k, p_k)` of mode `k`.
    pub fn mode(&self, k: usize) -> (f64, f64) {
        (self.0[2 * k], self.0[2 * k + 1])
    }
}

/// Real symmetric `2N×2N` covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(DMatrix<f64>);

impl CovarianceMatrix {
    /// Validates shape and symmetry within `tol`. Physicality is checked
    /// separately, on demand, with [`CovarianceMatrix::physicality`].
    pub fn new(matrix: DMatrix<f64>, tol: f64) -> Result<Self> {
        check_phase_space(&matrix)?;
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("covariance matrix"));
        }
        let asymmetry = max_asymmetry(&matrix);
        if asymmetry > tol {
            return Err(Error::Asymmetric { asymmetry });
        }
        Ok(Self(matrix))
    }

    pub fn identity(modes: usize) -> Self {
        Self(DMatrix::identity(2 * modes, 2 * modes))
    }

    pub fn mode_count(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// The `2×2` block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }

    pub fn physicality(&self, tol: f64) -> Result<Physicality> {
        physicality(&self.0, tol)
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }
}

/// A Gaussian state `ρ(x̄, V)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: QuadratureVector,
    cov: CovarianceMatrix,
}

impl GaussianState {
    pub fn new(mean: QuadratureVector, cov: CovarianceMatrix) -> Result<Self> {
        if mean.mode_count() != cov.mode_count() {
            return Err(Error::Dimension {
                expected: cov.0.nrows(),
                actual: mean.len(),
            });
        }
        Ok(Self { mean, cov })
    }

    pub fn mean(&self) -> &QuadratureVector {
        &self.mean
    }

    pub fn cov(&self) -> &CovarianceMatrix {
        &self.cov
    }

    pub fn mode_count(&self) -> usize {
        self.mean.mode_count()
    }

    /// `x̄ → S x̄ + d`, `V → S V Sᵀ`.
    pub fn apply(&self, t: &SymplecticTransform) -> Result<Self> {
        let dim = self.mean.len();
        if t.dimension() != dim {
            return Err(Error::Dimension {
                expected: dim,
                actual: t.dimension(),
            });
        }
        let s = t.matrix();
        let mean = s * self.mean.as_dvector() + t.displacement().as_dvector();
        let cov = s * self.cov.matrix() * s.transpose();
        // congruence keeps symmetry up to rounding; restore it exactly
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self {
            mean: QuadratureVector(mean),
            cov: CovarianceMatrix(cov),
        })
    }

    /// Shifts the first moments of one mode by `delta`; the covariance is untouched.
    pub fn displace(&self, delta: &QuadratureVector, mode: usize) -> Result<Self> {
        if delta.len() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                actual: delta.len(),
            });
        }
        let modes = self.mode_count();
        if mode >= modes {
            return Err(Error::ModeOutOfRange { mode, modes });
        }
        let mut mean = self.mean.0.clone();
        mean[2 * mode] += delta.0[0];
        mean[2 * mode + 1] += delta.0[1];
        Ok(Self {
            mean: QuadratureVector(mean),
            cov: self.cov.clone(),
        })
    }

    /// Reduced state of the listed modes, in the listed order.
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        let n = self.mode_count();
        if let Some(&bad) = modes.iter().find(|&&m| m >= n) {
            return Err(Error::ModeOutOfRange { mode: bad, modes: n });
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean.0[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.cov.0[(idx[r], idx[c])]);
        Ok(Self {
            mean: QuadratureVector(mean),
            cov: CovarianceMatrix(cov),
        })
    }

    /// Tensor product with another state (modes of `other` appended).
    pub fn tensor(&self, other: &GaussianState) -> Self {
        let a = self.mean.len();
        let b = other.mean.len();
        let mut mean = DVector::zeros(a + b);
        mean.rows_mut(0, a).copy_from(&self.mean.0);
        mean.rows_mut(a, b).copy_from(&other.mean.0);
        let mut cov = DMatrix::zeros(a + b, a + b);
        cov.view_mut((0, 0), (a, a)).copy_from(&self.cov.0);
        cov.view_mut((a, a), (b, b)).copy_from(&other.cov.0);
        Self {
            mean: QuadratureVector(mean),
            cov: CovarianceMatrix(cov),
        }
    }

    pub fn wigner(&self, x: &QuadratureVector) -> Result<f64> {
        wigner::wigner(self, x)
    }

    /// CSV header matching [`GaussianState::csv_row`]: means, then the
    /// covariance entries in row-major order.
    pub fn csv_header(modes: usize) -> Vec<String> {
        let dim = 2 * modes;
        let mut header: Vec<String> = (0..modes)
            .flat_map(|k| [format!("mean_x{}", k + 1), format!("mean_p{}", k + 1)])
            .collect();
        for i in 0..dim {
            for j in 0..dim {
                header.push(format!("cov_{}_{}", i, j));
            }
        }
        header
    }

    pub fn csv_row(&self) -> Vec<String> {
        let dim = self.mean.len();
        let mut row: Vec<String> = self.mean.0.iter().map(|&v| sig12(v)).collect();
        for i in 0..dim {
            for j in 0..dim {
                row.push(sig12(self.cov.0[(i, j)]));
            }
        }
        row
    }
}

/// `Ω = ⊕ω`, `ω = [[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm(DMatrix<f64>);

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        let dim = 2 * modes;
        let mut m = DMatrix::zeros(dim, dim);
        for k in 0..modes {
            m[(2 * k, 2 * k + 1)] = 1.0;
            m[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self(m)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// Affine symplectic map `x → S x + d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
    displacement: QuadratureVector,
}

impl SymplecticTransform {
    /// Builds a transform from a raw matrix; symplecticity is not enforced
    /// here so callers can inspect candidate matrices with [`is_symplectic`].
    pub fn new(matrix: DMatrix<f64>, displacement: QuadratureVector) -> Result<Self> {
        check_phase_space(&matrix)?;
        if displacement.len() != matrix.nrows() {
            return Err(Error::Dimension {
                expected: matrix.nrows(),
                actual: displacement.len(),
            });
        }
        Ok(Self {
            matrix,
            displacement,
        })
    }

    pub(crate) fn linear(matrix: DMatrix<f64>) -> Self {
        let n = matrix.nrows();
        Self {
            matrix,
            displacement: QuadratureVector(DVector::zeros(n)),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn displacement(&self) -> &QuadratureVector {
        &self.displacement
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn mode_count(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// `self` followed by `next`: `x → S₂(S₁x + d₁) + d₂`.
    pub fn then(&self, next: &SymplecticTransform) -> Result<Self> {
        if next.dimension() != self.dimension() {
            return Err(Error::Dimension {
                expected: self.dimension(),
                actual: next.dimension(),
            });
        }
        let matrix = &next.matrix * &self.matrix;
        let d = &next.matrix * self.displacement.as_dvector() + next.displacement.as_dvector();
        Ok(Self {
            matrix,
            displacement: QuadratureVector(d),
        })
    }

    pub fn is_symplectic(&self, tol: f64) -> bool {
        is_symplectic(&self.matrix, tol).unwrap_or(false)
    }

    /// Image of a first-moment vector.
    pub fn map(&self, x: &QuadratureVector) -> Result<QuadratureVector> {
        if x.len() != self.dimension() {
            return Err(Error::Dimension {
                expected: self.dimension(),
                actual: x.len(),
            });
        }
        Ok(QuadratureVector(
            &self.matrix * x.as_dvector() + self.displacement.as_dvector(),
        ))
    }
}

fn check_phase_space(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 || m.nrows() % 2 != 0 {
        return Err(Error::NotPhaseSpace {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

pub(crate) fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}
