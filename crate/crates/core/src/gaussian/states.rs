use nalgebra::{DMatrix, Matrix2};

use super::{z_matrix, CovarianceMatrix, GaussianState, QuadratureVector};
use crate::error::{check_range, Error, Result};

pub fn vacuum(modes: usize) -> Result<GaussianState> {
    if modes == 0 {
        return Err(Error::OutOfRange {
            name: "n_modes",
            value: 0.0,
            expected: ">= 1",
        });
    }
    Ok(GaussianState {
        mean: QuadratureVector::zeros(modes),
        cov: CovarianceMatrix::identity(modes),
    })
}

/// Coherent state: vacuum noise around an arbitrary mean.
pub fn coherent(mean: QuadratureVector) -> GaussianState {
    let modes = mean.mode_count();
    GaussianState {
        mean,
        cov: CovarianceMatrix::identity(modes),
    }
}

/// Single-mode thermal state with `n` mean photons, `V = (2n+1)𝕀₂`.
pub fn thermal(n: f64) -> Result<GaussianState> {
    check_range("n", n, n >= 0.0, ">= 0")?;
    Ok(GaussianState {
        mean: QuadratureVector::zeros(1),
        cov: CovarianceMatrix(DMatrix::identity(2, 2) * (2.0 * n + 1.0)),
    })
}

/// Squeezed coherent state, `V = diag(e^{-2r}, e^{2r})`. Negative `r`
/// squeezes the momentum quadrature instead.
pub fn squeezed(r: f64, mean: QuadratureVector) -> GaussianState {
    GaussianState {
        mean,
        cov: CovarianceMatrix(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            (-2.0 * r).exp(),
            (2.0 * r).exp(),
        ]))),
    }
}

/// Most general single-mode Gaussian state, `V = (2n+1) R(θ) S(2r) R(θ)ᵀ`.
pub fn general_single_mode(
    n: f64,
    r: f64,
    theta: f64,
    mean: QuadratureVector,
) -> Result<GaussianState> {
    check_range("n", n, n >= 0.0, ">= 0")?;
    if mean.len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            actual: mean.len(),
        });
    }
    let (s, c) = theta.sin_cos();
    let rot = Matrix2::new(c, s, -s, c);
    let sq = Matrix2::new((-2.0 * r).exp(), 0.0, 0.0, (2.0 * r).exp());
    let v = rot * sq * rot.transpose() * (2.0 * n + 1.0);
    // R S Rᵀ is symmetric analytically; pin the off-diagonal pair
    let off = 0.5 * (v[(0, 1)] + v[(1, 0)]);
    let m = DMatrix::from_row_slice(2, 2, &[v[(0, 0)], off, off, v[(1, 1)]]);
    Ok(GaussianState {
        mean,
        cov: CovarianceMatrix(m),
    })
}

/// Zero-mean two-mode state with covariance `[A, C; Cᵀ, B]`.
pub fn two_mode_from_blocks(
    a: &Matrix2<f64>,
    b: &Matrix2<f64>,
    c: &Matrix2<f64>,
) -> Result<GaussianState> {
    let mut m = DMatrix::zeros(4, 4);
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.transpose());
    let cov = CovarianceMatrix::new(m, super::DEFAULT_TOL)?;
    GaussianState::new(QuadratureVector::zeros(2), cov)
}

/// Two-mode squeezed vacuum: `A = B = cosh(2r)𝕀₂`, `C = sinh(2r)ℤ`.
pub fn tmsv(r: f64) -> GaussianState {
    symmetric_tmst(r, 0.0)
}

/// Symmetric two-mode squeezed thermal state: the TMSV blocks scaled by `2n+1`.
pub fn tmst(r: f64, n: f64) -> Result<GaussianState> {
    check_range("n", n, n >= 0.0, ">= 0")?;
    Ok(symmetric_tmst(r, n))
}

fn symmetric_tmst(r: f64, n: f64) -> GaussianState {
    let scale = 2.0 * n + 1.0;
    let a = Matrix2::identity() * (scale * (2.0 * r).cosh());
    let c = z_matrix() * (scale * (2.0 * r).sinh());
    let mut m = DMatrix::zeros(4, 4);
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&c);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c);
    GaussianState {
        mean: QuadratureVector::zeros(2),
        cov: CovarianceMatrix(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::physicality;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-12;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn vacuum_shapes() {
        let v1 = vacuum(1).unwrap();
        assert_eq!(v1.mean().as_slice(), &[0.0, 0.0]);
        assert_eq!(v1.cov().matrix(), &DMatrix::identity(2, 2));
        assert_eq!(vacuum(2).unwrap().cov().matrix(), &DMatrix::identity(4, 4));
        assert!(vacuum(0).is_err());
    }

    #[test]
    fn coherent_keeps_mean() {
        assert_eq!(coherent(QuadratureVector::pair(0.0, 0.0)), vacuum(1).unwrap());
        let c = coherent(QuadratureVector::pair(3.0, -1.0));
        assert_eq!(c.mean().as_slice(), &[3.0, -1.0]);
        assert_eq!(c.cov().matrix(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn thermal_cov_and_spectrum() {
        assert_eq!(thermal(0.0).unwrap(), vacuum(1).unwrap());
        assert_eq!(thermal(1.0).unwrap().cov().matrix(), &(DMatrix::identity(2, 2) * 3.0));
        let p = physicality(thermal(2.0).unwrap().cov().matrix(), 1e-10).unwrap();
        assert_eq!(p.spectrum.len(), 1);
        assert!(close(p.spectrum[0], 5.0, 1e-12));
        assert!(thermal(-0.1).is_err());
    }

    #[test]
    fn squeezed_cov() {
        assert_eq!(squeezed(0.0, QuadratureVector::pair(0.0, 0.0)), vacuum(1).unwrap());
        let s = squeezed(1.0, QuadratureVector::pair(0.0, 0.0));
        let m = s.cov().matrix();
        assert!(close(m[(0, 0)], (-2.0f64).exp(), TOL));
        assert!(close(m[(1, 1)], 2.0f64.exp(), TOL));
        for r in [-3.0, -0.5, 0.0, 0.7, 2.5] {
            let d = squeezed(r, QuadratureVector::pair(1.0, 1.0)).cov().determinant();
            assert!(close(d, 1.0, 1e-12), "r={r} det={d}");
        }
    }

    #[test]
    fn general_single_mode_cases() {
        for theta in [0.0, 0.3, 1.7, -2.2] {
            let g = general_single_mode(0.0, 0.0, theta, QuadratureVector::pair(0.0, 0.0)).unwrap();
            let m = g.cov().matrix();
            assert!(close(m[(0, 0)], 1.0, TOL) && close(m[(1, 1)], 1.0, TOL));
            assert!(close(m[(0, 1)], 0.0, TOL));
        }
        let g = general_single_mode(0.0, 1.0, 0.0, QuadratureVector::pair(0.0, 0.0)).unwrap();
        assert!(close(g.cov().matrix()[(0, 0)], (-2.0f64).exp(), TOL));
        assert!(close(g.cov().matrix()[(1, 1)], 2.0f64.exp(), TOL));
        assert!(general_single_mode(-1.0, 0.0, 0.0, QuadratureVector::pair(0.0, 0.0)).is_err());
    }

    #[test]
    fn general_single_mode_matches_hand_product() {
        // explicit 2x2 arithmetic, independent of nalgebra
        let (n, r, th) = (1.0f64, 0.5f64, PI / 4.0);
        let (c, s) = (th.cos(), th.sin());
        let rot = [[c, s], [-s, c]];
        let sq = [[(-2.0 * r).exp(), 0.0], [0.0, (2.0 * r).exp()]];
        let mut rs = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    rs[i][j] += rot[i][k] * sq[k][j];
                }
            }
        }
        let mut v = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    v[i][j] += rs[i][k] * rot[j][k];
                }
                v[i][j] *= 2.0 * n + 1.0;
            }
        }
        // frozen: 3cosh(1) on the diagonal, 3sinh(1) off it
        assert!(close(v[0][0], 4.629241904, 1e-8));
        assert!(close(v[0][1], 3.525603580, 1e-8));
        let g = general_single_mode(n, r, th, QuadratureVector::pair(0.0, 0.0)).unwrap();
        let m = g.cov().matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(m[(i, j)], v[i][j], 1e-12));
            }
        }
    }

    #[test]
    fn tmsv_blocks() {
        assert_eq!(tmsv(0.0), vacuum(2).unwrap());
        let t = tmsv(1.0);
        let a = t.cov().block(0, 0);
        let b = t.cov().block(1, 1);
        let c = t.cov().block(0, 1);
        assert!((a - Matrix2::identity() * 2.0f64.cosh()).abs().max() < TOL);
        assert!((b - Matrix2::identity() * 2.0f64.cosh()).abs().max() < TOL);
        assert!((c - z_matrix() * 2.0f64.sinh()).abs().max() < TOL);
    }

    #[test]
    fn tmst_reduces_to_tmsv() {
        for r in [0.0, 0.3, 1.0, 2.2] {
            assert_eq!(tmst(r, 0.0).unwrap(), tmsv(r));
        }
        let t = tmst(0.5, 1.0).unwrap();
        assert!(close(t.cov().block(0, 0)[(0, 0)], 3.0 * 1.0f64.cosh(), TOL));
        assert!(tmst(0.5, -1.0).is_err());
    }

    #[test]
    fn from_blocks_matches_factory() {
        let a = Matrix2::identity() * 0.8f64.cosh();
        let c = z_matrix() * 0.8f64.sinh();
        let s = two_mode_from_blocks(&a, &a, &c).unwrap();
        assert_eq!(s.cov().matrix(), tmsv(0.4).cov().matrix());
    }
}
