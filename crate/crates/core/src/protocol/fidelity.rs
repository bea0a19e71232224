use nalgebra::Matrix2;

use crate::error::{check_range, Error, Result};
use crate::gaussian::{z_matrix, CovarianceMatrix, GaussianState};
use crate::quadrature::adaptive_simpson;

/// Absolute tolerance of the average-fidelity quadrature.
pub const AVERAGE_FIDELITY_TOL: f64 = 1e-9;

/// Which way round the input squeezing is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputOrientation {
    /// `diag(e^{2y}, e^{−2y})`.
    #[default]
    Standard,
    /// `diag(e^{−2y}, e^{2y})`.
    Inverse,
}

pub fn input_covariance(y: f64, orientation: InputOrientation) -> Matrix2<f64> {
    let (a, b) = ((2.0 * y).exp(), (-2.0 * y).exp());
    match orientation {
        InputOrientation::Standard => Matrix2::new(a, 0.0, 0.0, b),
        InputOrientation::Inverse => Matrix2::new(b, 0.0, 0.0, a),
    }
}

/// `Γ = 2V_in + ℤAℤ + B − Cℤ − ℤᵀCᵀ`.
pub fn gamma_matrix(
    v_in: &Matrix2<f64>,
    a: &Matrix2<f64>,
    b: &Matrix2<f64>,
    c: &Matrix2<f64>,
) -> Matrix2<f64> {
    let z = z_matrix();
    v_in * 2.0 + z * a * z + b - c * z - z.transpose() * c.transpose()
}

/// `F = 2/√det Γ` from the resource blocks.
pub fn fidelity_from_blocks(
    v_in: &Matrix2<f64>,
    a: &Matrix2<f64>,
    b: &Matrix2<f64>,
    c: &Matrix2<f64>,
) -> Result<f64> {
    let det = gamma_matrix(v_in, a, b, c).determinant();
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::Unphysical(format!("det Γ = {det}")));
    }
    Ok(2.0 / det.sqrt())
}

pub fn fidelity_gamma(v_in: &CovarianceMatrix, resource: &GaussianState) -> Result<f64> {
    if v_in.mode_count() != 1 {
        return Err(Error::Dimension {
            expected: 2,
            actual: v_in.matrix().nrows(),
        });
    }
    if resource.mode_count() != 2 {
        return Err(Error::Dimension {
            expected: 4,
            actual: 2 * resource.mode_count(),
        });
    }
    let cov = resource.cov();
    fidelity_from_blocks(&v_in.block(0, 0), &cov.block(0, 0), &cov.block(1, 1), &cov.block(0, 1))
}

/// `F = 1/√((e^{−2y} + (2n+1)σ)(e^{2y} + (2n+1)σ))`, `σ = e^{−2r}`.
pub fn fidelity_closed_form(y: f64, r: f64, n: f64) -> Result<f64> {
    check_range("n", n, n >= 0.0, ">= 0")?;
    let noise = (2.0 * n + 1.0) * (-2.0 * r).exp();
    Ok(1.0 / (((-2.0 * y).exp() + noise) * ((2.0 * y).exp() + noise)).sqrt())
}

/// Mean of [`fidelity_closed_form`] over `y ∈ [y_low, y_high]`.
pub fn average_fidelity(r: f64, n: f64, y_low: f64, y_high: f64) -> Result<f64> {
    check_range("n", n, n >= 0.0, ">= 0")?;
    check_range("y_high", y_high, y_high >= y_low, ">= y_low")?;
    if y_high == y_low {
        return fidelity_closed_form(y_low, r, n);
    }
    let width = y_high - y_low;
    let f = |y: f64| fidelity_closed_form(y, r, n).unwrap_or(f64::NAN);
    let integral = adaptive_simpson(f, y_low, y_high, AVERAGE_FIDELITY_TOL * width)?;
    Ok(integral / width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{tmst, tmsv};
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn cov(m: Matrix2<f64>) -> CovarianceMatrix {
        CovarianceMatrix::new(DMatrix::from_iterator(2, 2, m.iter().copied()), 1e-12).unwrap()
    }

    #[test]
    fn classical_benchmark() {
        let f = fidelity_gamma(&cov(Matrix2::identity()), &tmsv(0.0)).unwrap();
        assert!((f - 0.5).abs() < 1e-15);
        assert_eq!(fidelity_closed_form(0.0, 0.0, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn strong_squeezing_near_unity() {
        let f = fidelity_gamma(&cov(Matrix2::identity()), &tmsv(5.0)).unwrap();
        // Γ = 2I + 2e^{−2r}I by hand, so F = 1/(1 + e^{−10})
        assert!((f - 1.0 / (1.0 + (-10.0f64).exp())).abs() < 1e-9);
        assert!(f >= 0.999);
        assert!((fidelity_closed_form(0.0, 40.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frozen_closed_form_values() {
        // evaluated independently from the formula in double precision
        let f = fidelity_closed_form(0.5, 1.0, 1.0).unwrap();
        assert!((f - 0.6431113819528556).abs() < 1e-12);
        let g = fidelity_gamma(&cov(input_covariance(0.5, InputOrientation::Standard)), &tmst(1.0, 1.0).unwrap())
            .unwrap();
        assert!((g - f).abs() < 1e-12);
        let f0 = fidelity_closed_form(0.5, 1.0, 0.0).unwrap();
        assert!((f0 - 0.8344983446325859).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_gamma_on_grid() {
        for i in 0..20 {
            let y = -1.5 + 3.0 * i as f64 / 19.0;
            for j in 0..20 {
                let r = 2.5 * j as f64 / 19.0;
                for n in [0.0, 0.4, 2.0] {
                    let v_in = cov(input_covariance(y, InputOrientation::Standard));
                    let g = fidelity_gamma(&v_in, &tmst(r, n).unwrap()).unwrap();
                    let c = fidelity_closed_form(y, r, n).unwrap();
                    assert!((g - c).abs() <= 1e-12, "y={y} r={r} n={n}: {g} vs {c}");
                }
            }
        }
    }

    #[test]
    fn orientation_does_not_change_symmetric_resource() {
        for (y, r, n) in [(0.3, 0.8, 0.1), (-1.0, 1.4, 0.0)] {
            let a = fidelity_gamma(&cov(input_covariance(y, InputOrientation::Standard)), &tmst(r, n).unwrap());
            let b = fidelity_gamma(&cov(input_covariance(y, InputOrientation::Inverse)), &tmst(r, n).unwrap());
            assert!((a.unwrap() - b.unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_negative_n_and_bad_shapes() {
        assert!(fidelity_closed_form(0.0, 0.0, -0.1).is_err());
        let v4 = CovarianceMatrix::identity(2);
        assert!(fidelity_gamma(&v4, &tmsv(0.1)).is_err());
        let z = Matrix2::zeros();
        assert!(fidelity_from_blocks(&z, &z, &z, &z).is_err());
    }

    #[test]
    fn average_fidelity_values() {
        // vacuum resource: ∫₀¹ dy / (2 cosh y) = atan(tanh ½)
        let avg = average_fidelity(0.0, 0.0, 0.0, 1.0).unwrap();
        assert!((avg - 0.4328847416198293).abs() < 1e-9);
        assert!((average_fidelity(30.0, 0.0, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-9);
        let point = average_fidelity(0.7, 0.2, 0.0, 0.0).unwrap();
        assert_eq!(point, fidelity_closed_form(0.0, 0.7, 0.2).unwrap());
        assert!(average_fidelity(0.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn average_matches_fine_simpson() {
        let (r, n) = (0.6, 0.3);
        let m = 2000;
        let h = 1.0 / m as f64;
        let mut s = 0.0;
        for i in 0..=m {
            let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * fidelity_closed_form(i as f64 * h, r, n).unwrap();
        }
        s *= h / 3.0;
        assert!((average_fidelity(r, n, 0.0, 1.0).unwrap() - s).abs() < 1e-9);
    }

    #[test]
    fn monotone_in_r() {
        let mut prev = 0.0;
        for k in 0..200 {
            let f = fidelity_closed_form(0.0, k as f64 * 0.02, 0.0).unwrap();
            assert!(f >= prev);
            prev = f;
        }
    }

    proptest! {
        #[test]
        fn symmetric_in_y(y in -3.0f64..3.0, r in 0.0f64..3.0, n in 0.0f64..3.0) {
            let a = fidelity_closed_form(y, r, n).unwrap();
            let b = fidelity_closed_form(-y, r, n).unwrap();
            prop_assert!((a - b).abs() < 1e-15);
            prop_assert!(a > 0.0 && a <= 1.0);
        }

        #[test]
        fn quantum_advantage_iff_above_half(r in 0.0f64..2.0, n in 0.0f64..2.0) {
            // at y = 0, F > ½ exactly when (2n+1)σ < 1
            let f = fidelity_closed_form(0.0, r, n).unwrap();
            let noise = (2.0 * n + 1.0) * (-2.0 * r).exp();
            prop_assume!((noise - 1.0).abs() > 1e-12);
            prop_assert_eq!(f > 0.5, noise < 1.0);
        }
    }
}
