use std::f64::consts::PI;

use super::{GaussianState, QuadratureVector, DEFAULT_TOL};
use crate::error::{Error, Result};

/// `W(x) = exp{−½(x−x̄)ᵀV⁻¹(x−x̄)} / ((2π)^N √det V)`.
pub(super) fn wigner(state: &GaussianState, x: &QuadratureVector) -> Result<f64> {
    let v = state.cov().matrix();
    if x.len() != v.nrows() {
        return Err(Error::Dimension {
            expected: v.nrows(),
            actual: x.len(),
        });
    }
    let det = v.determinant();
    if !(det > DEFAULT_TOL) {
        return Err(Error::Singular { det });
    }
    let inv = v.clone().try_inverse().ok_or(Error::Singular { det })?;
    let d = x.as_dvector() - state.mean().as_dvector();
    let q = d.dot(&(inv * &d));
    let modes = state.mode_count() as i32;
    Ok((-0.5 * q).exp() / ((2.0 * PI).powi(modes) * det.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{
        beamsplitter, coherent, direct_sum, rotation, squeezer, thermal, tmst, vacuum,
        CovarianceMatrix,
    };
    use nalgebra::DMatrix;

    #[test]
    fn vacuum_peak() {
        let w = vacuum(1).unwrap().wigner(&QuadratureVector::pair(0.0, 0.0)).unwrap();
        assert!((w - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn thermal_integrates_to_one() {
        // composite Simpson on a ±14σ box, independent of the density formula's normalisation
        let st = thermal(1.0).unwrap();
        let half = 14.0 * 3f64.sqrt();
        let n = 600;
        let h = 2.0 * half / n as f64;
        let weight = |i: usize| match i {
            0 => 1.0,
            i if i == n => 1.0,
            i if i % 2 == 1 => 4.0,
            _ => 2.0,
        };
        let mut total = 0.0;
        for i in 0..=n {
            let x = -half + i as f64 * h;
            for j in 0..=n {
                let p = -half + j as f64 * h;
                let w = st.wigner(&QuadratureVector::pair(x, p)).unwrap();
                total += weight(i) * weight(j) * w;
            }
        }
        total *= h * h / 9.0;
        assert!((total - 1.0).abs() < 1e-6, "integral {total}");
    }

    #[test]
    fn invariant_under_symplectic_map() {
        // W'(Sx) = W(x) for d = 0 when det S = 1
        let s = direct_sum(&[rotation(0.4), squeezer(0.3)])
            .unwrap()
            .then(&beamsplitter(0.3).unwrap())
            .unwrap();
        let state = tmst(0.4, 0.2).unwrap();
        let moved = state.apply(&s).unwrap();
        for pt in [
            [0.0, 0.0, 0.0, 0.0],
            [0.5, -0.2, 1.0, 0.3],
            [-1.2, 0.7, 0.1, -2.0],
        ] {
            let x = QuadratureVector::new(pt.to_vec()).unwrap();
            let sx = s.map(&x).unwrap();
            let a = state.wigner(&x).unwrap();
            let b = moved.wigner(&sx).unwrap();
            assert!((a - b).abs() < 1e-12 * a.max(1e-3), "{a} vs {b}");
        }
    }

    #[test]
    fn peak_at_mean() {
        let c = coherent(QuadratureVector::pair(1.0, -2.0));
        let at = c.wigner(&QuadratureVector::pair(1.0, -2.0)).unwrap();
        let off = c.wigner(&QuadratureVector::pair(1.1, -2.0)).unwrap();
        assert!(at > off && off > 0.0);
    }

    #[test]
    fn singular_is_error() {
        let cov = CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]), 1e-10)
            .unwrap();
        let st = GaussianState::new(QuadratureVector::pair(0.0, 0.0), cov).unwrap();
        assert!(matches!(
            st.wigner(&QuadratureVector::pair(0.0, 0.0)),
            Err(Error::Singular { .. })
        ));
    }
}
