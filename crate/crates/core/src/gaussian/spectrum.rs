use nalgebra::DMatrix;

use super::{max_asymmetry, SymplecticForm};
use crate::error::{Error, Result};

/// Outcome of the uncertainty-principle check `V − iΩ ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Physicality {
    pub physical: bool,
    /// Symplectic eigenvalues, ascending, one per mode.
    pub spectrum: Vec<f64>,
}

/// `max |S Ω Sᵀ − Ω|`.
pub fn symplectic_residual(s: &DMatrix<f64>) -> Result<f64> {
    if s.nrows() != s.ncols() || s.nrows() % 2 != 0 || s.nrows() == 0 {
        return Err(Error::NotPhaseSpace {
            rows: s.nrows(),
            cols: s.ncols(),
        });
    }
    let omega = SymplecticForm::new(s.nrows() / 2);
    let w = omega.matrix();
    Ok((s * w * s.transpose() - w).abs().max())
}

pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(s)? <= tol)
}

/// Symplectic spectrum from the moduli of the eigenvalues of `iΩV`.
///
/// The eigenvalues come in `±ν` pairs; the sorted moduli are collapsed
/// pairwise so one value per mode is reported.
pub fn physicality(cov: &DMatrix<f64>, tol: f64) -> Result<Physicality> {
    if cov.nrows() != cov.ncols() || cov.nrows() % 2 != 0 || cov.nrows() == 0 {
        return Err(Error::NotPhaseSpace {
            rows: cov.nrows(),
            cols: cov.ncols(),
        });
    }
    let asymmetry = max_asymmetry(cov);
    if asymmetry > tol {
        return Err(Error::Asymmetric { asymmetry });
    }
    let modes = cov.nrows() / 2;
    let omega = SymplecticForm::new(modes);
    // eigenvalues of ΩV are i·(eigenvalues of iΩV) up to sign, same moduli
    let product = omega.matrix() * cov;
    let mut moduli: Vec<f64> = product
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    moduli.sort_by(|a, b| a.total_cmp(b));
    let spectrum: Vec<f64> = moduli.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    let physical = spectrum.iter().all(|&nu| nu >= 1.0 - tol);
    Ok(Physicality { physical, spectrum })
}
