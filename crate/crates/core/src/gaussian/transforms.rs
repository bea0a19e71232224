use nalgebra::{DMatrix, DVector};

use super::{QuadratureVector, SymplecticTransform};
use crate::error::{check_range, Error, Result};

pub fn identity(modes: usize) -> SymplecticTransform {
    SymplecticTransform::linear(DMatrix::identity(2 * modes, 2 * modes))
}

/// Phase rotation `R(θ) = [[cos θ, sin θ], [−sin θ, cos θ]]`.
pub fn rotation(theta: f64) -> SymplecticTransform {
    let (s, c) = theta.sin_cos();
    SymplecticTransform::linear(DMatrix::from_row_slice(2, 2, &[c, s, -s, c]))
}

/// Single-mode squeezer `S(r) = diag(e^{−r}, e^{r})`.
pub fn squeezer(r: f64) -> SymplecticTransform {
    SymplecticTransform::linear(DMatrix::from_row_slice(
        2,
        2,
        &[(-r).exp(), 0.0, 0.0, r.exp()],
    ))
}

/// Beamsplitter of transmissivity `τ` on two modes:
/// `[√(1−τ)𝕀₂, √τ𝕀₂; −√τ𝕀₂, √(1−τ)𝕀₂]`. `τ = 1/2` is the balanced splitter.
pub fn beamsplitter(tau: f64) -> Result<SymplecticTransform> {
    check_range("tau", tau, (0.0..=1.0).contains(&tau), "[0, 1]")?;
    let t = (1.0 - tau).sqrt();
    let s = tau.sqrt();
    let mut m = DMatrix::zeros(4, 4);
    for k in 0..2 {
        m[(k, k)] = t;
        m[(k, k + 2)] = s;
        m[(k + 2, k)] = -s;
        m[(k + 2, k + 2)] = t;
    }
    Ok(SymplecticTransform::linear(m))
}

/// Two-mode squeezer `[cosh r 𝕀₂, sinh r ℤ; sinh r ℤ, cosh r 𝕀₂]`; maps the
/// two-mode vacuum onto the squeezed vacuum of [`super::tmsv`].
pub fn two_mode_squeezer(r: f64) -> SymplecticTransform {
    let (c, s) = (r.cosh(), r.sinh());
    SymplecticTransform::linear(DMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, -s, //
            s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        ],
    ))
}

/// Pure displacement by `d`.
pub fn displacement(d: QuadratureVector) -> SymplecticTransform {
    let n = d.len();
    SymplecticTransform::new(DMatrix::identity(n, n), d).expect("square identity")
}

/// Block-diagonal sum `S₁ ⊕ S₂ ⊕ …`, displacements concatenated.
pub fn direct_sum(parts: &[SymplecticTransform]) -> Result<SymplecticTransform> {
    if parts.is_empty() {
        return Err(Error::EmptyDirectSum);
    }
    let dim: usize = parts.iter().map(|p| p.dimension()).sum();
    let mut m = DMatrix::zeros(dim, dim);
    let mut d = DVector::zeros(dim);
    let mut at = 0;
    for p in parts {
        let n = p.dimension();
        m.view_mut((at, at), (n, n)).copy_from(p.matrix());
        d.rows_mut(at, n).copy_from(p.displacement().as_dvector());
        at += n;
    }
    SymplecticTransform::new(m, QuadratureVector::from_dvector(d))
}
