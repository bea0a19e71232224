//! Two-mode squeezed vacuum resource leaking into a thermal bath.
//!
//! One arm of `tmsv(r)` is mixed on a beamsplitter of reflectivity `η`
//! with a bath of `N` thermal photons. The printed re-expression of the
//! result as a locally squeezed thermal resource `(s', x₁, x₂, n)` is
//! evaluated as written; [`equivalent_tmst`] and [`freespace_fidelity`]
//! use it, while [`direct_lossy_fidelity`] works from the lossy blocks.

use nalgebra::{DMatrix, Matrix2};
use rayon::prelude::*;

use crate::error::{check_range, Error, Result};
use crate::format::sig12;
use crate::gaussian::{z_matrix, CovarianceMatrix, DEFAULT_TOL};
use crate::protocol::{fidelity_from_blocks, input_covariance, InputOrientation};

/// Margins at or below this are treated as violating the constraint.
pub const MARGIN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    pub eta: f64,
    pub n: f64,
}

impl BathParams {
    pub fn new(eta: f64, n: f64) -> Result<Self> {
        check_range("eta", eta, eta > 0.0 && eta <= 1.0, "(0, 1]")?;
        check_range("N", n, n >= 0.0, ">= 0")?;
        Ok(Self { eta, n })
    }

    /// `a = (1−η)(2N+1) + η cosh 2r`, the variance of the lossy arm.
    fn lossy_variance(&self, r: f64) -> f64 {
        (1.0 - self.eta) * (2.0 * self.n + 1.0) + self.eta * (2.0 * r).cosh()
    }
}

/// `A' = a𝕀₂`, `B' = cosh 2r 𝕀₂`, `C' = √η sinh 2r ℤ`.
pub fn lossy_resource_blocks(
    r: f64,
    bath: &BathParams,
) -> (Matrix2<f64>, Matrix2<f64>, Matrix2<f64>) {
    let a = bath.lossy_variance(r);
    (
        Matrix2::identity() * a,
        Matrix2::identity() * (2.0 * r).cosh(),
        z_matrix() * (bath.eta.sqrt() * (2.0 * r).sinh()),
    )
}

fn assemble(a: &Matrix2<f64>, b: &Matrix2<f64>, c: &Matrix2<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(a);
    m.view_mut((2, 2), (2, 2)).copy_from(b);
    m.view_mut((0, 2), (2, 2)).copy_from(c);
    m.view_mut((2, 0), (2, 2)).copy_from(&c.transpose());
    m
}

pub fn lossy_covariance(r: f64, bath: &BathParams) -> CovarianceMatrix {
    let (a, b, c) = lossy_resource_blocks(r, bath);
    CovarianceMatrix::new(assemble(&a, &b, &c), DEFAULT_TOL).expect("symmetric by construction")
}

/// `1 − η sinh²2r / ((η−1)(2N+1) − η cosh 2r)²`.
pub fn equivalence_margin(r: f64, bath: &BathParams) -> f64 {
    let a = bath.lossy_variance(r);
    let s = (2.0 * r).sinh();
    1.0 - bath.eta * s * s / (a * a)
}

/// Locally squeezed thermal parameters from the printed closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmstEquivalence {
    pub s_prime: f64,
    pub x1: f64,
    pub x2: f64,
    pub n: f64,
    pub margin: f64,
}

impl TmstEquivalence {
    /// Whether the thermal photon number is non-negative. The printed `n`
    /// tends to `−½` at the constraint boundary, so this can fail on part
    /// of the region where the margin is positive.
    pub fn is_physical(&self) -> bool {
        self.n >= 0.0
    }

    /// `(A'', B'', C'')` after the local squeezers act on the thermal resource.
    pub fn blocks(&self) -> (Matrix2<f64>, Matrix2<f64>, Matrix2<f64>) {
        let m = 2.0 * self.n + 1.0;
        let ch = m * (2.0 * self.s_prime).cosh();
        let sh = m * (2.0 * self.s_prime).sinh();
        let (x1, x2) = (self.x1, self.x2);
        (
            Matrix2::new((-4.0 * x1).exp() * ch, 0.0, 0.0, (4.0 * x1).exp() * ch),
            Matrix2::new((-4.0 * x2).exp() * ch, 0.0, 0.0, (4.0 * x2).exp() * ch),
            Matrix2::new(
                (-2.0 * (x1 + x2)).exp() * sh,
                0.0,
                0.0,
                -(2.0 * (x1 + x2)).exp() * sh,
            ),
        )
    }

    pub fn covariance(&self) -> DMatrix<f64> {
        let (a, b, c) = self.blocks();
        assemble(&a, &b, &c)
    }
}

pub fn equivalent_tmst(r: f64, bath: &BathParams) -> Result<TmstEquivalence> {
    let margin = equivalence_margin(r, bath);
    if !(margin > MARGIN_FLOOR) {
        return Err(Error::Constraint { margin });
    }
    let a = bath.lossy_variance(r);
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    let ratio = (a / c).ln();
    Ok(TmstEquivalence {
        s_prime: 0.5 * (bath.eta.sqrt() * s / a).atanh(),
        x1: ratio / 8.0,
        x2: -3.0 * ratio / 8.0,
        n: 0.5 * ((a * (a * a - bath.eta * s * s) / c).sqrt() - 1.0),
        margin,
    })
}

/// `F = 2/√det Γ` with the blocks of the equivalent resource.
pub fn freespace_fidelity(
    y: f64,
    r: f64,
    bath: &BathParams,
    orientation: InputOrientation,
) -> Result<f64> {
    let eq = equivalent_tmst(r, bath)?;
    let (a, b, c) = eq.blocks();
    fidelity_from_blocks(&input_covariance(y, orientation), &a, &b, &c)
}

/// `F = 2/√det Γ` with the lossy blocks themselves.
pub fn direct_lossy_fidelity(
    y: f64,
    r: f64,
    bath: &BathParams,
    orientation: InputOrientation,
) -> Result<f64> {
    let (a, b, c) = lossy_resource_blocks(r, bath);
    fidelity_from_blocks(&input_covariance(y, orientation), &a, &b, &c)
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    if !(f_lo.is_finite() && f(hi).is_finite()) || f_lo.signum() == f(hi).signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Squeezing at which the margin crosses zero, if it does within `[r_lo, r_hi]`.
pub fn margin_root(bath: &BathParams, r_lo: f64, r_hi: f64, tol: f64) -> Option<f64> {
    bisect(|r| equivalence_margin(r, bath), r_lo, r_hi, tol)
}

/// Smallest squeezing in `[r_lo, r_hi]` with `F > ½`, located by bisection.
/// Both ends must satisfy the constraint.
pub fn fidelity_threshold(
    y: f64,
    bath: &BathParams,
    orientation: InputOrientation,
    r_lo: f64,
    r_hi: f64,
    tol: f64,
) -> Option<f64> {
    let f = |r: f64| {
        freespace_fidelity(y, r, bath, orientation)
            .map(|v| v - 0.5)
            .unwrap_or(f64::NAN)
    };
    bisect(f, r_lo, r_hi, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub y: f64,
    pub eta: f64,
    pub n_bath: f64,
    pub r: f64,
    pub margin: f64,
    pub feasible: bool,
    /// NaN where the constraint fails.
    pub fidelity: f64,
}

impl SweepRow {
    pub const HEADER: [&'static str; 7] = ["y", "eta", "N", "r", "margin", "feasible", "fidelity"];

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            sig12(self.y),
            sig12(self.eta),
            sig12(self.n_bath),
            sig12(self.r),
            sig12(self.margin),
            self.feasible.to_string(),
            sig12(self.fidelity),
        ]
    }

    pub fn is_quantum(&self) -> bool {
        self.feasible && self.fidelity > 0.5
    }
}

/// One row per `(y, bath, r)`, in that nesting order.
pub fn fidelity_sweep(
    y_values: &[f64],
    r_grid: &[f64],
    baths: &[BathParams],
    orientation: InputOrientation,
) -> Vec<SweepRow> {
    let mut points = Vec::with_capacity(y_values.len() * r_grid.len() * baths.len());
    for &y in y_values {
        for bath in baths {
            for &r in r_grid {
                points.push((y, *bath, r));
            }
        }
    }
    points
        .par_iter()
        .map(|&(y, bath, r)| {
            let margin = equivalence_margin(r, &bath);
            let feasible = margin > MARGIN_FLOOR;
            let fidelity = if feasible {
                freespace_fidelity(y, r, &bath, orientation).unwrap_or(f64::NAN)
            } else {
                f64::NAN
            };
            SweepRow {
                y,
                eta: bath.eta,
                n_bath: bath.n,
                r,
                margin,
                feasible,
                fidelity,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{beamsplitter, direct_sum, identity, physicality, thermal, tmsv};
    use crate::protocol::fidelity_closed_form;
    use crate::sampling::shot_rng;
    use rand::Rng;

    fn bath(eta: f64, n: f64) -> BathParams {
        BathParams::new(eta, n).unwrap()
    }

    #[test]
    fn bath_validation() {
        assert!(BathParams::new(0.0, 0.0).is_err());
        assert!(BathParams::new(1.1, 0.0).is_err());
        assert!(BathParams::new(0.5, -1.0).is_err());
    }

    #[test]
    fn unit_eta_gives_tmsv_blocks() {
        for r in [0.0, 0.4, 1.3] {
            let cov = lossy_covariance(r, &bath(1.0, 3.0));
            assert!((cov.matrix() - tmsv(r).cov().matrix()).abs().max() < 1e-14);
        }
    }

    #[test]
    fn substitution_example() {
        let (a, b, c) = lossy_resource_blocks(0.0, &bath(0.5, 1.0));
        assert_eq!(a, Matrix2::identity() * 2.0);
        assert_eq!(b, Matrix2::identity());
        assert_eq!(c, Matrix2::zeros());
    }

    #[test]
    fn blocks_match_beamsplitter_on_bath() {
        // thermal(N) ⊗ tmsv(r), B_S(η) on (bath, arm 1), keep (0, 2)
        let mut rng = shot_rng(5, 0);
        for _ in 0..50 {
            let r = rng.random_range(0.0..2.0);
            let b = bath(rng.random_range(0.05..1.0), rng.random_range(0.0..3.0));
            let joint = thermal(b.n).unwrap().tensor(&tmsv(r));
            let s = direct_sum(&[beamsplitter(b.eta).unwrap(), identity(1)]).unwrap();
            let out = joint.apply(&s).unwrap().reduce(&[0, 2]).unwrap();
            let diff = (out.cov().matrix() - lossy_covariance(r, &b).matrix()).abs().max();
            assert!(diff < 1e-12 * (2.0 * r).cosh() * (2.0 * b.n + 1.0), "{diff}");
            assert!(physicality(out.cov().matrix(), 1e-9).unwrap().physical);
        }
    }

    #[test]
    fn margin_cases() {
        assert_eq!(equivalence_margin(0.0, &bath(0.3, 2.0)), 1.0);
        for r in [0.1f64, 0.7, 1.5] {
            let t = (2.0 * r).tanh();
            assert!((equivalence_margin(r, &bath(1.0, 0.0)) - (1.0 - t * t)).abs() < 1e-12);
        }
        // η = ½, N = 0: a = ½(1 + cosh 2r), root where tanh r = 1/√2
        let root = margin_root(&bath(0.5, 0.0), 0.01, 3.0, 1e-9).unwrap();
        assert!((root - (0.5f64.sqrt()).atanh()).abs() < 1e-8);
        assert!((root - 0.8814).abs() < 1e-3);
    }

    #[test]
    fn margin_nonincreasing() {
        for (eta, n) in [(0.9, 0.5), (0.5, 0.0), (0.2, 3.0)] {
            let b = bath(eta, n);
            let mut prev = equivalence_margin(0.0, &b);
            for k in 1..300 {
                let m = equivalence_margin(k as f64 * 0.01, &b);
                assert!(m <= prev + 1e-15, "eta={eta} n={n} k={k}");
                prev = m;
            }
        }
    }

    #[test]
    fn unit_eta_reduces_to_tmsv() {
        for k in 1..=20 {
            let r = k as f64 * 0.1;
            let eq = equivalent_tmst(r, &bath(1.0, 0.0)).unwrap();
            assert!((eq.s_prime - r).abs() <= 1e-12, "r={r} s'={}", eq.s_prime);
            assert!(eq.x1.abs() <= 1e-12 && eq.x2.abs() <= 1e-12 && eq.n.abs() <= 1e-12);
            for y in [-0.5, 0.0, 0.5] {
                let f = freespace_fidelity(y, r, &bath(1.0, 0.0), InputOrientation::Standard).unwrap();
                assert!((f - fidelity_closed_form(y, r, 0.0).unwrap()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn printed_parameters_example() {
        let eq = equivalent_tmst(0.0, &bath(0.5, 1.0)).unwrap();
        let ln2 = 2f64.ln();
        assert_eq!(eq.s_prime, 0.0);
        assert!((eq.x1 - ln2 / 8.0).abs() < 1e-15);
        assert!((eq.x2 + 3.0 * ln2 / 8.0).abs() < 1e-15);
        assert!((eq.n - (2f64.powf(1.5) - 1.0) / 2.0).abs() < 1e-14);
        assert!((eq.x1 - 0.0866).abs() < 1e-4 && (eq.n - 0.914).abs() < 1e-3);
    }

    #[test]
    fn printed_blocks_do_not_reproduce_lossy_blocks() {
        // r = 0, η = ½, N = 1: A'' = 2√2·diag(2^{−1/2}, 2^{1/2}) = diag(2, 4), A' = 2𝕀₂
        let eq = equivalent_tmst(0.0, &bath(0.5, 1.0)).unwrap();
        let (a, _, _) = eq.blocks();
        assert!((a[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((a[(1, 1)] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn constraint_violation_is_error() {
        let b = bath(0.5, 0.0);
        assert!(matches!(equivalent_tmst(1.2, &b), Err(Error::Constraint { .. })));
        assert!(freespace_fidelity(0.0, 1.2, &b, InputOrientation::Standard).is_err());
    }

    #[test]
    fn negative_n_inside_valid_region() {
        let eq = equivalent_tmst(0.2, &bath(0.5, 0.0)).unwrap();
        assert!(eq.margin > 0.0);
        assert!(!eq.is_physical());
        assert!((eq.n + 0.010).abs() < 1e-3, "{}", eq.n);
    }

    #[test]
    fn classical_limit_and_growth() {
        let b = bath(1.0, 0.0);
        assert!((freespace_fidelity(0.0, 0.0, &b, InputOrientation::Standard).unwrap() - 0.5).abs() < 1e-15);
        assert!((freespace_fidelity(0.5, 1.0, &b, InputOrientation::Standard).unwrap() - 0.8344983446325859).abs() < 1e-12);
        let rows = fidelity_sweep(&[0.0], &[0.5, 2.0, 5.0], &[b], InputOrientation::Standard);
        assert!(rows.last().unwrap().fidelity >= 0.999);
    }

    #[test]
    fn fidelity_nondecreasing_on_feasible_region() {
        for (eta, n) in [(0.9, 0.5), (0.7, 0.0), (0.95, 1.0)] {
            let b = bath(eta, n);
            let mut prev = 0.0;
            for k in 0..400 {
                let r = k as f64 * 0.005;
                match freespace_fidelity(0.0, r, &b, InputOrientation::Standard) {
                    Ok(f) => {
                        assert!(f >= prev - 1e-12, "eta={eta} n={n} r={r}");
                        prev = f;
                    }
                    Err(_) => break,
                }
            }
        }
    }

    #[test]
    fn threshold_bisection() {
        let b = bath(0.9, 0.5);
        let hi = margin_root(&b, 0.01, 5.0, 1e-9).unwrap_or(5.0) - 1e-3;
        let r0 = fidelity_threshold(0.0, &b, InputOrientation::Standard, 0.0, hi, 1e-10).unwrap();
        let below = freespace_fidelity(0.0, r0 - 1e-6, &b, InputOrientation::Standard).unwrap();
        let above = freespace_fidelity(0.0, r0 + 1e-6, &b, InputOrientation::Standard).unwrap();
        assert!(below <= 0.5 && above > 0.5);
    }

    #[test]
    fn sweep_rows_follow_margin() {
        let baths = [bath(0.5, 0.0), bath(0.9, 0.5)];
        let r_grid: Vec<f64> = (0..60).map(|k| k as f64 * 0.05).collect();
        let rows = fidelity_sweep(&[0.0, 0.5], &r_grid, &baths, InputOrientation::Standard);
        assert_eq!(rows.len(), 2 * 2 * 60);
        assert_eq!((rows[0].y, rows[0].eta, rows[0].r), (0.0, 0.5, 0.0));
        assert_eq!(rows[60].eta, 0.9);
        for row in &rows {
            let m = equivalence_margin(row.r, &bath(row.eta, row.n_bath));
            assert_eq!(row.feasible, m > MARGIN_FLOOR);
            if !row.feasible {
                assert!(row.fidelity.is_nan());
            }
            assert_eq!(row.csv_row().len(), SweepRow::HEADER.len());
        }
        let single = fidelity_sweep(&[0.3], &[0.4], &[baths[1]], InputOrientation::Standard);
        let direct = freespace_fidelity(0.3, 0.4, &baths[1], InputOrientation::Standard).unwrap();
        assert_eq!(single[0].fidelity, direct);
    }

    #[test]
    fn direct_fidelity_reduces_at_unit_eta() {
        for (y, r) in [(0.0, 0.3), (0.4, 1.1)] {
            let a = direct_lossy_fidelity(y, r, &bath(1.0, 0.0), InputOrientation::Standard).unwrap();
            assert!((a - fidelity_closed_form(y, r, 0.0).unwrap()).abs() < 1e-12);
        }
        // the bath only lowers the direct fidelity
        let lossy = direct_lossy_fidelity(0.0, 1.0, &bath(0.8, 0.5), InputOrientation::Standard).unwrap();
        assert!(lossy < fidelity_closed_form(0.0, 1.0, 0.0).unwrap());
    }
}
