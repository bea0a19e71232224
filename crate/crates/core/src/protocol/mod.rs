//! Ideal Braunstein–Kimble teleportation of single-mode Gaussian states.
//!
//! Alice mixes the input with her half of a two-mode squeezed resource,
//! performs a double-homodyne (heterodyne) measurement and sends the two
//! outcomes `(X_u, P_v)` to Bob, who displaces his half of the resource.
//!
//! Complex amplitudes in this module are kept in quadrature units, `x + ip`,
//! which is `√2` times the usual `α = (x + ip)/√2`.

mod fidelity;
mod homodyne;
mod shots;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{check_range, Result};
use crate::gaussian::{tmst, GaussianState, QuadratureVector};

pub use fidelity::{
    average_fidelity, fidelity_closed_form, fidelity_from_blocks, fidelity_gamma, gamma_matrix,
    input_covariance, InputOrientation, AVERAGE_FIDELITY_TOL,
};
pub use homodyne::{
    alice_measure, bob_reconstruct, detector_current, double_homodyne_propagate,
    homodyne_input_moments, homodyne_network,
};
pub use shots::{simulate_shots, simulate_shots_with, ShotOptions, ShotStatistics};

/// Local-oscillator settings shared by both homodyne arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneConfig {
    pub lo_amplitude: f64,
    pub theta_x: f64,
    pub theta_p: f64,
}

impl HomodyneConfig {
    /// `θ_x = 0`, `θ_p = π/2`: the phases that read out `x` and `p`.
    pub fn canonical(lo_amplitude: f64) -> Result<Self> {
        Self::new(lo_amplitude, 0.0, std::f64::consts::FRAC_PI_2)
    }

    pub fn new(lo_amplitude: f64, theta_x: f64, theta_p: f64) -> Result<Self> {
        check_range("lo_amplitude", lo_amplitude, lo_amplitude > 0.0, "> 0")?;
        Ok(Self {
            lo_amplitude,
            theta_x,
            theta_p,
        })
    }
}

/// Shared entangled resource: symmetric two-mode squeezed thermal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceSpec {
    pub r: f64,
    pub n: f64,
}

impl ResourceSpec {
    pub fn new(r: f64, n: f64) -> Result<Self> {
        check_range("r", r, true, "finite")?;
        check_range("n", n, n >= 0.0, ">= 0")?;
        Ok(Self { r, n })
    }

    /// Resource variance `σ = e^{−2r}`.
    pub fn sigma(&self) -> f64 {
        (-2.0 * self.r).exp()
    }

    pub fn state(&self) -> GaussianState {
        tmst(self.r, self.n).expect("validated n")
    }
}

/// Squeezed coherent input: squeezing `y` and first moments `(x_in, p_in)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSpec {
    pub y: f64,
    pub x_in: f64,
    pub p_in: f64,
}

impl InputSpec {
    pub fn new(y: f64, x_in: f64, p_in: f64) -> Result<Self> {
        check_range("y", y, true, "finite")?;
        check_range("x_in", x_in, true, "finite")?;
        check_range("p_in", p_in, true, "finite")?;
        Ok(Self { y, x_in, p_in })
    }

    pub fn coherent(x_in: f64, p_in: f64) -> Result<Self> {
        Self::new(0.0, x_in, p_in)
    }

    pub fn mean(&self) -> QuadratureVector {
        QuadratureVector::pair(self.x_in, self.p_in)
    }

    /// `V'_in = diag(e^{2y}, e^{−2y})`.
    pub fn covariance(&self) -> Matrix2<f64> {
        input_covariance(self.y, InputOrientation::Standard)
    }
}

/// Classical record Alice sends to Bob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementRecord {
    pub x_u: f64,
    pub p_v: f64,
    /// `δ = X_u + i P_v`.
    pub delta: Complex64,
    /// Balanced-detector current differences `(i₁, i₂)`.
    pub currents: (f64, f64),
}

impl MeasurementRecord {
    pub fn new(x_u: f64, p_v: f64, currents: (f64, f64)) -> Self {
        Self {
            x_u,
            p_v,
            delta: Complex64::new(x_u, p_v),
            currents,
        }
    }
}
