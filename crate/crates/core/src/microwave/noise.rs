use rand::Rng;

use super::{CircuitBudget, BOLTZMANN, HBAR};
use crate::error::{check_range, Result};
use crate::sampling::standard_normal;

/// Planck occupation `n̄ = 1/(e^{ħω/kT} − 1)`; zero at `T = 0`.
pub fn thermal_occupation(temperature: f64, omega: f64) -> Result<f64> {
    check_range("temperature", temperature, temperature >= 0.0, ">= 0")?;
    check_range("omega", omega, omega > 0.0, "> 0")?;
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (HBAR * omega / (BOLTZMANN * temperature)).exp_m1())
}

/// Weights of the four thermal quadratures in `ζ`:
/// `√(νκη(1−ε)), √(νκ(1−η)), √(ν(1−κ)), √(1−ν)`.
pub fn noise_weights(b: &CircuitBudget) -> [f64; 4] {
    [
        (b.nu * b.kappa * b.eta * (1.0 - b.epsilon)).sqrt(),
        (b.nu * b.kappa * (1.0 - b.eta)).sqrt(),
        (b.nu * (1.0 - b.kappa)).sqrt(),
        (1.0 - b.nu).sqrt(),
    ]
}

/// Thermal quadratures `(x_th−i, p_th−i)` of the four loss stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseEnvironment {
    pub occupations: [f64; 4],
    pub quadratures: [(f64, f64); 4],
}

impl NoiseEnvironment {
    /// Mean-value environment: occupations from the stage temperatures,
    /// quadratures at their zero means.
    pub fn from_budget(budget: &CircuitBudget, omega: f64) -> Result<Self> {
        let mut occupations = [0.0; 4];
        for (n, &t) in occupations.iter_mut().zip(&budget.temps) {
            *n = thermal_occupation(t, omega)?;
        }
        Ok(Self {
            occupations,
            quadratures: [(0.0, 0.0); 4],
        })
    }

    pub fn quiet() -> Self {
        Self {
            occupations: [0.0; 4],
            quadratures: [(0.0, 0.0); 4],
        }
    }

    /// Per-quadrature variance `2n̄ + 1` of each stage.
    pub fn variances(&self) -> [f64; 4] {
        self.occupations.map(|n| 2.0 * n + 1.0)
    }

    /// Same occupations, quadratures drawn from `N(0, 2n̄ + 1)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let mut quadratures = [(0.0, 0.0); 4];
        for (q, v) in quadratures.iter_mut().zip(self.variances()) {
            let sd = v.sqrt();
            *q = (sd * standard_normal(rng), sd * standard_normal(rng));
        }
        Self {
            occupations: self.occupations,
            quadratures,
        }
    }

    /// Variance of `ζ_x` (equal to that of `ζ_p`).
    pub fn zeta_variance(&self, budget: &CircuitBudget) -> f64 {
        noise_weights(budget)
            .iter()
            .zip(self.variances())
            .map(|(w, v)| w * w * v)
            .sum()
    }
}

/// `(ζ_x, ζ_p)` for the environment's thermal quadratures.
pub fn noise_terms(budget: &CircuitBudget, env: &NoiseEnvironment) -> (f64, f64) {
    let w = noise_weights(budget);
    let mut zx = 0.0;
    let mut zp = 0.0;
    for (wi, (x, p)) in w.iter().zip(env.quadratures) {
        zx += wi * x;
        zp += wi * p;
    }
    (zx, zp)
}
