//! Lossy microwave realization of the teleportation circuit.
//!
//! Alice's signal passes four lossy stages with transfer efficiencies
//! `ε, η, κ, ν` (each a beamsplitter mixing in thermal noise), is amplified
//! by JPAs of gain `g_J` and HEMTs of gain `g_H`, and digitized as `I₁, Q₂`.
//! Bob feeds the digitized record forward through a directional coupler of
//! transmissivity `τ = 1 − 1/Λ`.
//!
//! Quadratures stay in ħ = 2 units. Physical constants only enter through
//! the ADC scale `√(ħωBRg_H)` and the Planck occupation of each stage.

mod chain;
mod noise;
mod run;

use crate::error::{check_range, Error, Result};

pub use chain::{
    adc_quadratures, coupler_settings, heterodyne_currents, lambda_coefficient, reconstruct,
    resolve_lambda, AdcOutput, CouplerSettings, LambdaSource, Reconstruction, TauRule,
};
pub use noise::{noise_terms, noise_weights, thermal_occupation, NoiseEnvironment};
pub use run::{
    calibrate_noise, end_to_end_run, CalibrationReport, MicrowaveSetup, RunMode, RunReport,
};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Transfer efficiencies and the temperature of each loss stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitBudget {
    pub epsilon: f64,
    pub eta: f64,
    pub kappa: f64,
    pub nu: f64,
    /// `(T₁, T₂, T₃, T₄)` in kelvin.
    pub temps: [f64; 4],
}

impl CircuitBudget {
    pub fn new(epsilon: f64, eta: f64, kappa: f64, nu: f64, temps: [f64; 4]) -> Result<Self> {
        let unit = |v: f64| v > 0.0 && v <= 1.0;
        check_range("epsilon", epsilon, unit(epsilon), "(0, 1]")?;
        check_range("eta", eta, unit(eta), "(0, 1]")?;
        check_range("kappa", kappa, unit(kappa), "(0, 1]")?;
        check_range("nu", nu, unit(nu), "(0, 1]")?;
        for t in temps {
            check_range("temperature", t, t >= 0.0, ">= 0")?;
        }
        Ok(Self {
            epsilon,
            eta,
            kappa,
            nu,
            temps,
        })
    }

    /// Cryostat-internal link: `T₂ = 4 K`, `η = 0.90`.
    pub fn fridge() -> Self {
        Self::new(0.95, 0.90, 0.65, 0.75, [0.040, 4.0, 4.0, 0.100]).expect("valid")
    }

    /// Open-air link: `T₂ = 300 K`, `η = 0.10`.
    pub fn free_space() -> Self {
        Self::new(0.95, 0.10, 0.65, 0.75, [0.040, 300.0, 4.0, 0.100]).expect("valid")
    }

    pub fn lossless() -> Self {
        Self::new(1.0, 1.0, 1.0, 1.0, [0.0; 4]).expect("valid")
    }

    /// Overall signal transmission `νκηε`.
    pub fn transmission(&self) -> f64 {
        self.nu * self.kappa * self.eta * self.epsilon
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AmplifierChain {
    /// One HEMT per arm after the JPA.
    #[default]
    Hemt,
    /// Each HEMT replaced by two further JPAs of gain `g_J`.
    JpaChain,
}

/// Relative tolerance on `g_J = e^{2 r_J}`.
pub const GAIN_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainConfig {
    pub g_j: f64,
    pub r_j: f64,
    pub g_h: f64,
    pub chain: AmplifierChain,
}

impl GainConfig {
    pub fn new(g_j: f64, r_j: f64, g_h: f64, chain: AmplifierChain) -> Result<Self> {
        check_range("gJ", g_j, g_j >= 1.0, ">= 1")?;
        check_range("gH", g_h, g_h >= 1.0, ">= 1")?;
        check_range("rJ", r_j, true, "finite")?;
        let implied = (2.0 * r_j).exp();
        if (g_j - implied).abs() > GAIN_TOL * g_j {
            return Err(Error::Unphysical(format!(
                "gJ = {g_j} inconsistent with exp(2 rJ) = {implied}"
            )));
        }
        Ok(Self {
            g_j,
            r_j,
            g_h,
            chain,
        })
    }

    pub fn from_squeezing(r_j: f64, g_h: f64, chain: AmplifierChain) -> Result<Self> {
        Self::new((2.0 * r_j).exp(), r_j, g_h, chain)
    }

    pub fn unity() -> Self {
        Self::new(1.0, 0.0, 1.0, AmplifierChain::Hemt).expect("valid")
    }

    /// `g_J = 10²`, `r_J = 2.30`, `g_H = 10⁴`.
    pub fn table1() -> Self {
        Self::new(100.0, 2.30, 1e4, AmplifierChain::Hemt).expect("valid")
    }

    /// Gain seen by the ADC after the JPA stage: `g_H`, or `g_J²` for the
    /// two-JPA replacement.
    pub fn post_gain(&self) -> f64 {
        match self.chain {
            AmplifierChain::Hemt => self.g_h,
            AmplifierChain::JpaChain => self.g_j * self.g_j,
        }
    }
}

/// ADC constants. `omega` is angular, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdcConfig {
    pub omega: f64,
    pub bandwidth: f64,
    pub resistance: f64,
    pub lo_amplitude: f64,
}

impl AdcConfig {
    pub fn new(omega: f64, bandwidth: f64, resistance: f64, lo_amplitude: f64) -> Result<Self> {
        check_range("omega", omega, omega > 0.0, "> 0")?;
        check_range("bandwidth", bandwidth, bandwidth > 0.0, "> 0")?;
        check_range("resistance", resistance, resistance > 0.0, "> 0")?;
        check_range("lo_amplitude", lo_amplitude, lo_amplitude > 0.0, "> 0")?;
        Ok(Self {
            omega,
            bandwidth,
            resistance,
            lo_amplitude,
        })
    }

    /// With `angular`, `frequency_hz` is an ordinary frequency and
    /// `ω = 2π f`; otherwise it is used as ω directly.
    pub fn from_frequency(
        frequency_hz: f64,
        angular: bool,
        bandwidth: f64,
        resistance: f64,
        lo_amplitude: f64,
    ) -> Result<Self> {
        let omega = if angular {
            2.0 * std::f64::consts::PI * frequency_hz
        } else {
            frequency_hz
        };
        Self::new(omega, bandwidth, resistance, lo_amplitude)
    }

    /// 5 GHz carrier, 420 kHz bandwidth, 50 Ω, `|α_LO| = 10⁶`.
    pub fn table1() -> Self {
        Self::from_frequency(5e9, true, 420e3, 50.0, 1e6).expect("valid")
    }

    /// `√(ħωBR g)`.
    pub fn scale_factor(&self, gain: f64) -> f64 {
        (HBAR * self.omega * self.bandwidth * self.resistance * gain).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_validation() {
        assert!(CircuitBudget::new(1.5, 1.0, 1.0, 1.0, [0.0; 4]).is_err());
        assert!(CircuitBudget::new(0.0, 1.0, 1.0, 1.0, [0.0; 4]).is_err());
        assert!(CircuitBudget::new(1.0, 1.0, 1.0, 1.0, [0.0, -1.0, 0.0, 0.0]).is_err());
        assert!((CircuitBudget::fridge().transmission() - 0.95 * 0.9 * 0.65 * 0.75).abs() < 1e-15);
    }

    #[test]
    fn gain_consistency() {
        // e^{4.6} = 99.484, within 1% of 100
        assert!(GainConfig::new(100.0, 2.30, 1e4, AmplifierChain::Hemt).is_ok());
        assert!(GainConfig::new(100.0, 1.0, 1e4, AmplifierChain::Hemt).is_err());
        assert!(GainConfig::new(0.5, (0.5f64).ln() / 2.0, 1.0, AmplifierChain::Hemt).is_err());
        let g = GainConfig::from_squeezing(1.0, 1e4, AmplifierChain::JpaChain).unwrap();
        assert!((g.post_gain() - (4.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn adc_scale_factor() {
        let adc = AdcConfig::table1();
        assert!((adc.omega - 3.141592653589793e10).abs() < 1.0);
        // hand product: 1.054571817e-34 · 3.14159e10 · 4.2e5 · 50 · 1e4
        let oracle = (1.054571817e-34f64 * 3.141592653589793e10 * 4.2e5 * 50.0 * 1e4).sqrt();
        assert!((adc.scale_factor(1e4) / oracle - 1.0).abs() < 1e-14);
        assert!(adc.scale_factor(2e4) > adc.scale_factor(1e4));
        let wider = AdcConfig::new(adc.omega, 2.0 * adc.bandwidth, 50.0, 1e6).unwrap();
        assert!(wider.scale_factor(1.0) > adc.scale_factor(1.0));
        let plain = AdcConfig::from_frequency(5e9, false, 420e3, 50.0, 1e6).unwrap();
        assert_eq!(plain.omega, 5e9);
        assert!(AdcConfig::new(1.0, 1.0, 0.0, 1.0).is_err());
    }
}
