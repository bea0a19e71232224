use super::{noise_terms, AdcConfig, AmplifierChain, CircuitBudget, GainConfig, NoiseEnvironment, HBAR};
use crate::error::{check_range, Error, Result};
use crate::protocol::{HomodyneConfig, InputSpec};

/// Heterodyne outputs `(X_u, P_v)` of the lossy, amplified circuit:
///
/// `X_u = |α|(√(νκg_J)(e^r x₁√(ηε) + e^{−y}x_in) + ζ_x)`
/// `P_v = |α|(√(νκg_J)(e^{y}p_in − e^{−r}p₁√(ηε)) + ζ_p)`
///
/// Only the canonical phases are modelled; `cfg` supplies `|α_LO|`.
pub fn heterodyne_currents(
    input: &InputSpec,
    resource_draw: (f64, f64),
    r: f64,
    budget: &CircuitBudget,
    gains: &GainConfig,
    cfg: &HomodyneConfig,
    env: &NoiseEnvironment,
) -> Result<(f64, f64)> {
    let lo = cfg.lo_amplitude;
    if !(lo > 0.0) {
        return Err(Error::OutOfRange {
            name: "lo_amplitude",
            value: lo,
            expected: "> 0",
        });
    }
    let (x1, p1) = resource_draw;
    let gain = (budget.nu * budget.kappa * gains.g_j).sqrt();
    let link = (budget.eta * budget.epsilon).sqrt();
    let (zx, zp) = noise_terms(budget, env);
    let x_u = lo * (gain * (r.exp() * x1 * link + (-input.y).exp() * input.x_in) + zx);
    let p_v = lo * (gain * (input.y.exp() * input.p_in - (-r).exp() * p1 * link) + zp);
    Ok((x_u, p_v))
}

/// Digitized quadratures and the scale `√(ħωBRg)` that produced them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdcOutput {
    pub i1: f64,
    pub q2: f64,
    pub scale: f64,
}

/// `I₁ = √(ħωBRg_H) X_u`, `Q₂ = √(ħωBRg_H) P_v`.
pub fn adc_quadratures(x_u: f64, p_v: f64, adc: &AdcConfig, g_h: f64) -> AdcOutput {
    let scale = adc.scale_factor(g_h);
    AdcOutput {
        i1: scale * x_u,
        q2: scale * p_v,
        scale,
    }
}

/// `Λ = |α|²ħωBRνκ g_J g_H`, or `|α|²ħωBRνκ g_J³` for the JPA chain.
pub fn lambda_coefficient(adc: &AdcConfig, budget: &CircuitBudget, gains: &GainConfig) -> f64 {
    let amp = match gains.chain {
        AmplifierChain::Hemt => gains.g_j * gains.g_h,
        AmplifierChain::JpaChain => gains.g_j.powi(3),
    };
    adc.lo_amplitude.powi(2)
        * HBAR
        * adc.omega
        * adc.bandwidth
        * adc.resistance
        * budget.nu
        * budget.kappa
        * amp
}

/// How the coupler transmissivity is tied to the link budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauRule {
    /// `τ = εη/2`.
    #[default]
    Half,
    /// `τ = εη`.
    Full,
}

impl TauRule {
    pub fn tau(&self, budget: &CircuitBudget) -> f64 {
        let full = budget.epsilon * budget.eta;
        match self {
            TauRule::Half => full / 2.0,
            TauRule::Full => full,
        }
    }
}

/// Where the feed-forward coefficient comes from.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum LambdaSource {
    /// `Λ = 1/(1 − τ)` with `τ` from the [`TauRule`].
    #[default]
    Matched,
    /// [`lambda_coefficient`] of the physical constants.
    Physical,
    Fixed(f64),
}

pub fn resolve_lambda(
    source: LambdaSource,
    rule: TauRule,
    budget: &CircuitBudget,
    adc: &AdcConfig,
    gains: &GainConfig,
) -> Result<f64> {
    let lambda = match source {
        LambdaSource::Matched => 1.0 / (1.0 - rule.tau(budget)),
        LambdaSource::Physical => lambda_coefficient(adc, budget, gains),
        LambdaSource::Fixed(v) => v,
    };
    check_range("lambda", lambda, lambda > 0.0, "> 0")?;
    Ok(lambda)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerSettings {
    pub lambda: f64,
    /// `τ = 1 − 1/Λ`.
    pub tau: f64,
    /// `β = 10 log₁₀(1/Λ)` in dB.
    pub beta_db: f64,
    /// `1 < Λ ≤ 2`.
    pub feasible: bool,
    /// `|εη/2 − τ|`.
    pub tau_residual: f64,
}

pub fn coupler_settings(lambda: f64, budget: &CircuitBudget) -> Result<CouplerSettings> {
    check_range("lambda", lambda, lambda > 0.0, "> 0")?;
    let tau = 1.0 - 1.0 / lambda;
    Ok(CouplerSettings {
        lambda,
        tau,
        beta_db: 10.0 * (1.0 / lambda).log10(),
        feasible: lambda > 1.0 && lambda <= 2.0,
        tau_residual: (TauRule::Half.tau(budget) - tau).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    pub x_out: f64,
    pub p_out: f64,
    pub feasible: bool,
}

/// Bob's coupler output
/// `x = I₁/√Λ + √τ e^r x₂`, `p = Q₂/√Λ + √τ e^{−r} p₂`.
///
/// An infeasible `Λ` is flagged, not rejected; `τ` is clipped to `[0, 1]`
/// for the coupler amplitude since a negative transmissivity has no
/// physical coupler.
pub fn reconstruct(
    i1: f64,
    q2: f64,
    bob_mode: (f64, f64),
    r: f64,
    settings: &CouplerSettings,
) -> Result<Reconstruction> {
    check_range("lambda", settings.lambda, settings.lambda > 0.0, "> 0")?;
    let inv = 1.0 / settings.lambda.sqrt();
    let t = settings.tau.clamp(0.0, 1.0).sqrt();
    let (x2, p2) = bob_mode;
    Ok(Reconstruction {
        x_out: inv * i1 + t * r.exp() * x2,
        p_out: inv * q2 + t * (-r).exp() * p2,
        feasible: settings.feasible,
    })
}
