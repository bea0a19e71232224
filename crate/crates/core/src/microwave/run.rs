use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{
    adc_quadratures, coupler_settings, heterodyne_currents, reconstruct, resolve_lambda,
    AdcConfig, CircuitBudget, CouplerSettings, GainConfig, LambdaSource, NoiseEnvironment,
    TauRule,
};
use crate::error::{Error, Result};
use crate::format::sig12;
use crate::protocol::{HomodyneConfig, InputSpec, ResourceSpec};
use crate::sampling::{shot_rng, standard_normal, GaussianSampler, SampleMoments};

const CHUNK: u64 = 1 << 16;

/// Everything needed to run the circuit once the input and resource are fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicrowaveSetup {
    pub budget: CircuitBudget,
    pub gains: GainConfig,
    pub adc: AdcConfig,
    pub lambda_source: LambdaSource,
    pub tau_rule: TauRule,
}

impl MicrowaveSetup {
    pub fn fridge() -> Self {
        Self {
            budget: CircuitBudget::fridge(),
            gains: GainConfig::table1(),
            adc: AdcConfig::table1(),
            lambda_source: LambdaSource::Matched,
            tau_rule: TauRule::Half,
        }
    }

    pub fn free_space() -> Self {
        Self {
            budget: CircuitBudget::free_space(),
            tau_rule: TauRule::Full,
            ..Self::fridge()
        }
    }

    pub fn lossless() -> Self {
        Self {
            budget: CircuitBudget::lossless(),
            gains: GainConfig::unity(),
            ..Self::fridge()
        }
    }

    pub fn lambda(&self) -> Result<f64> {
        resolve_lambda(
            self.lambda_source,
            self.tau_rule,
            &self.budget,
            &self.adc,
            &self.gains,
        )
    }

    pub fn coupler(&self) -> Result<CouplerSettings> {
        coupler_settings(self.lambda()?, &self.budget)
    }

    /// LO amplitude for which `|α|²ħωBRνκ g_J g_eff` equals the resolved `Λ`,
    /// so the ADC chain and the coupler use the same coefficient.
    pub fn effective_lo(&self) -> Result<f64> {
        let lambda = self.lambda()?;
        let unit = self.adc.scale_factor(self.gains.post_gain()).powi(2)
            * self.budget.nu
            * self.budget.kappa
            * self.gains.g_j;
        Ok((lambda / unit).sqrt())
    }

    /// Analytic zero-input coefficients `(1/√Λ, √τ e^r, √τ e^{−r})`.
    pub fn noise_coefficients(&self, r: f64) -> Result<[f64; 3]> {
        let s = self.coupler()?;
        let t = s.tau.clamp(0.0, 1.0).sqrt();
        Ok([1.0 / s.lambda.sqrt(), t * r.exp(), t * (-r).exp()])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RunMode {
    /// Zero thermal and resource draws; the input is used at its mean.
    #[default]
    Deterministic,
    /// Vacuum input noise, two-mode squeezed thermal resource and thermal
    /// stage noise are all sampled per shot.
    MonteCarlo,
}

struct Shot {
    out: [f64; 2],
    target: [f64; 2],
    i1: f64,
    q2: f64,
    x2: f64,
    p2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub mode: RunMode,
    pub shots: u64,
    pub seed: u64,
    pub settings: CouplerSettings,
    pub lo_effective: f64,
    /// `(e^{−y}x_in, e^{y}p_in)` at the input mean.
    pub target: [f64; 2],
    pub mean_out: [f64; 2],
    /// Mean of `output − realized squeezed input` per quadrature.
    pub residual_mean: [f64; 2],
    pub residual_var: [f64; 2],
    pub residual_max_abs: [f64; 2],
}

impl RunReport {
    pub fn csv_header() -> Vec<&'static str> {
        vec![
            "mode",
            "shots",
            "seed",
            "lambda",
            "tau",
            "beta_db",
            "feasible",
            "target_x",
            "target_p",
            "mean_x",
            "mean_p",
            "residual_mean_x",
            "residual_mean_p",
            "residual_var_x",
            "residual_var_p",
            "residual_max_x",
            "residual_max_p",
        ]
    }

    pub fn csv_row(&self) -> Vec<String> {
        let mut row = vec![
            match self.mode {
                RunMode::Deterministic => "deterministic".to_string(),
                RunMode::MonteCarlo => "monte_carlo".to_string(),
            },
            self.shots.to_string(),
            self.seed.to_string(),
            sig12(self.settings.lambda),
            sig12(self.settings.tau),
            sig12(self.settings.beta_db),
            self.settings.feasible.to_string(),
        ];
        for v in [
            self.target[0],
            self.target[1],
            self.mean_out[0],
            self.mean_out[1],
            self.residual_mean[0],
            self.residual_mean[1],
            self.residual_var[0],
            self.residual_var[1],
            self.residual_max_abs[0],
            self.residual_max_abs[1],
        ] {
            row.push(sig12(v));
        }
        row
    }
}

struct Pipeline {
    setup: MicrowaveSetup,
    settings: CouplerSettings,
    cfg: HomodyneConfig,
    env: NoiseEnvironment,
    resource: GaussianSampler,
    r: f64,
}

impl Pipeline {
    fn new(setup: &MicrowaveSetup, resource: &ResourceSpec, sample_resource: bool) -> Result<Self> {
        let settings = setup.coupler()?;
        let cfg = HomodyneConfig::canonical(setup.effective_lo()?)?;
        let env = NoiseEnvironment::from_budget(&setup.budget, setup.adc.omega)?;
        let resource_sampler = if sample_resource {
            GaussianSampler::new(&resource.state())
        } else {
            GaussianSampler::from_moments(DVector::zeros(4), DMatrix::zeros(4, 4))
        };
        Ok(Self {
            setup: *setup,
            settings,
            cfg,
            env,
            resource: resource_sampler,
            r: resource.r,
        })
    }

    /// One pass through measurement, digitization and feed-forward. The
    /// input noise is vacuum noise applied before the input squeezer.
    fn shot(
        &self,
        input: &InputSpec,
        mode: RunMode,
        input_noise: bool,
        seed: u64,
        k: u64,
    ) -> Result<Shot> {
        let (er, emr) = (self.r.exp(), (-self.r).exp());
        let (shot_input, ab, env) = match mode {
            RunMode::Deterministic => (*input, DVector::zeros(4), self.env),
            RunMode::MonteCarlo => {
                let mut rng = shot_rng(seed, k);
                let noisy = if input_noise {
                    let dx = standard_normal(&mut rng);
                    let dp = standard_normal(&mut rng);
                    InputSpec::new(input.y, input.x_in + dx, input.p_in + dp)?
                } else {
                    *input
                };
                let ab = self.resource.sample(&mut rng);
                let env = self.env.sample(&mut rng);
                (noisy, ab, env)
            }
        };
        let x1 = -ab[0] * emr;
        let p1 = -ab[1] * er;
        let x2 = ab[2] * emr;
        let p2 = ab[3] * er;
        let s = &self.setup;
        let (x_u, p_v) =
            heterodyne_currents(&shot_input, (x1, p1), self.r, &s.budget, &s.gains, &self.cfg, &env)?;
        let adc = adc_quadratures(x_u, p_v, &s.adc, s.gains.post_gain());
        let rec = reconstruct(adc.i1, adc.q2, (x2, p2), self.r, &self.settings)?;
        Ok(Shot {
            out: [rec.x_out, rec.p_out],
            target: [
                (-shot_input.y).exp() * shot_input.x_in,
                shot_input.y.exp() * shot_input.p_in,
            ],
            i1: adc.i1,
            q2: adc.q2,
            x2,
            p2,
        })
    }

    fn run(&self, input: &InputSpec, mode: RunMode, seed: u64, shots: u64) -> Result<Vec<Shot>> {
        let mut all = Vec::with_capacity(shots as usize);
        let mut start = 0;
        while start < shots {
            let end = (start + CHUNK).min(shots);
            let batch: Vec<Shot> = (start..end)
                .into_par_iter()
                .map(|k| self.shot(input, mode, true, seed, k))
                .collect::<Result<_>>()?;
            all.extend(batch);
            start = end;
        }
        Ok(all)
    }
}

/// Full circuit per shot: heterodyne → ADC → coupler feed-forward.
pub fn end_to_end_run(
    input: &InputSpec,
    resource: &ResourceSpec,
    setup: &MicrowaveSetup,
    mode: RunMode,
    seed: u64,
    shots: u64,
) -> Result<RunReport> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let pipeline = Pipeline::new(setup, resource, mode == RunMode::MonteCarlo)?;
    let results = pipeline.run(input, mode, seed, shots)?;
    let mut out = SampleMoments::new(2);
    let mut res = SampleMoments::new(2);
    let mut max_abs = [0.0f64; 2];
    for s in &results {
        out.push(&s.out);
        let d = [s.out[0] - s.target[0], s.out[1] - s.target[1]];
        res.push(&d);
        for q in 0..2 {
            max_abs[q] = max_abs[q].max(d[q].abs());
        }
    }
    let var = if shots > 1 {
        let c = res.covariance();
        [c[(0, 0)], c[(1, 1)]]
    } else {
        [0.0, 0.0]
    };
    Ok(RunReport {
        mode,
        shots,
        seed,
        settings: pipeline.settings,
        lo_effective: pipeline.cfg.lo_amplitude,
        target: [(-input.y).exp() * input.x_in, input.y.exp() * input.p_in],
        mean_out: [out.mean()[0], out.mean()[1]],
        residual_mean: [res.mean()[0], res.mean()[1]],
        residual_var: var,
        residual_max_abs: max_abs,
    })
}

/// Zero-input calibration of the residual noise `ζ'`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    pub shots: u64,
    pub seed: u64,
    pub settings: CouplerSettings,
    /// `(1/√Λ, √τ e^r, √τ e^{−r})`.
    pub analytic: [f64; 3],
    /// Least-squares fit of `ζ'_x` on `(I₁, x₂)`; NaN where the regressor
    /// is identically zero.
    pub fit_x: [f64; 2],
    /// Least-squares fit of `ζ'_p` on `(Q₂, p₂)`.
    pub fit_p: [f64; 2],
    pub mean: [f64; 2],
    pub variance: [f64; 2],
    pub stderr: [f64; 2],
    /// Predicted `Var ζ'` per quadrature.
    pub analytic_variance: [f64; 2],
}

impl CalibrationReport {
    pub fn csv_header() -> Vec<&'static str> {
        vec![
            "quadrature",
            "shots",
            "seed",
            "lambda",
            "tau",
            "coef_adc",
            "coef_bob",
            "fit_adc",
            "fit_bob",
            "mean",
            "variance",
            "stderr",
            "analytic_variance",
        ]
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        let coef_bob = [self.analytic[1], self.analytic[2]];
        let fits = [self.fit_x, self.fit_p];
        ["x", "p"]
            .iter()
            .enumerate()
            .map(|(q, name)| {
                let mut row = vec![
                    name.to_string(),
                    self.shots.to_string(),
                    self.seed.to_string(),
                ];
                for v in [
                    self.settings.lambda,
                    self.settings.tau,
                    self.analytic[0],
                    coef_bob[q],
                    fits[q][0],
                    fits[q][1],
                    self.mean[q],
                    self.variance[q],
                    self.stderr[q],
                    self.analytic_variance[q],
                ] {
                    row.push(sig12(v));
                }
                row
            })
            .collect()
    }
}

fn fit_two(rows: &[(f64, f64, f64)]) -> [f64; 2] {
    let (mut saa, mut sab, mut sbb, mut say, mut sby) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(a, b, y) in rows {
        saa += a * a;
        sab += a * b;
        sbb += b * b;
        say += a * y;
        sby += b * y;
    }
    if sbb == 0.0 {
        return [if saa > 0.0 { say / saa } else { f64::NAN }, f64::NAN];
    }
    if saa == 0.0 {
        return [f64::NAN, sby / sbb];
    }
    let det = saa * sbb - sab * sab;
    [(sbb * say - sab * sby) / det, (saa * sby - sab * say) / det]
}

/// Runs the circuit with `x_in = p_in = 0` and no input noise, so the
/// output is the residual `ζ'` itself, then compares it with the analytic
/// coefficients and variance.
pub fn calibrate_noise(
    setup: &MicrowaveSetup,
    resource: &ResourceSpec,
    zero_resource: bool,
    shots: u64,
    seed: u64,
) -> Result<CalibrationReport> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let pipeline = Pipeline::new(setup, resource, !zero_resource)?;
    let input = InputSpec::coherent(0.0, 0.0)?;
    let mut rows_x = Vec::with_capacity(shots as usize);
    let mut rows_p = Vec::with_capacity(shots as usize);
    let mut acc = SampleMoments::new(2);
    let mut start = 0;
    while start < shots {
        let end = (start + CHUNK).min(shots);
        let batch: Vec<Shot> = (start..end)
            .into_par_iter()
            .map(|k| pipeline.shot(&input, RunMode::MonteCarlo, false, seed, k))
            .collect::<Result<_>>()?;
        for s in &batch {
            acc.push(&s.out);
            rows_x.push((s.i1, s.x2, s.out[0]));
            rows_p.push((s.q2, s.p2, s.out[1]));
        }
        start = end;
    }
    let (variance, stderr) = if shots > 1 {
        let c = acc.covariance();
        let se = acc.standard_error();
        ([c[(0, 0)], c[(1, 1)]], [se[0], se[1]])
    } else {
        ([0.0; 2], [0.0; 2])
    };

    let settings = pipeline.settings;
    let b = &setup.budget;
    let zeta = pipeline.env.zeta_variance(b) / (b.nu * b.kappa * setup.gains.g_j);
    let resource_var = if zero_resource {
        0.0
    } else {
        let m = 2.0 * resource.n + 1.0;
        let (c, s) = (m * (2.0 * resource.r).cosh(), m * (2.0 * resource.r).sinh());
        let link = b.eta * b.epsilon;
        let t = settings.tau.clamp(0.0, 1.0);
        (link + t) * c - 2.0 * (link * t).sqrt() * s
    };
    Ok(CalibrationReport {
        shots,
        seed,
        settings,
        analytic: setup.noise_coefficients(resource.r)?,
        fit_x: fit_two(&rows_x),
        fit_p: fit_two(&rows_p),
        mean: [acc.mean()[0], acc.mean()[1]],
        variance,
        stderr,
        analytic_variance: [resource_var + zeta; 2],
    })
}
