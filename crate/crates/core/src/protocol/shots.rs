use nalgebra::{DMatrix, DVector, Matrix2};
use rayon::prelude::*;

use super::{alice_measure, bob_reconstruct, HomodyneConfig, InputSpec, ResourceSpec};
use crate::error::{Error, Result};
use crate::format::sig12;
use crate::sampling::{shot_rng, GaussianSampler, SampleMoments};

const CHUNK: usize = 1 << 16;

/// Which fluctuations a Monte Carlo run draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotOptions {
    pub sample_input: bool,
    pub sample_resource: bool,
    pub lo_amplitude: f64,
}

impl Default for ShotOptions {
    fn default() -> Self {
        Self {
            sample_input: true,
            sample_resource: true,
            lo_amplitude: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotStatistics {
    pub shots: u64,
    pub seed: u64,
    /// Sample mean of Bob's `(x_out, p_out)`.
    pub mean: [f64; 2],
    /// Unbiased sample covariance of `(x_out, p_out)`.
    pub covariance: Matrix2<f64>,
    /// Standard error of each mean.
    pub stderr: [f64; 2],
}

impl ShotStatistics {
    pub fn csv_header() -> Vec<&'static str> {
        vec![
            "y", "x_in", "p_in", "r", "n", "shots", "seed", "mean_x", "mean_p", "var_x", "cov_xp",
            "var_p", "stderr_x", "stderr_p",
        ]
    }

    pub fn csv_row(&self, input: &InputSpec, resource: &ResourceSpec) -> Vec<String> {
        let mut row: Vec<String> = [input.y, input.x_in, input.p_in, resource.r, resource.n]
            .iter()
            .map(|&v| sig12(v))
            .collect();
        row.push(self.shots.to_string());
        row.push(self.seed.to_string());
        for v in [
            self.mean[0],
            self.mean[1],
            self.covariance[(0, 0)],
            self.covariance[(0, 1)],
            self.covariance[(1, 1)],
            self.stderr[0],
            self.stderr[1],
        ] {
            row.push(sig12(v));
        }
        row
    }

    /// The ideal output covariance `V_in + 2(2n+1)e^{−2r} 𝕀`.
    pub fn expected_covariance(input: &InputSpec, resource: &ResourceSpec) -> Matrix2<f64> {
        input.covariance()
            + Matrix2::identity() * (2.0 * (2.0 * resource.n + 1.0) * resource.sigma())
    }
}

pub fn simulate_shots(
    input: &InputSpec,
    resource: &ResourceSpec,
    shots: u64,
    seed: u64,
) -> Result<ShotStatistics> {
    simulate_shots_with(input, resource, shots, seed, &ShotOptions::default())
}

/// Per-shot Monte Carlo of measurement and feed-forward.
///
/// Resource draws come from the exact two-mode squeezed thermal
/// distribution `(a, b) ~ N(0, V)`; Alice's mode enters the measurement as
/// `(e^r x₁, e^{−r} p₁) = −a` and Bob holds `(e^r x₂, e^{−r} p₂) = b`.
/// Each shot owns its RNG stream, so results do not depend on thread count.
pub fn simulate_shots_with(
    input: &InputSpec,
    resource: &ResourceSpec,
    shots: u64,
    seed: u64,
    opts: &ShotOptions,
) -> Result<ShotStatistics> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let cfg = HomodyneConfig::canonical(opts.lo_amplitude)?;
    let input_sampler = GaussianSampler::from_moments(
        DVector::from_column_slice(&[input.x_in, input.p_in]),
        if opts.sample_input {
            let v = input.covariance();
            DMatrix::from_iterator(2, 2, v.iter().copied())
        } else {
            DMatrix::zeros(2, 2)
        },
    );
    let resource_sampler = if opts.sample_resource {
        GaussianSampler::new(&resource.state())
    } else {
        GaussianSampler::from_moments(DVector::zeros(4), DMatrix::zeros(4, 4))
    };
    let r = resource.r;
    let (er, emr) = (r.exp(), (-r).exp());

    let one_shot = |k: u64| -> Result<[f64; 2]> {
        let mut rng = shot_rng(seed, k);
        let v = input_sampler.sample(&mut rng);
        let ab = resource_sampler.sample(&mut rng);
        let shot_input = InputSpec::new(input.y, v[0], v[1])?;
        let record = alice_measure(&shot_input, (-ab[0] * emr, -ab[1] * er), r, &cfg)?;
        let out = bob_reconstruct((ab[2] * emr, ab[3] * er), r, &record);
        Ok([out.as_slice()[0], out.as_slice()[1]])
    };

    let mut acc = SampleMoments::new(2);
    let mut start = 0u64;
    while start < shots {
        let end = (start + CHUNK as u64).min(shots);
        let batch: Vec<[f64; 2]> = (start..end)
            .into_par_iter()
            .map(one_shot)
            .collect::<Result<_>>()?;
        for out in &batch {
            acc.push(out);
        }
        start = end;
    }

    let cov = if shots > 1 {
        acc.covariance()
    } else {
        DMatrix::zeros(2, 2)
    };
    let se = if shots > 1 {
        acc.standard_error()
    } else {
        DVector::zeros(2)
    };
    Ok(ShotStatistics {
        shots,
        seed,
        mean: [acc.mean()[0], acc.mean()[1]],
        covariance: Matrix2::new(cov[(0, 0)], cov[(0, 1)], cov[(1, 0)], cov[(1, 1)]),
        stderr: [se[0], se[1]],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_variance_single_shot_is_exact() {
        let input = InputSpec::new(0.4, 1.25, -0.5).unwrap();
        let resource = ResourceSpec::new(1.0, 0.0).unwrap();
        let opts = ShotOptions {
            sample_input: false,
            sample_resource: false,
            lo_amplitude: 2.0,
        };
        let st = simulate_shots_with(&input, &resource, 1, 9, &opts).unwrap();
        assert!((st.mean[0] - 1.25).abs() < 1e-12);
        assert!((st.mean[1] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_shots_rejected() {
        let input = InputSpec::coherent(0.0, 0.0).unwrap();
        let resource = ResourceSpec::new(1.0, 0.0).unwrap();
        assert!(matches!(simulate_shots(&input, &resource, 0, 1), Err(Error::NoShots)));
    }

    #[test]
    fn statistics_match_known_distribution() {
        let input = InputSpec::coherent(0.8, -1.1).unwrap();
        let resource = ResourceSpec::new(1.0, 0.0).unwrap();
        let st = simulate_shots(&input, &resource, 100_000, 2024).unwrap();
        // x_out ~ N(x_in, 1 + 2e^{−2}) independently of the sampler code
        let sd = (1.0 + 2.0 * (-2.0f64).exp()).sqrt() / (100_000f64).sqrt();
        assert!((st.mean[0] - 0.8).abs() < 5.0 * sd);
        assert!((st.mean[1] + 1.1).abs() < 5.0 * sd);
        assert!((st.stderr[0] - sd).abs() < 0.02 * sd);
        let expect = ShotStatistics::expected_covariance(&input, &resource);
        for i in 0..2 {
            for j in 0..2 {
                assert!((st.covariance[(i, j)] - expect[(i, j)]).abs() < 0.02);
            }
        }
    }

    #[test]
    fn thermal_resource_and_squeezed_input_variances() {
        let input = InputSpec::new(0.3, 0.0, 0.0).unwrap();
        let resource = ResourceSpec::new(0.7, 0.5).unwrap();
        let st = simulate_shots(&input, &resource, 50_000, 5).unwrap();
        let noise = 2.0 * 2.0 * (-1.4f64).exp();
        let vx = (0.6f64).exp() + noise;
        let vp = (-0.6f64).exp() + noise;
        assert!((st.covariance[(0, 0)] / vx - 1.0).abs() < 0.03);
        assert!((st.covariance[(1, 1)] / vp - 1.0).abs() < 0.03);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let input = InputSpec::new(0.2, 0.5, 0.5).unwrap();
        let resource = ResourceSpec::new(0.9, 0.1).unwrap();
        let a = simulate_shots(&input, &resource, 3000, 77).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| simulate_shots(&input, &resource, 3000, 77).unwrap());
        assert_eq!(a, b);
        let c = simulate_shots(&input, &resource, 3000, 78).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn csv_row_layout() {
        let input = InputSpec::coherent(1.0, 2.0).unwrap();
        let resource = ResourceSpec::new(0.5, 0.0).unwrap();
        let st = simulate_shots(&input, &resource, 10, 3).unwrap();
        let row = st.csv_row(&input, &resource);
        assert_eq!(row.len(), ShotStatistics::csv_header().len());
        assert_eq!(row[5], "10");
        assert_eq!(row[6], "3");
    }
}
