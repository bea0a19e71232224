//! Seeded multivariate normal sampling and streaming moment accumulators.
//!
//! Every Monte Carlo shot draws from its own ChaCha stream selected by the
//! shot index, so results do not depend on how shots are split between
//! worker threads.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::gaussian::GaussianState;

/// RNG for shot `shot` of a run seeded with `seed`.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

pub fn standard_normal<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Draws `x = x̄ + L z` with `L Lᵀ = V`.
///
/// `L` comes from the symmetric eigendecomposition with negative
/// eigenvalues clamped to zero, so singular (e.g. zero) covariances are
/// allowed.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    mean: DVector<f64>,
    factor: DMatrix<f64>,
}

impl GaussianSampler {
    pub fn new(state: &GaussianState) -> Self {
        Self::from_moments(
            state.mean().as_dvector().clone(),
            state.cov().matrix().clone(),
        )
    }

    pub fn from_moments(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        let eig = cov.symmetric_eigen();
        let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let factor = &eig.eigenvectors * DMatrix::from_diagonal(&roots);
        Self { mean, factor }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let z = DVector::from_fn(self.dim(), |_, _| standard_normal(rng));
        &self.mean + &self.factor * z
    }
}

/// Welford accumulator for the mean vector and sample covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMoments {
    count: u64,
    mean: DVector<f64>,
    comoment: DMatrix<f64>,
}

impl SampleMoments {
    pub fn new(dim: usize) -> Self {
        Self {
            count: 0,
            mean: DVector::zeros(dim),
            comoment: DMatrix::zeros(dim, dim),
        }
    }

    pub fn push(&mut self, x: &[f64]) {
        debug_assert_eq!(x.len(), self.mean.len());
        self.count += 1;
        let n = self.count as f64;
        let x = DVector::from_column_slice(x);
        let before = &x - &self.mean;
        self.mean += &before / n;
        let after = &x - &self.mean;
        self.comoment += &before * after.transpose();
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// Unbiased sample covariance (zero for fewer than two samples).
    pub fn covariance(&self) -> DMatrix<f64> {
        if self.count < 2 {
            return DMatrix::zeros(self.mean.len(), self.mean.len());
        }
        let c = &self.comoment / (self.count as f64 - 1.0);
        (&c + c.transpose()) * 0.5
    }

    /// Standard error of each mean component.
    pub fn standard_error(&self) -> DVector<f64> {
        let n = self.count.max(1) as f64;
        self.covariance().diagonal().map(|v| (v / n).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::tmst;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = shot_rng(7, 3).random();
        let b: u64 = shot_rng(7, 3).random();
        let c: u64 = shot_rng(7, 4).random();
        let d: u64 = shot_rng(8, 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn sampler_reproduces_covariance() {
        let state = tmst(0.5, 0.5).unwrap();
        let sampler = GaussianSampler::new(&state);
        let mut m = SampleMoments::new(4);
        for shot in 0..40_000 {
            let x = sampler.sample(&mut shot_rng(1, shot));
            m.push(x.as_slice());
        }
        let target = state.cov().matrix();
        let got = m.covariance();
        for i in 0..4 {
            for j in 0..4 {
                // sd of a sample covariance entry ≲ √((Vii Vjj + Vij²)/n)
                let sd = ((target[(i, i)] * target[(j, j)] + target[(i, j)].powi(2)) / 40_000.0).sqrt();
                assert!((got[(i, j)] - target[(i, j)]).abs() < 5.0 * sd);
            }
        }
    }

    #[test]
    fn zero_covariance_is_allowed() {
        let s = GaussianSampler::from_moments(DVector::from_vec(vec![1.0, 2.0]), DMatrix::zeros(2, 2));
        let x = s.sample(&mut shot_rng(0, 0));
        assert_eq!(x.as_slice(), &[1.0, 2.0]);
    }

    #[test]
    fn welford_matches_two_pass() {
        let data = [[1.0, 2.0], [2.0, -1.0], [4.0, 0.5], [-3.0, 7.0]];
        let mut m = SampleMoments::new(2);
        for d in &data {
            m.push(d);
        }
        let n = data.len() as f64;
        let mx = data.iter().map(|d| d[0]).sum::<f64>() / n;
        let my = data.iter().map(|d| d[1]).sum::<f64>() / n;
        let cxy = data.iter().map(|d| (d[0] - mx) * (d[1] - my)).sum::<f64>() / (n - 1.0);
        assert!((m.mean()[0] - mx).abs() < 1e-14);
        assert!((m.covariance()[(0, 1)] - cxy).abs() < 1e-13);
    }
}
