//! Deterministic random source.
//!
//! Every random draw in the crate goes through [`SeededRng`], a ChaCha8
//! stream cipher generator seeded from a 64-bit integer. ChaCha8 output is
//! fixed for a given seed and stream, independent of platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OnmfError, Result};

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent generator for sub-task `stream` (e.g. a k-means restart)
    /// of the run identified by `seed`.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Exponential variate with the given mean.
    pub fn exp(&mut self, mean: f64) -> Result<f64> {
        let u = self.uniform();
        exp_from_uniform(u, mean)
    }
}

/// Inverse CDF of the exponential distribution: `-mean · ln(1 - u)`.
/// A zero mean yields exactly zero.
pub fn exp_from_uniform(u: f64, mean: f64) -> Result<f64> {
    if !mean.is_finite() || mean < 0.0 {
        return Err(OnmfError::InvalidArgument(format!(
            "exponential mean must be finite and >= 0, got {mean}"
        )));
    }
    if mean == 0.0 {
        return Ok(0.0);
    }
    Ok(-mean * (-u).ln_1p())
}

/// Draws one exponential sample of the given mean from `rng`.
pub fn exp_sample(rng: &mut SeededRng, mean: f64) -> Result<f64> {
    rng.exp(mean)
}
