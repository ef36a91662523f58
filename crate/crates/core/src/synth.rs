//! Planted ONMF instances: `M = A_truth · W_truth + noise` with exponential
//! entries, `W_truth` having one non-zero per column and, in double mode,
//! `A_truth` having one non-zero per row.

use crate::error::{OnmfError, Result};
use crate::matrix::{DenseMatrix, NonNegMatrix};
use crate::rng::SeededRng;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantedMode {
    Single,
    Double,
}

impl PlantedMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PlantedMode::Single => "single",
            PlantedMode::Double => "double",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedInstance<T> {
    pub a_truth: NonNegMatrix<T>,
    pub w_truth: NonNegMatrix<T>,
    pub m_truth: NonNegMatrix<T>,
    pub m_observed: NonNegMatrix<T>,
    pub noise_level: f64,
    pub seed: u64,
    pub mode: PlantedMode,
}

pub fn gen_planted_single<T: Scalar>(
    m: usize,
    n: usize,
    k: usize,
    noise_level: f64,
    seed: u64,
) -> Result<PlantedInstance<T>> {
    gen_planted(m, n, k, noise_level, seed, PlantedMode::Single)
}

pub fn gen_planted_double<T: Scalar>(
    m: usize,
    n: usize,
    k: usize,
    noise_level: f64,
    seed: u64,
) -> Result<PlantedInstance<T>> {
    gen_planted(m, n, k, noise_level, seed, PlantedMode::Double)
}

/// Draw order is fixed: `A_truth` row-major, then `W_truth` column by column
/// (location, then value), then the noise row-major.
pub fn gen_planted<T: Scalar>(
    m: usize,
    n: usize,
    k: usize,
    noise_level: f64,
    seed: u64,
    mode: PlantedMode,
) -> Result<PlantedInstance<T>> {
    if m == 0 || n == 0 || k == 0 {
        return Err(OnmfError::InvalidArgument(format!(
            "sizes must be positive (m={m}, n={n}, k={k})"
        )));
    }
    if !noise_level.is_finite() || noise_level < 0.0 {
        return Err(OnmfError::InvalidArgument(format!(
            "noise level must be finite and >= 0, got {noise_level}"
        )));
    }
    let mut rng = SeededRng::new(seed);

    let mut a = DenseMatrix::zeros(m, k);
    match mode {
        PlantedMode::Single => {
            for r in 0..m {
                for c in 0..k {
                    a.set(r, c, T::of(rng.exp(1.0)?));
                }
            }
        }
        PlantedMode::Double => {
            for r in 0..m {
                let c = rng.below(k);
                a.set(r, c, T::of(rng.exp(1.0)?));
            }
        }
    }

    let mut w = DenseMatrix::zeros(k, n);
    for i in 0..n {
        let s = rng.below(k);
        w.set(s, i, T::of(rng.exp(1.0)?));
    }

    let a_truth = NonNegMatrix::new(a)?;
    let w_truth = NonNegMatrix::new(w)?;
    let m_truth = a_truth.matmul(&w_truth)?;

    let mut observed = m_truth.inner().clone();
    for r in 0..m {
        for c in 0..n {
            let v = observed.get(r, c) + T::of(rng.exp(noise_level)?);
            observed.set(r, c, v);
        }
    }

    Ok(PlantedInstance {
        a_truth,
        w_truth,
        m_truth,
        m_observed: NonNegMatrix::new(observed)?,
        noise_level,
        seed,
        mode,
    })
}
