//! Factorization dispatch and noise-level sweeps over planted instances.

use std::time::Instant;

use rayon::prelude::*;

use crate::double::{factorize_double, factorize_double_large_k};
use crate::error::{OnmfError, Result};
use crate::kmeans::KMeansConfig;
use crate::matrix::NonNegMatrix;
use crate::metrics::{non_orthogonality, planted_reference, reconstruction_error, recovery_error};
use crate::scalar::Scalar;
use crate::single::{factorize_single, OnmfSolution};
use crate::synth::{gen_planted, PlantedMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorMode {
    Single,
    Double,
    /// Double-factor with inner dimension `min(m, n)`; the requested `k` is ignored.
    DoubleLargeK,
}

impl FactorMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FactorMode::Single => "single",
            FactorMode::Double => "double",
            FactorMode::DoubleLargeK => "double-large-k",
        }
    }

    pub fn planted_mode(self) -> PlantedMode {
        match self {
            FactorMode::Single => PlantedMode::Single,
            FactorMode::Double | FactorMode::DoubleLargeK => PlantedMode::Double,
        }
    }

    pub fn is_double(self) -> bool {
        self != FactorMode::Single
    }
}

pub fn factorize<T: Scalar>(
    m: &NonNegMatrix<T>,
    k: usize,
    mode: FactorMode,
    config: &KMeansConfig,
) -> Result<OnmfSolution<T>> {
    match mode {
        FactorMode::Single => factorize_single(m, k, config),
        FactorMode::Double => factorize_double(m, k, config),
        FactorMode::DoubleLargeK => factorize_double_large_k(m),
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub noise_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub mode: FactorMode,
    /// Its `seed` field is replaced by each trial's seed.
    pub kmeans: KMeansConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub seed: u64,
    pub recovery_error: f64,
    pub reconstruction_error: f64,
    /// `‖M − M_truth‖_F`.
    pub planted_error: f64,
    /// Of `W`, and in double modes the larger of that and the same on `Aᵀ`.
    pub non_orthogonality: f64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub noise_level: f64,
    pub median_recovery_error: f64,
    pub median_reconstruction_error: f64,
    pub median_planted_error: f64,
    pub max_non_orthogonality: f64,
    pub median_wall_time_ms: f64,
    /// `√(2mn)·σ`.
    pub planted_reference: f64,
    pub trials: Vec<TrialResult>,
}

/// Lower median: the element at index `(len − 1) / 2` after sorting.
pub fn lower_median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[(v.len() - 1) / 2]
}

/// Seed of trial `t` at grid position `level`.
pub fn trial_seed(base: u64, level: usize, trials: usize, t: usize) -> u64 {
    base.wrapping_add((level * trials + t) as u64)
}

pub fn run_trial(cfg: &SweepConfig, noise_level: f64, seed: u64) -> Result<TrialResult> {
    let inst = gen_planted::<f64>(
        cfg.m,
        cfg.n,
        cfg.k,
        noise_level,
        seed,
        cfg.mode.planted_mode(),
    )?;
    let kcfg = KMeansConfig { seed, ..cfg.kmeans };
    let start = Instant::now();
    let sol = factorize(&inst.m_observed, cfg.k, cfg.mode, &kcfg)?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let w = sol.w_dense();
    let mut non_orth = non_orthogonality(w.inner());
    if cfg.mode.is_double() {
        non_orth = non_orth.max(non_orthogonality(sol.a.transpose().inner()));
    }
    Ok(TrialResult {
        seed,
        recovery_error: recovery_error(&inst.m_truth, &sol.a, &w)?,
        reconstruction_error: reconstruction_error(&inst.m_observed, &sol.a, &w)?,
        planted_error: inst
            .m_observed
            .sub(&inst.m_truth)?
            .frobenius_norm_sq()
            .sqrt(),
        non_orthogonality: non_orth,
        wall_time_ms,
    })
}

/// Runs every (noise level, trial) pair, concurrently; rows follow the grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.trials == 0 {
        return Err(OnmfError::InvalidArgument("trials must be >= 1".into()));
    }
    if cfg.noise_grid.is_empty() {
        return Err(OnmfError::InvalidArgument("noise grid is empty".into()));
    }
    if let Some(&bad) = cfg
        .noise_grid
        .iter()
        .find(|s| !(s.is_finite() && **s >= 0.0))
    {
        return Err(OnmfError::InvalidArgument(format!(
            "invalid noise level {bad}"
        )));
    }
    cfg.kmeans.validate()?;

    let jobs: Vec<(usize, usize)> = (0..cfg.noise_grid.len())
        .flat_map(|l| (0..cfg.trials).map(move |t| (l, t)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(l, t)| {
            run_trial(
                cfg,
                cfg.noise_grid[l],
                trial_seed(cfg.seed, l, cfg.trials, t),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(results
        .chunks(cfg.trials)
        .zip(&cfg.noise_grid)
        .map(|(trials, &sigma)| {
            let col = |f: fn(&TrialResult) -> f64| trials.iter().map(f).collect::<Vec<_>>();
            SweepRow {
                noise_level: sigma,
                median_recovery_error: lower_median(&col(|t| t.recovery_error)),
                median_reconstruction_error: lower_median(&col(|t| t.reconstruction_error)),
                median_planted_error: lower_median(&col(|t| t.planted_error)),
                max_non_orthogonality: col(|t| t.non_orthogonality).into_iter().fold(0.0, f64::max),
                median_wall_time_ms: lower_median(&col(|t| t.wall_time_ms)),
                planted_reference: planted_reference(cfg.m, cfg.n, sigma),
                trials: trials.to_vec(),
            }
        })
        .collect())
}

/// One line per noise level. Timing is the only non-deterministic column and
/// is left out when `with_timing` is false.
pub fn sweep_csv(rows: &[SweepRow], with_timing: bool) -> String {
    let mut out = String::from(
        "noise_level,median_recovery_error,median_reconstruction_error,median_planted_error,max_non_orthogonality",
    );
    if with_timing {
        out.push_str(",median_wall_time_ms");
    }
    out.push_str(",planted_reference\n");
    for r in rows {
        out.push_str(&format!(
            "{:?},{:?},{:?},{:?},{:?}",
            r.noise_level,
            r.median_recovery_error,
            r.median_reconstruction_error,
            r.median_planted_error,
            r.max_non_orthogonality
        ));
        if with_timing {
            out.push_str(&format!(",{:?}", r.median_wall_time_ms));
        }
        out.push_str(&format!(",{:?}\n", r.planted_reference));
    }
    out
}
