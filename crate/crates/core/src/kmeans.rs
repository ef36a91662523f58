//! Weighted k-means: minimize `Σ ℓ_i ‖x_i − c_φ(i)‖²` over centroids and
//! assignment, via k-means++ seeding, weighted Lloyd iterations and restarts.

use rayon::prelude::*;

use crate::error::{OnmfError, Result};
use crate::matrix::WeightedPointSet;
use crate::rng::SeededRng;
use crate::scalar::{dist_sq, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Lloyd stops once the relative cost improvement of an iteration drops
    /// to this value or below.
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_iters: 100,
            rel_tol: 1e-9,
            seed: 0,
        }
    }
}

impl KMeansConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(OnmfError::InvalidArgument("restarts must be >= 1".into()));
        }
        if self.max_iters == 0 {
            return Err(OnmfError::InvalidArgument("max_iters must be >= 1".into()));
        }
        if self.rel_tol.is_nan() || self.rel_tol < 0.0 {
            return Err(OnmfError::InvalidArgument(format!(
                "rel_tol must be >= 0, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansSolution<T> {
    pub centroids: Vec<Vec<T>>,
    /// Zero-based cluster index of every point.
    pub assignment: Vec<usize>,
    pub cost: T,
    /// Number of assignment passes performed.
    pub iterations: usize,
    /// Cost after each assignment pass, ending with the final cost.
    pub cost_history: Vec<T>,
}

impl<T: Scalar> KMeansSolution<T> {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }
}

pub fn weighted_cost<T: Scalar>(
    pts: &WeightedPointSet<T>,
    centroids: &[Vec<T>],
    assignment: &[usize],
) -> T {
    pts.points
        .iter()
        .zip(&pts.weights)
        .zip(assignment)
        .map(|((p, &w), &j)| w * dist_sq(p, &centroids[j]))
        .sum()
}

/// Nearest centroid by squared distance; ties go to the smallest index.
pub fn nearest<T: Scalar>(point: &[T], centroids: &[Vec<T>]) -> (usize, T) {
    let mut best = (0, T::infinity());
    for (j, c) in centroids.iter().enumerate() {
        let d = dist_sq(point, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

pub fn assign<T: Scalar>(pts: &WeightedPointSet<T>, centroids: &[Vec<T>]) -> Vec<usize> {
    pts.points.iter().map(|p| nearest(p, centroids).0).collect()
}

/// Replaces each centroid with positive total weight by the weighted mean of
/// its points. Clusters of zero total weight keep their centroid.
pub fn recenter<T: Scalar>(
    pts: &WeightedPointSet<T>,
    centroids: &[Vec<T>],
    assignment: &[usize],
) -> Vec<Vec<T>> {
    let dim = pts.dim();
    let k = centroids.len();
    let mut sums = vec![vec![T::zero(); dim]; k];
    let mut mass = vec![T::zero(); k];
    for ((p, &w), &j) in pts.points.iter().zip(&pts.weights).zip(assignment) {
        if w > T::zero() {
            mass[j] = mass[j] + w;
            for (s, &x) in sums[j].iter_mut().zip(p) {
                *s = *s + w * x;
            }
        }
    }
    sums.into_iter()
        .zip(mass)
        .zip(centroids)
        .map(|((s, q), old)| {
            if q > T::zero() {
                s.into_iter().map(|v| v / q).collect()
            } else {
                old.clone()
            }
        })
        .collect()
}

/// Index drawn with probability proportional to `weights`; `None` if they sum to zero.
fn sample_proportional<T: Scalar>(weights: &[T], rng: &mut SeededRng) -> Option<usize> {
    let total: T = weights.iter().copied().sum();
    if total.is_nan() || total <= T::zero() {
        return None;
    }
    let target = T::of(rng.uniform()) * total;
    let mut acc = T::zero();
    let mut last_positive = None;
    for (i, &w) in weights.iter().enumerate() {
        if w > T::zero() {
            acc = acc + w;
            last_positive = Some(i);
            if acc > target {
                return Some(i);
            }
        }
    }
    last_positive
}

/// k-means++ seeding on weighted points. The first centroid is drawn with
/// probability `∝ ℓ_i`, each later one `∝ ℓ_i · D(x_i)²`. Once every
/// positive-weight point is covered exactly, the remaining slots repeat the
/// last chosen centroid. With zero total weight all centroids are zero.
pub fn kmeanspp_seed<T: Scalar>(
    pts: &WeightedPointSet<T>,
    k: usize,
    rng: &mut SeededRng,
) -> Vec<Vec<T>> {
    let dim = pts.dim();
    let Some(first) = sample_proportional(&pts.weights, rng) else {
        return vec![vec![T::zero(); dim]; k];
    };
    let mut centroids = Vec::with_capacity(k);
    centroids.push(pts.points[first].clone());
    let mut d2: Vec<T> = pts
        .points
        .iter()
        .map(|p| dist_sq(p, &centroids[0]))
        .collect();
    while centroids.len() < k {
        let scores: Vec<T> = pts.weights.iter().zip(&d2).map(|(&w, &d)| w * d).collect();
        let next = match sample_proportional(&scores, rng) {
            Some(i) => pts.points[i].clone(),
            None => centroids[centroids.len() - 1].clone(),
        };
        for (d, p) in d2.iter_mut().zip(&pts.points) {
            let nd = dist_sq(p, &next);
            if nd < *d {
                *d = nd;
            }
        }
        centroids.push(next);
    }
    centroids
}

/// Weighted Lloyd iterations from the given centroids. On return every
/// positive-weight cluster's centroid is its weighted mean.
pub fn lloyd<T: Scalar>(
    pts: &WeightedPointSet<T>,
    init: Vec<Vec<T>>,
    config: &KMeansConfig,
) -> KMeansSolution<T> {
    let tol = T::of(config.rel_tol);
    let mut centroids = init;
    let mut assignment = assign(pts, &centroids);
    let mut cost = weighted_cost(pts, &centroids, &assignment);
    let mut history = vec![cost];
    let mut iterations = 1;
    let slack = T::of(1e-10) * pts.total_weight();

    while iterations < config.max_iters.max(1) && cost > T::zero() {
        centroids = recenter(pts, &centroids, &assignment);
        assignment = assign(pts, &centroids);
        let next = weighted_cost(pts, &centroids, &assignment);
        debug_assert!(
            next <= cost + cost * T::of(1e-10) + slack,
            "Lloyd cost increased"
        );
        history.push(next);
        iterations += 1;
        let improvement = (cost - next) / cost;
        cost = next;
        if improvement <= tol {
            break;
        }
    }

    centroids = recenter(pts, &centroids, &assignment);
    let final_cost = weighted_cost(pts, &centroids, &assignment);
    if final_cost != cost {
        history.push(final_cost);
    }

    KMeansSolution {
        centroids,
        assignment,
        cost: final_cost,
        iterations,
        cost_history: history,
    }
}

/// Best of `config.restarts` independent k-means++ + Lloyd runs. Restart `r`
/// draws from stream `r` of `config.seed`; the winner is the lowest cost,
/// ties going to the smaller restart index, so the result does not depend
/// on thread scheduling.
pub fn weighted_kmeans<T: Scalar>(
    pts: &WeightedPointSet<T>,
    k: usize,
    config: &KMeansConfig,
) -> Result<KMeansSolution<T>> {
    config.validate()?;
    if k == 0 {
        return Err(OnmfError::InvalidArgument("k must be >= 1".into()));
    }
    let runs: Vec<KMeansSolution<T>> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = SeededRng::with_stream(config.seed, r as u64);
            let init = kmeanspp_seed(pts, k, &mut rng);
            lloyd(pts, init, config)
        })
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate().skip(1) {
        if run.cost < runs[best].cost {
            best = i;
        }
    }
    Ok(runs.into_iter().nth(best).expect("restarts >= 1"))
}

/// Raises negative centroid coordinates to zero.
pub fn clamp_nonnegative<T: Scalar>(centroids: &mut [Vec<T>]) {
    for c in centroids {
        for v in c.iter_mut() {
            if *v < T::zero() {
                *v = T::zero();
            }
        }
    }
}
