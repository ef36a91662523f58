//! Double-factor orthogonality: both the columns of `A` and the rows of `W`
//! are orthogonal and non-negative, so `A·W` is a sum of disjoint rank-one
//! blocks.
//!
//! The pipeline:
//!
//! 1. weighted k-means on the normalized columns, giving centroids `c_j` and
//!    their total weights `q_j`;
//! 2. weight reduction, which cancels weight between any two surviving
//!    centroids whose angle lies in `[π/6, π/3]`;
//! 3. grouping of the surviving centroids by angle (`< π/6` inside a group,
//!    `> π/3` across groups), then an exact coordinate-wise solve for `k`
//!    orthogonal non-negative vectors closest to the grouped centroids.

use crate::error::{OnmfError, Result};
use crate::kmeans::{weighted_kmeans, KMeansConfig, KMeansSolution};
use crate::matrix::{
    cosine, normalize_columns, CompactW, DenseMatrix, NonNegMatrix, WeightedPointSet,
};
use crate::scalar::Scalar;
use crate::single::{objective_of, projection_scale, OnmfSolution};

/// `cos(π/3)`: angles at or above π/3 have cosine at or below this.
pub const COS_PI_3: f64 = 0.5;
/// `cos(π/6) = √3/2`: angles below π/6 have cosine above this.
pub const COS_PI_6: f64 = 0.866_025_403_784_438_6;
/// `sin²(π/12) = (2 − √3)/4`.
pub const SIN_SQ_PI_12: f64 = 0.066_987_298_107_780_68;

/// Approximation factor of the double-factor algorithm when `k ≥ min(m, n)`.
pub fn large_k_ratio() -> f64 {
    1.0 / SIN_SQ_PI_12
}

/// Approximation factor of the double-factor algorithm built on an
/// `r`-approximate weighted k-means subroutine.
pub fn double_ratio(r: f64) -> f64 {
    2.0 * r + (8.0 * r + 8.0) / SIN_SQ_PI_12
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentroidWeights<T> {
    pub q: Vec<T>,
    pub q_reduced: Vec<T>,
}

/// Zero-based group index for every centroid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    pub sigma: Vec<usize>,
    pub groups: usize,
}

/// Cosine between centroids, treating a zero vector as orthogonal to all.
fn cos_or_zero<T: Scalar>(x: &[T], y: &[T]) -> T {
    cosine(x, y).unwrap_or(T::zero())
}

/// True when the angle between `x` and `y` lies in `[π/6, π/3]`.
fn in_band<T: Scalar>(x: &[T], y: &[T]) -> Result<bool> {
    let c = cosine(x, y)?;
    Ok(c >= T::of(COS_PI_3) && c <= T::of(COS_PI_6))
}

/// Total point weight per centroid. Every centroid with positive weight is
/// moved to the weighted mean of its points, so it has norm at most 1.
pub fn centroid_weights<T: Scalar>(
    pts: &WeightedPointSet<T>,
    sol: &KMeansSolution<T>,
) -> (Vec<Vec<T>>, Vec<T>) {
    let k = sol.k();
    let dim = pts.dim();
    let mut q = vec![T::zero(); k];
    let mut sums = vec![vec![T::zero(); dim]; k];
    for ((p, &w), &j) in pts.points.iter().zip(&pts.weights).zip(&sol.assignment) {
        q[j] = q[j] + w;
        for (s, &x) in sums[j].iter_mut().zip(p) {
            *s = *s + w * x;
        }
    }
    let centroids = sums
        .into_iter()
        .zip(&q)
        .zip(&sol.centroids)
        .map(|((s, &qj), old)| {
            if qj > T::zero() {
                s.into_iter().map(|v| v / qj).collect()
            } else {
                old.clone()
            }
        })
        .collect();
    (centroids, q)
}

/// One lexicographic pass over pairs `j₁ < j₂`: when both still carry weight
/// and their angle is in `[π/6, π/3]`, both lose the smaller of the two
/// weights. Weights only decrease, so after the pass no surviving pair is in
/// the band.
pub fn weight_reduction<T: Scalar>(centroids: &[Vec<T>], q: &[T]) -> Result<Vec<T>> {
    let mut reduced = q.to_vec();
    let k = reduced.len();
    for j1 in 0..k {
        for j2 in j1 + 1..k {
            if reduced[j1] > T::zero()
                && reduced[j2] > T::zero()
                && in_band(&centroids[j1], &centroids[j2])?
            {
                let d = reduced[j1].min(reduced[j2]);
                reduced[j1] = reduced[j1] - d;
                reduced[j2] = reduced[j2] - d;
            }
        }
    }
    debug_assert!(band_is_empty(centroids, &reduced));
    Ok(reduced)
}

/// No pair of positive-weight centroids has its angle in `[π/6, π/3]`.
pub fn band_is_empty<T: Scalar>(centroids: &[Vec<T>], q_reduced: &[T]) -> bool {
    let live: Vec<usize> = (0..q_reduced.len())
        .filter(|&j| q_reduced[j] > T::zero())
        .collect();
    live.iter().enumerate().all(|(a, &j1)| {
        live[a + 1..]
            .iter()
            .all(|&j2| !in_band(&centroids[j1], &centroids[j2]).unwrap_or(true))
    })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the positive-weight centroids under "angle
/// `< π/6`", numbered by smallest member. Zero-weight centroids join the
/// group of their angularly nearest positive-weight centroid (smallest index
/// on ties). Fails if some pair violates the within/across separation.
pub fn group_centroids<T: Scalar>(centroids: &[Vec<T>], q_reduced: &[T]) -> Result<Grouping> {
    let k = centroids.len();
    let live: Vec<usize> = (0..k).filter(|&j| q_reduced[j] > T::zero()).collect();
    if live.is_empty() {
        return Ok(Grouping {
            sigma: vec![0; k],
            groups: usize::from(k > 0),
        });
    }

    let close = T::of(COS_PI_6);
    let mut parent: Vec<usize> = (0..k).collect();
    for (a, &j1) in live.iter().enumerate() {
        for &j2 in &live[a + 1..] {
            if cosine(&centroids[j1], &centroids[j2])? > close {
                let (r1, r2) = (find(&mut parent, j1), find(&mut parent, j2));
                if r1 != r2 {
                    parent[r1.max(r2)] = r1.min(r2);
                }
            }
        }
    }

    let mut label = vec![usize::MAX; k];
    let mut sigma = vec![0; k];
    let mut groups = 0;
    for &j in &live {
        let root = find(&mut parent, j);
        if label[root] == usize::MAX {
            label[root] = groups;
            groups += 1;
        }
        sigma[j] = label[root];
    }

    let far = T::of(COS_PI_3);
    for (a, &j1) in live.iter().enumerate() {
        for &j2 in &live[a + 1..] {
            let c = cosine(&centroids[j1], &centroids[j2])?;
            let ok = if sigma[j1] == sigma[j2] {
                c > close
            } else {
                c < far
            };
            if !ok {
                return Err(OnmfError::Grouping(format!(
                    "centroids {j1} and {j2} (groups {} and {}) have cosine {}",
                    sigma[j1], sigma[j2], c
                )));
            }
        }
    }

    for j in 0..k {
        if q_reduced[j] > T::zero() {
            continue;
        }
        let mut best = live[0];
        let mut best_cos = cos_or_zero(&centroids[j], &centroids[best]);
        for &l in &live[1..] {
            let c = cos_or_zero(&centroids[j], &centroids[l]);
            if c > best_cos {
                best = l;
                best_cos = c;
            }
        }
        sigma[j] = sigma[best];
    }

    Ok(Grouping { sigma, groups })
}

/// Exact minimizer of `Σ_{q'_j>0} q'_j ‖c_j − a_σ(j)‖²` over `k` non-negative
/// pairwise-orthogonal vectors. Coordinate `h` goes to the group maximizing
/// `q*_s μ²_{s,h}` (smallest index on ties) with value `μ_{s,h}`, where `q*_s`
/// is the group's total weight and `μ_{s,h}` its weighted mean coordinate.
pub fn solve_orthogonal_centroids<T: Scalar>(
    centroids: &[Vec<T>],
    q_reduced: &[T],
    grouping: &Grouping,
    k: usize,
) -> Result<Vec<Vec<T>>> {
    let dim = centroids.first().map_or(0, Vec::len);
    if let Some(&index) = grouping.sigma.iter().find(|&&s| s >= k) {
        return Err(OnmfError::IndexOutOfRange { index, k });
    }
    let mut q_star = vec![T::zero(); k];
    let mut mu = vec![vec![T::zero(); dim]; k];
    for (j, c) in centroids.iter().enumerate() {
        let qj = q_reduced[j];
        if qj > T::zero() {
            let s = grouping.sigma[j];
            q_star[s] = q_star[s] + qj;
            for (acc, &x) in mu[s].iter_mut().zip(c) {
                *acc = *acc + qj * x;
            }
        }
    }
    for (m, &qs) in mu.iter_mut().zip(&q_star) {
        if qs > T::zero() {
            m.iter_mut().for_each(|v| *v = *v / qs);
        }
    }

    let mut a = vec![vec![T::zero(); dim]; k];
    for h in 0..dim {
        let mut best: Option<(usize, T)> = None;
        for s in 0..k {
            if q_star[s] > T::zero() {
                let score = q_star[s] * mu[s][h] * mu[s][h];
                if best.is_none_or(|(_, b)| score > b) {
                    best = Some((s, score));
                }
            }
        }
        if let Some((s, score)) = best {
            if score > T::zero() {
                a[s][h] = mu[s][h].max(T::zero());
            }
        }
    }
    Ok(a)
}

/// Steps 2 and 3 given the (re-centred) centroids, their weights and the
/// column-to-centroid assignment.
fn finish<T: Scalar>(
    m: &NonNegMatrix<T>,
    centroids: &[Vec<T>],
    q: &[T],
    assignment: &[usize],
    k: usize,
) -> Result<OnmfSolution<T>> {
    let q_reduced = weight_reduction(centroids, q)?;
    let grouping = group_centroids(centroids, &q_reduced)?;
    let a_cols = solve_orthogonal_centroids(centroids, &q_reduced, &grouping, k)?;

    let columns = m.columns();
    let mut group = Vec::with_capacity(columns.len());
    let mut theta = Vec::with_capacity(columns.len());
    for (col, &j) in columns.iter().zip(assignment) {
        let s = grouping.sigma[j];
        group.push(s);
        theta.push(projection_scale(col, &a_cols[s]));
    }

    let a = NonNegMatrix::new(DenseMatrix::from_columns(m.rows(), &a_cols)?)?;
    let w = CompactW::new(k, group, theta)?;
    let objective = objective_of(m, &a, &w)?;
    Ok(OnmfSolution { a, w, objective })
}

pub fn factorize_double<T: Scalar>(
    m: &NonNegMatrix<T>,
    k: usize,
    config: &KMeansConfig,
) -> Result<OnmfSolution<T>> {
    if k == 0 {
        return Err(OnmfError::InvalidArgument("k must be >= 1".into()));
    }
    let pts = normalize_columns(m);
    let sol = weighted_kmeans(&pts, k, config)?;
    let (centroids, q) = centroid_weights(&pts, &sol);
    finish(m, &centroids, &q, &sol.assignment, k)
}

/// Double-factor factorization with inner dimension `min(m, n)`. Every
/// column is its own centroid, so no k-means is needed. When `m < n` the
/// transpose is factorized and the factors are swapped back.
pub fn factorize_double_large_k<T: Scalar>(m: &NonNegMatrix<T>) -> Result<OnmfSolution<T>> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(OnmfError::InvalidArgument(
            "matrix must be non-empty".into(),
        ));
    }
    if rows >= cols {
        return large_k_columns(m);
    }
    let t = m.transpose();
    let sol_t = large_k_columns(&t)?;
    // Mᵀ ≈ A_t W_t  ⇒  M ≈ W_tᵀ A_tᵀ.
    let a = sol_t.w.materialize().transpose();
    let w = CompactW::from_dense(&sol_t.a.transpose())?;
    let objective = objective_of(m, &a, &w)?;
    Ok(OnmfSolution { a, w, objective })
}

fn large_k_columns<T: Scalar>(m: &NonNegMatrix<T>) -> Result<OnmfSolution<T>> {
    let pts = normalize_columns(m);
    let k = pts.len();
    let assignment: Vec<usize> = (0..k).collect();
    finish(m, &pts.points, &pts.weights, &assignment, k)
}

/// Every row has at most one non-zero, i.e. the columns have disjoint supports.
pub fn columns_disjoint<T: Scalar>(a: &DenseMatrix<T>) -> bool {
    (0..a.rows()).all(|r| a.row(r).iter().filter(|&&v| v != T::zero()).count() <= 1)
}
