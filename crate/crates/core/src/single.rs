//! Single-factor orthogonality: `W` has orthogonal non-negative rows.
//!
//! The columns of `M` are normalized and weighted by their squared norms, a
//! weighted k-means solution provides the columns of `A`, and each column of
//! `W` is the least-squares scale of its assigned centroid. Given an
//! `r`-approximate k-means subroutine the result is a `2r`-approximation of
//! the best factorization with orthogonal rows of `W`.

use crate::error::{OnmfError, Result};
use crate::kmeans::{clamp_nonnegative, weighted_kmeans, KMeansConfig};
use crate::matrix::{normalize_columns, CompactW, DenseMatrix, NonNegMatrix};
use crate::scalar::{dot, norm_sq, Scalar};

/// A factorization `M ≈ A·W` with `W` stored compactly. `objective` is
/// `‖M − A·W‖²_F`, recomputed from the factors.
#[derive(Debug, Clone, PartialEq)]
pub struct OnmfSolution<T> {
    pub a: NonNegMatrix<T>,
    pub w: CompactW<T>,
    pub objective: T,
}

impl<T: Scalar> OnmfSolution<T> {
    pub fn k(&self) -> usize {
        self.w.k()
    }

    pub fn w_dense(&self) -> NonNegMatrix<T> {
        self.w.materialize()
    }

    pub fn product(&self) -> Result<NonNegMatrix<T>> {
        self.a.matmul(&self.w.materialize())
    }
}

/// `‖M − A·W‖²_F` with `W` materialized from its compact form.
pub fn objective_of<T: Scalar>(
    m: &DenseMatrix<T>,
    a: &DenseMatrix<T>,
    w: &CompactW<T>,
) -> Result<T> {
    let aw = a.matmul(w.materialize().inner())?;
    Ok(m.sub(&aw)?.frobenius_norm_sq())
}

/// Least-squares scale of `v` fitting `col`: `⟨col, v⟩ / ‖v‖²`, or 0 when `v = 0`.
pub(crate) fn projection_scale<T: Scalar>(col: &[T], v: &[T]) -> T {
    let nv = norm_sq(v);
    if nv == T::zero() {
        T::zero()
    } else {
        (dot(col, v) / nv).max(T::zero())
    }
}

pub fn factorize_single<T: Scalar>(
    m: &NonNegMatrix<T>,
    k: usize,
    config: &KMeansConfig,
) -> Result<OnmfSolution<T>> {
    if k == 0 {
        return Err(OnmfError::InvalidArgument("k must be >= 1".into()));
    }
    let rows = m.rows();
    let pts = normalize_columns(m);
    let mut sol = weighted_kmeans(&pts, k, config)?;
    clamp_nonnegative(&mut sol.centroids);

    let columns = m.columns();
    let mut group = Vec::with_capacity(columns.len());
    let mut theta = Vec::with_capacity(columns.len());
    for (i, col) in columns.iter().enumerate() {
        if pts.weights[i] == T::zero() {
            group.push(0);
            theta.push(T::zero());
        } else {
            let g = sol.assignment[i];
            group.push(g);
            theta.push(projection_scale(col, &sol.centroids[g]));
        }
    }

    let a = NonNegMatrix::new(DenseMatrix::from_columns(rows, &sol.centroids)?)?;
    let w = CompactW::new(k, group, theta)?;
    let objective = objective_of(m, &a, &w)?;
    Ok(OnmfSolution { a, w, objective })
}
