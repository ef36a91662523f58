//! Evaluation metrics for factorizations.

use crate::error::{OnmfError, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{dot, norm_sq, Scalar};

fn residual_norm<T: Scalar>(
    target: &DenseMatrix<T>,
    a: &DenseMatrix<T>,
    w: &DenseMatrix<T>,
) -> Result<T> {
    let aw = a.matmul(w)?;
    Ok(target.sub(&aw)?.frobenius_norm_sq().sqrt())
}

/// `‖M_truth − A W‖_F`.
pub fn recovery_error<T: Scalar>(
    m_truth: &DenseMatrix<T>,
    a: &DenseMatrix<T>,
    w: &DenseMatrix<T>,
) -> Result<T> {
    residual_norm(m_truth, a, w)
}

/// `‖M − A W‖_F`.
pub fn reconstruction_error<T: Scalar>(
    m: &DenseMatrix<T>,
    a: &DenseMatrix<T>,
    w: &DenseMatrix<T>,
) -> Result<T> {
    residual_norm(m, a, w)
}

/// `‖M − A W‖²_F / ‖M‖²_F`.
pub fn rsfe<T: Scalar>(m: &DenseMatrix<T>, a: &DenseMatrix<T>, w: &DenseMatrix<T>) -> Result<T> {
    let denom = m.frobenius_norm_sq();
    if denom == T::zero() {
        return Err(OnmfError::InvalidArgument(
            "RSFE is undefined for M = 0".into(),
        ));
    }
    let aw = a.matmul(w)?;
    Ok(m.sub(&aw)?.frobenius_norm_sq() / denom)
}

/// `‖W̃ W̃ᵀ − I‖_F`, where `W̃` keeps the non-zero rows of `W` scaled to unit
/// length. Only exactly-zero rows are dropped.
pub fn non_orthogonality<T: Scalar>(w: &DenseMatrix<T>) -> T {
    let rows: Vec<Vec<T>> = (0..w.rows())
        .map(|r| w.row(r))
        .filter(|r| r.iter().any(|&v| v != T::zero()))
        .map(|r| {
            let norm = norm_sq(r).sqrt();
            r.iter().map(|&v| v / norm).collect()
        })
        .collect();
    let mut acc = T::zero();
    for (i, ri) in rows.iter().enumerate() {
        for (j, rj) in rows.iter().enumerate() {
            let g = if i == j { T::zero() } else { dot(ri, rj) };
            acc = acc + g * g;
        }
    }
    acc.sqrt()
}

/// Mean and standard deviation of `‖M − M_truth‖²_F` for an `m × n` planted
/// instance with exponential noise of mean `σ`: `(2mnσ², √(20mn)σ²)`.
pub fn planted_stat(m: usize, n: usize, noise_level: f64) -> (f64, f64) {
    let mn = (m * n) as f64;
    let s2 = noise_level * noise_level;
    (2.0 * mn * s2, (20.0 * mn).sqrt() * s2)
}

/// Expected `‖M − M_truth‖_F` reference line, `√(2mn)·σ`.
pub fn planted_reference(m: usize, n: usize, noise_level: f64) -> f64 {
    (2.0 * (m * n) as f64).sqrt() * noise_level
}
