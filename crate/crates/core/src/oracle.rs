//! Exhaustive-search reference solvers for tiny instances.
//!
//! These enumerate every feasible assignment and are exponential in the
//! instance size; they exist to check the approximation algorithms and share
//! no code with them beyond the matrix container.

use std::collections::HashMap;

use crate::bcc::BipartiteLabeling;
use crate::error::{OnmfError, Result};
use crate::kmeans::KMeansSolution;
use crate::matrix::{CompactW, DenseMatrix, NonNegMatrix, WeightedPointSet};
use crate::scalar::Scalar;
use crate::single::{objective_of, OnmfSolution};

const POWER_MAX_ITERS: usize = 1000;
const POWER_REL_TOL: f64 = 1e-12;

/// Advances `labels` as a base-`k` counter; returns false after the last one.
fn next_assignment(labels: &mut [usize], k: usize) -> bool {
    for l in labels.iter_mut() {
        *l += 1;
        if *l < k {
            return true;
        }
        *l = 0;
    }
    false
}

fn checked_pow(base: usize, exp: usize, limit: u128, what: &str) -> Result<()> {
    let total = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if total > limit {
        return Err(OnmfError::TooLarge(format!(
            "{what}: {base}^{exp} assignments exceeds {limit}"
        )));
    }
    Ok(())
}

/// Exact weighted k-means optimum by enumerating all `kⁿ` assignments, with
/// each cluster's centroid at its weighted mean. Empty clusters get the zero
/// centroid.
pub fn brute_force_kmeans<T: Scalar>(
    pts: &WeightedPointSet<T>,
    k: usize,
) -> Result<KMeansSolution<T>> {
    if k == 0 {
        return Err(OnmfError::InvalidArgument("k must be >= 1".into()));
    }
    let n = pts.len();
    checked_pow(k, n, 10_000_000, "brute-force k-means")?;
    let dim = pts.dim();

    let mut labels = vec![0; n];
    let mut best: Option<(T, Vec<usize>, Vec<Vec<T>>)> = None;
    loop {
        let mut centroids = vec![vec![T::zero(); dim]; k];
        let mut mass = vec![T::zero(); k];
        for ((p, &w), &j) in pts.points.iter().zip(&pts.weights).zip(&labels) {
            mass[j] = mass[j] + w;
            for (c, &x) in centroids[j].iter_mut().zip(p) {
                *c = *c + w * x;
            }
        }
        for (c, &q) in centroids.iter_mut().zip(&mass) {
            if q > T::zero() {
                c.iter_mut().for_each(|v| *v = *v / q);
            } else {
                c.iter_mut().for_each(|v| *v = T::zero());
            }
        }
        let mut cost = T::zero();
        for ((p, &w), &j) in pts.points.iter().zip(&pts.weights).zip(&labels) {
            let d: T = p
                .iter()
                .zip(&centroids[j])
                .map(|(&x, &c)| (x - c) * (x - c))
                .sum();
            cost = cost + w * d;
        }
        if best.as_ref().is_none_or(|(b, _, _)| cost < *b) {
            best = Some((cost, labels.clone(), centroids));
        }
        if !next_assignment(&mut labels, k) {
            break;
        }
    }
    let (cost, assignment, centroids) = best.expect("at least one assignment");
    Ok(KMeansSolution {
        centroids,
        assignment,
        cost,
        iterations: 0,
        cost_history: vec![cost],
    })
}

/// Best rank-one approximation of a non-negative block by power iteration on
/// `B Bᵀ`, keeping the iterate non-negative. Returns the squared error
/// `‖B‖² − ‖Bᵀu‖²` and the unit left vector `u`.
pub fn best_rank_one<T: Scalar>(block: &DenseMatrix<T>) -> (T, Vec<T>) {
    let (r, c) = block.shape();
    let total = block.frobenius_norm_sq();
    if r == 0 || c == 0 || total == T::zero() {
        let u = if r == 0 {
            vec![]
        } else {
            vec![T::one() / T::of(r as f64).sqrt(); r]
        };
        return (total, u);
    }
    let mut gram = vec![T::zero(); r * r];
    for i in 0..r {
        for j in i..r {
            let v: T = block
                .row(i)
                .iter()
                .zip(block.row(j))
                .map(|(&a, &b)| a * b)
                .sum();
            gram[i * r + j] = v;
            gram[j * r + i] = v;
        }
    }
    let mut u = vec![T::one() / T::of(r as f64).sqrt(); r];
    let mut lambda = T::zero();
    for _ in 0..POWER_MAX_ITERS {
        let mut next: Vec<T> = (0..r)
            .map(|i| {
                let s: T = (0..r).map(|j| gram[i * r + j] * u[j]).sum();
                s.abs()
            })
            .collect();
        let norm: T = next.iter().map(|&v| v * v).sum::<T>().sqrt();
        if norm == T::zero() {
            break;
        }
        next.iter_mut().for_each(|v| *v = *v / norm);
        let rayleigh: T = (0..r)
            .map(|i| next[i] * (0..r).map(|j| gram[i * r + j] * next[j]).sum::<T>())
            .sum();
        u = next;
        let done = (rayleigh - lambda).abs() <= T::of(POWER_REL_TOL) * rayleigh;
        lambda = rayleigh;
        if done {
            break;
        }
    }
    // ‖Bᵀu‖² is the captured energy for this particular u.
    let captured: T = (0..c)
        .map(|j| {
            let s: T = (0..r).map(|i| block.get(i, j) * u[i]).sum();
            s * s
        })
        .sum();
    ((total - captured).max(T::zero()), u)
}

fn submatrix<T: Scalar>(m: &DenseMatrix<T>, rows: &[usize], cols: &[usize]) -> DenseMatrix<T> {
    let mut out = DenseMatrix::zeros(rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            out.set(i, j, m.get(r, c));
        }
    }
    out
}

fn mask_members(mask: u64, len: usize) -> Vec<usize> {
    (0..len).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Exact single-factor optimum: every column is assigned to one of `k`
/// groups and each group's submatrix gets its best non-negative rank-one fit.
pub fn brute_force_single<T: Scalar>(m: &NonNegMatrix<T>, k: usize) -> Result<OnmfSolution<T>> {
    if k == 0 {
        return Err(OnmfError::InvalidArgument("k must be >= 1".into()));
    }
    let (rows, n) = m.shape();
    checked_pow(k, n, 1_000_000, "brute-force single-factor ONMF")?;
    if n > 63 {
        return Err(OnmfError::TooLarge(format!("{n} columns")));
    }
    let all_rows: Vec<usize> = (0..rows).collect();
    let mut memo: HashMap<u64, (T, Vec<T>)> = HashMap::new();
    let mut fit = |mask: u64| -> (T, Vec<T>) {
        memo.entry(mask)
            .or_insert_with(|| best_rank_one(&submatrix(m, &all_rows, &mask_members(mask, n))))
            .clone()
    };

    let mut labels = vec![0; n];
    let mut best: Option<(T, Vec<usize>)> = None;
    loop {
        let mut masks = vec![0u64; k];
        for (i, &g) in labels.iter().enumerate() {
            masks[g] |= 1 << i;
        }
        let err: T = masks.iter().map(|&mask| fit(mask).0).sum();
        if best.as_ref().is_none_or(|(b, _)| err < *b) {
            best = Some((err, labels.clone()));
        }
        if !next_assignment(&mut labels, k) {
            break;
        }
    }
    let (_, group) = best.expect("at least one assignment");

    let mut columns = vec![vec![T::zero(); rows]; k];
    let mut masks = vec![0u64; k];
    for (i, &g) in group.iter().enumerate() {
        masks[g] |= 1 << i;
    }
    for (s, &mask) in masks.iter().enumerate() {
        if mask != 0 {
            columns[s] = fit(mask).1;
        }
    }
    let theta: Vec<T> = group
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let t: T = (0..rows).map(|r| m.get(r, i) * columns[g][r]).sum();
            t.max(T::zero())
        })
        .collect();
    let a = NonNegMatrix::new(DenseMatrix::from_columns(rows, &columns)?)?;
    let w = CompactW::new(k, group, theta)?;
    let objective = objective_of(m, &a, &w)?;
    Ok(OnmfSolution { a, w, objective })
}

/// Enumerates labelings of `n` items with labels `0..=t` where 0 means
/// "unused" and block labels appear in order of first use (t ≤ max_blocks).
fn for_each_partial_partition(n: usize, max_blocks: usize, f: &mut impl FnMut(&[usize], usize)) {
    fn rec(
        labels: &mut Vec<usize>,
        n: usize,
        used: usize,
        max_blocks: usize,
        f: &mut impl FnMut(&[usize], usize),
    ) {
        if labels.len() == n {
            f(labels, used);
            return;
        }
        for l in 0..=used {
            labels.push(l);
            rec(labels, n, used, max_blocks, f);
            labels.pop();
        }
        if used < max_blocks {
            labels.push(used + 1);
            rec(labels, n, used + 1, max_blocks, f);
            labels.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, 0, max_blocks, f);
}

/// Exact double-factor optimum: at most `k` blocks with disjoint row sets and
/// disjoint column sets, each fitted by its best rank-one matrix, everything
/// outside the blocks counted as error. Limited to `m, n ≤ 5`.
pub fn brute_force_double<T: Scalar>(m: &NonNegMatrix<T>, k: usize) -> Result<T> {
    let (rows, cols) = m.shape();
    if rows > 5 || cols > 5 {
        return Err(OnmfError::TooLarge(format!(
            "brute-force double-factor ONMF limited to 5x5, got {rows}x{cols}"
        )));
    }
    let total = m.frobenius_norm_sq();
    let mut captured = vec![T::zero(); (1 << rows) * (1 << cols)];
    for rmask in 0..1u64 << rows {
        for cmask in 0..1u64 << cols {
            let block = submatrix(m, &mask_members(rmask, rows), &mask_members(cmask, cols));
            let (err, _) = best_rank_one(&block);
            captured[(rmask as usize) << cols | cmask as usize] = block.frobenius_norm_sq() - err;
        }
    }

    let mut best = T::zero();
    for_each_partial_partition(cols, k.min(cols), &mut |col_labels, blocks| {
        if blocks == 0 {
            return;
        }
        let mut cmasks = vec![0usize; blocks + 1];
        for (j, &l) in col_labels.iter().enumerate() {
            cmasks[l] |= 1 << j;
        }
        let mut row_labels = vec![0; rows];
        loop {
            let mut rmasks = vec![0usize; blocks + 1];
            for (i, &l) in row_labels.iter().enumerate() {
                rmasks[l] |= 1 << i;
            }
            let value: T = (1..=blocks)
                .map(|s| captured[rmasks[s] << cols | cmasks[s]])
                .sum();
            if value > best {
                best = value;
            }
            if !next_assignment(&mut row_labels, blocks + 1) {
                break;
            }
        }
    });
    Ok((total - best).max(T::zero()))
}

/// Minimum number of disagreements over every partition of the vertex set.
/// Limited to `m + n ≤ 10`.
pub fn brute_force_bcc(g: &BipartiteLabeling) -> Result<usize> {
    let (m, n) = (g.m(), g.n());
    let total = m + n;
    if total > 10 {
        return Err(OnmfError::TooLarge(format!(
            "brute-force correlation clustering limited to 10 vertices, got {total}"
        )));
    }
    let mut best = usize::MAX;
    // Restricted growth strings over all vertices: rows first, then columns.
    let mut labels = vec![0usize; total];
    fn rec(
        labels: &mut [usize],
        pos: usize,
        max_label: usize,
        g: &BipartiteLabeling,
        best: &mut usize,
    ) {
        if pos == labels.len() {
            let m = g.m();
            let mut count = 0;
            for u in 0..m {
                for v in 0..g.n() {
                    let together = labels[u] == labels[m + v];
                    if together != g.is_plus(u, v) {
                        count += 1;
                    }
                }
            }
            *best = (*best).min(count);
            return;
        }
        for l in 0..=max_label + 1 {
            labels[pos] = l;
            rec(labels, pos + 1, max_label.max(l), g, best);
        }
    }
    if total == 0 {
        return Ok(0);
    }
    labels[0] = 0;
    rec(&mut labels, 1, 0, g, &mut best);
    Ok(best)
}
