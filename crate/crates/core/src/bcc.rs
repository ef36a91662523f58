//! Bipartite correlation clustering through double-factor ONMF.
//!
//! A `±`-labeled complete bipartite graph is a binary matrix. Its
//! large-inner-dimension double-orthogonal factorization is a set of
//! disjoint rank-one blocks; each block is rounded to an all-ones block
//! (losing at most a factor 8 inside the block) and every non-empty block
//! becomes a cluster.

use crate::double::factorize_double_large_k;
use crate::error::{OnmfError, Result};
use crate::matrix::{DenseMatrix, NonNegMatrix};
use crate::scalar::Scalar;

/// Complete bipartite graph between `m` row vertices `u_i` and `n` column
/// vertices `v_j`; `true` is a "+" edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteLabeling {
    m: usize,
    n: usize,
    plus: Vec<bool>,
}

impl BipartiteLabeling {
    pub fn new(m: usize, n: usize, plus: Vec<bool>) -> Result<Self> {
        if plus.len() != m * n {
            return Err(OnmfError::Shape(format!(
                "{} labels for a {m}x{n} bipartite graph",
                plus.len()
            )));
        }
        Ok(Self { m, n, plus })
    }

    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(OnmfError::Shape("ragged labeling".into()));
        }
        Self::new(rows.len(), n, rows.concat())
    }

    /// Reads a 0/1 matrix; any other value is an error.
    pub fn from_binary<T: Scalar>(m: &DenseMatrix<T>) -> Result<Self> {
        let mut plus = Vec::with_capacity(m.rows() * m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if v == T::one() {
                    plus.push(true);
                } else if v == T::zero() {
                    plus.push(false);
                } else {
                    return Err(OnmfError::NotBinary { row: r, col: c });
                }
            }
        }
        Self::new(m.rows(), m.cols(), plus)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_plus(&self, u: usize, v: usize) -> bool {
        self.plus[u * self.n + v]
    }

    pub fn to_matrix<T: Scalar>(&self) -> NonNegMatrix<T> {
        let data = self
            .plus
            .iter()
            .map(|&p| if p { T::one() } else { T::zero() })
            .collect();
        NonNegMatrix::new(DenseMatrix::new(self.m, self.n, data).expect("sizes match"))
            .expect("binary entries are non-negative")
    }
}

/// Parses lines `u_index,v_index,{+,-}` with zero-based indices. Blank lines
/// and lines starting with `#` are ignored. The vertex counts are one past
/// the largest index on each side. Unlisted pairs are an error unless
/// `complete` is set, in which case they are "-".
pub fn parse_edge_list(text: &str, complete: bool) -> Result<BipartiteLabeling> {
    let mut edges = Vec::new();
    let (mut m, mut n) = (0, 0);
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| OnmfError::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(err(format!("expected `u,v,+` or `u,v,-`, got {line:?}")));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| err(format!("bad row vertex index {:?}", fields[0])))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| err(format!("bad column vertex index {:?}", fields[1])))?;
        let plus = match fields[2] {
            "+" => true,
            "-" => false,
            other => return Err(err(format!("label must be + or -, got {other:?}"))),
        };
        m = m.max(u + 1);
        n = n.max(v + 1);
        edges.push((line_no, u, v, plus));
    }

    let mut labels: Vec<Option<bool>> = vec![None; m * n];
    for (line, u, v, plus) in edges {
        let slot = &mut labels[u * n + v];
        match *slot {
            Some(prev) if prev != plus => {
                return Err(OnmfError::Parse {
                    line,
                    msg: format!("conflicting label for pair ({u}, {v})"),
                })
            }
            _ => *slot = Some(plus),
        }
    }
    let missing = labels.iter().filter(|l| l.is_none()).count();
    if missing > 0 && !complete {
        return Err(OnmfError::IncompleteGraph { missing });
    }
    BipartiteLabeling::new(
        m,
        n,
        labels.into_iter().map(|l| l.unwrap_or(false)).collect(),
    )
}

/// Cluster id per vertex; 0 means unclustered (a singleton).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Clustering {
    pub fn singletons(m: usize, n: usize) -> Self {
        Self {
            rows: vec![0; m],
            cols: vec![0; n],
        }
    }

    pub fn num_clusters(&self) -> usize {
        self.rows
            .iter()
            .chain(&self.cols)
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// `side,index,cluster` lines, rows (`u`) first.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("side,index,cluster\n");
        for (i, c) in self.rows.iter().enumerate() {
            out.push_str(&format!("u,{i},{c}\n"));
        }
        for (j, c) in self.cols.iter().enumerate() {
            out.push_str(&format!("v,{j},{c}\n"));
        }
        out
    }
}

/// "+" edges not inside a common cluster plus "-" edges inside one.
pub fn disagreements(g: &BipartiteLabeling, clustering: &Clustering) -> usize {
    let mut count = 0;
    for u in 0..g.m() {
        for v in 0..g.n() {
            let cu = clustering.rows[u];
            let together = cu != 0 && cu == clustering.cols[v];
            if together != g.is_plus(u, v) {
                count += 1;
            }
        }
    }
    count
}

/// Rounds a non-negative rank-one fit `a wᵀ` of a binary block to a binary
/// `â ŵᵀ` with at most 8 times the squared error.
///
/// `â` is the block column `m_{i*}` minimizing `‖m_i / w_i − a‖²` over
/// columns with `w_i > 0`; `ŵ_i` is 1 when `w_i > 0` and column `i` covers at
/// least half of the support of `â`. Ties go to the smallest index.
pub fn round_block<T: Scalar>(
    block: &DenseMatrix<T>,
    a: &[T],
    w: &[T],
) -> Result<(Vec<bool>, Vec<bool>)> {
    let (rows, cols) = block.shape();
    if a.len() != rows || w.len() != cols {
        return Err(OnmfError::Shape(format!(
            "block is {rows}x{cols} but a has {} and w has {} entries",
            a.len(),
            w.len()
        )));
    }
    for r in 0..rows {
        for c in 0..cols {
            let v = block.get(r, c);
            if v != T::zero() && v != T::one() {
                return Err(OnmfError::NotBinary { row: r, col: c });
            }
        }
    }
    if a.iter().chain(w).any(|&v| v < T::zero() || !v.is_finite()) {
        return Err(OnmfError::InvalidArgument(
            "rounding needs finite non-negative a and w".into(),
        ));
    }

    let mut best: Option<(usize, T)> = None;
    for (i, &wi) in w.iter().enumerate() {
        if wi > T::zero() {
            let d: T = a
                .iter()
                .enumerate()
                .map(|(r, &ar)| {
                    let diff = block.get(r, i) / wi - ar;
                    diff * diff
                })
                .sum();
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((i, d));
            }
        }
    }
    let Some((star, _)) = best else {
        return Ok((vec![false; rows], vec![false; cols]));
    };

    let a_hat: Vec<bool> = (0..rows).map(|r| block.get(r, star) == T::one()).collect();
    let support = a_hat.iter().filter(|&&b| b).count();
    let w_hat = (0..cols)
        .map(|i| {
            if w[i] == T::zero() {
                return false;
            }
            let covered = (0..rows)
                .filter(|&r| a_hat[r] && block.get(r, i) == T::one())
                .count();
            2 * covered >= support
        })
        .collect();
    Ok((a_hat, w_hat))
}

/// Squared error of a binary rank-one block against `block`.
pub fn binary_block_error<T: Scalar>(block: &DenseMatrix<T>, a_hat: &[bool], w_hat: &[bool]) -> T {
    let mut err = T::zero();
    for (r, &ar) in a_hat.iter().enumerate() {
        for (c, &wc) in w_hat.iter().enumerate() {
            let fit = if ar && wc { T::one() } else { T::zero() };
            let d = block.get(r, c) - fit;
            err = err + d * d;
        }
    }
    err
}

#[derive(Debug, Clone)]
pub struct BccOutcome<T> {
    pub clustering: Clustering,
    pub disagreements: usize,
    /// `‖M − A W‖²` of the fractional factorization before rounding.
    pub fractional_error: T,
    /// Binary factors whose blocks are the clusters.
    pub a_bin: NonNegMatrix<T>,
    pub w_bin: NonNegMatrix<T>,
}

pub fn bcc_cluster(g: &BipartiteLabeling) -> Result<BccOutcome<f64>> {
    bcc_cluster_with::<f64>(g)
}

pub fn bcc_cluster_with<T: Scalar>(g: &BipartiteLabeling) -> Result<BccOutcome<T>> {
    let (m, n) = (g.m(), g.n());
    if m == 0 || n == 0 {
        return Ok(BccOutcome {
            clustering: Clustering::singletons(m, n),
            disagreements: 0,
            fractional_error: T::zero(),
            a_bin: NonNegMatrix::zeros(m, 0),
            w_bin: NonNegMatrix::zeros(0, n),
        });
    }
    let mat = g.to_matrix::<T>();
    let frac = factorize_double_large_k(&mat)?;
    let k = frac.k();

    let mut a_bin = DenseMatrix::zeros(m, k);
    let mut w_bin = DenseMatrix::zeros(k, n);
    let mut clustering = Clustering::singletons(m, n);
    let mut next_id = 1;
    for s in 0..k {
        let rows: Vec<usize> = (0..m).filter(|&r| frac.a.get(r, s) > T::zero()).collect();
        let cols: Vec<usize> = (0..n)
            .filter(|&i| frac.w.group()[i] == s && frac.w.theta()[i] > T::zero())
            .collect();
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let mut block = DenseMatrix::zeros(rows.len(), cols.len());
        for (bi, &r) in rows.iter().enumerate() {
            for (bj, &c) in cols.iter().enumerate() {
                block.set(bi, bj, mat.get(r, c));
            }
        }
        let a_s: Vec<T> = rows.iter().map(|&r| frac.a.get(r, s)).collect();
        let w_s: Vec<T> = cols.iter().map(|&c| frac.w.theta()[c]).collect();
        let (a_hat, w_hat) = round_block(&block, &a_s, &w_s)?;
        if !a_hat.iter().any(|&b| b) || !w_hat.iter().any(|&b| b) {
            continue;
        }
        for (bi, &r) in rows.iter().enumerate() {
            if a_hat[bi] {
                a_bin.set(r, s, T::one());
                clustering.rows[r] = next_id;
            }
        }
        for (bj, &c) in cols.iter().enumerate() {
            if w_hat[bj] {
                w_bin.set(s, c, T::one());
                clustering.cols[c] = next_id;
            }
        }
        next_id += 1;
    }

    let disagreements = disagreements(g, &clustering);
    Ok(BccOutcome {
        clustering,
        disagreements,
        fractional_error: frac.objective,
        a_bin: NonNegMatrix::new(a_bin)?,
        w_bin: NonNegMatrix::new(w_bin)?,
    })
}
