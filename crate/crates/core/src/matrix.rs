//! Dense row-major matrices, column normalization, angles and the compact
//! representation of a factor with orthogonal non-negative rows.

use std::ops::Deref;

use crate::error::{OnmfError, Result};
use crate::scalar::{dot, norm_sq, Scalar};

/// Real `rows × cols` matrix stored row-major. All entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(OnmfError::Shape(format!(
                "{} values cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(OnmfError::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(OnmfError::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    /// Builds a `rows × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[T]>>(rows: usize, columns: &[C]) -> Result<Self> {
        let cols = columns.len();
        let mut out = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != rows {
                return Err(OnmfError::Shape(format!(
                    "column {j} has {} entries, expected {rows}",
                    c.len()
                )));
            }
            for (i, &v) in c.iter().enumerate() {
                out.data[i * cols + j] = v;
            }
        }
        if let Some(pos) = out.data.iter().position(|v| !v.is_finite()) {
            return Err(OnmfError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(out)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    /// Panics on a non-finite value, which would break the type invariant.
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        assert!(v.is_finite(), "non-finite matrix entry");
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        let mut out = vec![Vec::with_capacity(self.rows); self.cols];
        for r in 0..self.rows {
            for (c, col) in out.iter_mut().enumerate() {
                col.push(self.get(r, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(OnmfError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (p, &a) in self.row(i).iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(p)) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(OnmfError::Shape(format!(
                "cannot subtract {}x{} from {}x{}",
                rhs.rows, rhs.cols, self.rows, self.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, alpha: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * alpha).collect(),
        }
    }

    pub fn frobenius_norm_sq(&self) -> T {
        frobenius_norm_sq(self)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= T::zero())
    }
}

/// Sum of squared entries.
pub fn frobenius_norm_sq<T: Scalar>(m: &DenseMatrix<T>) -> T {
    norm_sq(m.data())
}

/// A [`DenseMatrix`] whose entries are all `>= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonNegMatrix<T>(DenseMatrix<T>);

impl<T: Scalar> NonNegMatrix<T> {
    pub fn new(inner: DenseMatrix<T>) -> Result<Self> {
        if let Some(pos) = inner.data().iter().position(|&v| v < T::zero()) {
            let cols = inner.cols();
            return Err(OnmfError::Negative {
                row: pos / cols,
                col: pos % cols,
                value: inner.data()[pos].as_f64(),
            });
        }
        Ok(Self(inner))
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        Self::new(DenseMatrix::from_rows(rows)?)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DenseMatrix::zeros(rows, cols))
    }

    pub fn inner(&self) -> &DenseMatrix<T> {
        &self.0
    }

    pub fn into_inner(self) -> DenseMatrix<T> {
        self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// Product of two non-negative matrices, which is again non-negative.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        Ok(Self(self.0.matmul(&rhs.0)?))
    }
}

impl<T> Deref for NonNegMatrix<T> {
    type Target = DenseMatrix<T>;

    fn deref(&self) -> &DenseMatrix<T> {
        &self.0
    }
}

/// Normalized columns `m̄_i` together with their weights `ℓ_i = ‖m_i‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPointSet<T> {
    pub points: Vec<Vec<T>>,
    pub weights: Vec<T>,
}

impl<T: Scalar> WeightedPointSet<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().copied().sum()
    }
}

/// Splits every column into its direction and squared length. Zero columns map
/// to the zero point with zero weight.
pub fn normalize_columns<T: Scalar>(m: &NonNegMatrix<T>) -> WeightedPointSet<T> {
    let mut points = m.columns();
    let weights = points
        .iter_mut()
        .map(|col| {
            let w = norm_sq(col);
            if w > T::zero() {
                let len = w.sqrt();
                col.iter_mut().for_each(|v| *v = *v / len);
            }
            w
        })
        .collect();
    WeightedPointSet { points, weights }
}

/// Cosine of the angle between two non-zero vectors, clamped to `[0, 1]`.
pub fn cosine<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    let nx = norm_sq(x);
    let ny = norm_sq(y);
    if nx == T::zero() || ny == T::zero() {
        return Err(OnmfError::ZeroVector);
    }
    let c = dot(x, y) / (nx.sqrt() * ny.sqrt());
    Ok(c.max(T::zero()).min(T::one()))
}

/// Angle in `[0, π/2]` between two non-zero non-negative vectors.
pub fn angle<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    Ok(cosine(x, y)?.acos())
}

/// `W` with at most one non-zero per column: column `i` is `theta[i] · e_{group[i]}`.
/// Group indices are zero-based.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactW<T> {
    k: usize,
    group: Vec<usize>,
    theta: Vec<T>,
}

impl<T: Scalar> CompactW<T> {
    pub fn new(k: usize, group: Vec<usize>, theta: Vec<T>) -> Result<Self> {
        if group.len() != theta.len() {
            return Err(OnmfError::Shape(format!(
                "{} group indices but {} scales",
                group.len(),
                theta.len()
            )));
        }
        if let Some(&index) = group.iter().find(|&&g| g >= k) {
            return Err(OnmfError::IndexOutOfRange { index, k });
        }
        if let Some(pos) = theta.iter().position(|t| !t.is_finite() || *t < T::zero()) {
            return Err(OnmfError::InvalidArgument(format!(
                "scale {pos} is {} (must be finite and >= 0)",
                theta[pos]
            )));
        }
        Ok(Self { k, group, theta })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.group.len()
    }

    pub fn group(&self) -> &[usize] {
        &self.group
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    pub fn materialize(&self) -> NonNegMatrix<T> {
        let n = self.n();
        let mut w = DenseMatrix::zeros(self.k, n);
        for (i, (&g, &t)) in self.group.iter().zip(&self.theta).enumerate() {
            w.set(g, i, t);
        }
        NonNegMatrix(w)
    }

    /// Reads a `k × n` matrix with at most one non-zero per column. Empty
    /// columns are placed in group 0 with scale 0.
    pub fn from_dense(w: &NonNegMatrix<T>) -> Result<Self> {
        let (k, n) = w.shape();
        let mut group = vec![0; n];
        let mut theta = vec![T::zero(); n];
        for i in 0..n {
            for s in 0..k {
                let v = w.get(s, i);
                if v != T::zero() {
                    if theta[i] != T::zero() {
                        return Err(OnmfError::InvalidArgument(format!(
                            "column {i} has more than one non-zero entry"
                        )));
                    }
                    group[i] = s;
                    theta[i] = v;
                }
            }
        }
        Self::new(k, group, theta)
    }
}

/// Realizes a compact `W` as a dense `k × n` matrix; `n` must match the
/// number of encoded columns.
pub fn materialize_w<T: Scalar>(w: &CompactW<T>, n: usize) -> Result<NonNegMatrix<T>> {
    if w.n() != n {
        return Err(OnmfError::Shape(format!(
            "compact W encodes {} columns, {n} requested",
            w.n()
        )));
    }
    Ok(w.materialize())
}
