//! Minimal dense linear algebra and activation kernels.
//!
//! Everything is `f64` and row-major. These are deliberately plain loops:
//! the models built on top are small enough that clarity beats BLAS.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Shape mismatch between operands, naming both shapes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("shape mismatch: matrix is {rows}x{cols} but vector has length {len}")]
    MatVec { rows: usize, cols: usize, len: usize },
    #[error("shape mismatch: expected vector of length {expected}, got {actual}")]
    VecLen { expected: usize, actual: usize },
    #[error("matrix data length {data_len} does not match {rows}x{cols}")]
    MatrixData { rows: usize, cols: usize, data_len: usize },
}

/// Dense vector of 64-bit floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn zeros(len: usize) -> Self {
        Vector(vec![0.0; len])
    }

    pub fn from_slice(v: &[f64]) -> Self {
        Vector(v.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// Dot product. Panics on length mismatch (internal use is pre-checked).
    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.len(), other.len(), "dot: length mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Elementwise product.
    pub fn hadamard(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "hadamard: length mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "add: length mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self += scale * other`.
    pub fn axpy(&mut self, scale: f64, other: &Vector) {
        assert_eq!(self.len(), other.len(), "axpy: length mismatch");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += scale * b;
        }
    }

    pub fn scale_in_place(&mut self, s: f64) {
        for v in &mut self.0 {
            *v *= s;
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vector {
        Vector(self.0.iter().map(|&v| f(v)).collect())
    }

    /// Sum of squared entries.
    pub fn sq_norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn all_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

/// Dense row-major matrix of 64-bit floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, ShapeError> {
        if data.len() != rows * cols {
            return Err(ShapeError::MatrixData { rows, cols, data_len: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Build from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self, ShapeError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(ShapeError::MatrixData { rows: r, cols: c, data_len: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self += scale * (u ⊗ v)` — rank-1 accumulation used by backprop.
    pub fn add_outer(&mut self, scale: f64, u: &Vector, v: &Vector) {
        assert_eq!(u.len(), self.rows, "add_outer: row mismatch");
        assert_eq!(v.len(), self.cols, "add_outer: col mismatch");
        for i in 0..self.rows {
            let ui = scale * u.0[i];
            let row = &mut self.data[i * self.cols..(i + 1) * self.cols];
            for (r, vj) in row.iter_mut().zip(&v.0) {
                *r += ui * vj;
            }
        }
    }

    pub fn axpy(&mut self, scale: f64, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "axpy: shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
    }

    pub fn sq_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }
}

/// Matrix-vector product `w · v`.
pub fn matvec(w: &Matrix, v: &Vector) -> Result<Vector, ShapeError> {
    if w.cols != v.len() {
        return Err(ShapeError::MatVec { rows: w.rows, cols: w.cols, len: v.len() });
    }
    let mut out = Vec::with_capacity(w.rows);
    for i in 0..w.rows {
        out.push(w.row(i).iter().zip(&v.0).map(|(a, b)| a * b).sum());
    }
    Ok(Vector(out))
}

/// Transposed product `wᵀ · v`, accumulated into `out`.
pub(crate) fn matvec_t_acc(w: &Matrix, v: &Vector, out: &mut Vector) {
    assert_eq!(w.rows, v.len(), "matvec_t_acc: row mismatch");
    assert_eq!(w.cols, out.len(), "matvec_t_acc: col mismatch");
    for i in 0..w.rows {
        let vi = v.0[i];
        for (o, wij) in out.0.iter_mut().zip(w.row(i)) {
            *o += wij * vi;
        }
    }
}

/// Concatenate `[h, x]` — h first. This ordering is fixed project-wide;
/// serialized weight layouts depend on it.
pub fn concat(h: &Vector, x: &Vector) -> Vector {
    let mut out = Vec::with_capacity(h.len() + x.len());
    out.extend_from_slice(&h.0);
    out.extend_from_slice(&x.0);
    Vector(out)
}

/// Elementwise activation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Sigmoid,
    Tanh,
    Relu,
}

/// Numerically stable logistic sigmoid: branches on the sign of `z` so
/// that exp never overflows.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub fn relu(z: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        0.0
    }
}

/// Apply an activation elementwise.
pub fn activation(kind: Activation, v: &Vector) -> Vector {
    match kind {
        Activation::Sigmoid => v.map(sigmoid),
        Activation::Tanh => v.map(f64::tanh),
        Activation::Relu => v.map(relu),
    }
}

/// Solve `a · x = b` by Gaussian elimination with partial pivoting.
/// Consumes copies; intended for the small systems that show up in
/// least-squares fits. Returns None if the system is singular.
pub(crate) fn solve_linear(a: &Matrix, b: &Vector) -> Option<Vector> {
    assert_eq!(a.rows, a.cols, "solve_linear: matrix must be square");
    assert_eq!(a.rows, b.len(), "solve_linear: rhs length mismatch");
    let n = a.rows;
    let mut m = a.data.clone();
    let mut rhs = b.0.clone();

    for col in 0..n {
        // pivot
        let mut pivot = col;
        let mut best = m[col * n + col].abs();
        for r in col + 1..n {
            let v = m[r * n + col].abs();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best < 1e-12 {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                m.swap(col * n + j, pivot * n + j);
            }
            rhs.swap(col, pivot);
        }
        let diag = m[col * n + col];
        for r in col + 1..n {
            let factor = m[r * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                m[r * n + j] -= factor * m[col * n + j];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    // back substitution
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for j in row + 1..n {
            acc -= m[row * n + j] * x[j];
        }
        x[row] = acc / m[row * n + row];
    }
    Some(Vector(x))
}
