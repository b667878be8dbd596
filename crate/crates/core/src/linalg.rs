//! Small dense square matrices (d <= 8) and the Euclidean operator norm.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<R: Real = f64> {
    dim: usize,
    data: Vec<R>,
}

impl<R: Real> Matrix<R> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![R::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[R]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Build from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<R>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[R]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, s: R) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[R]) -> Vec<R> {
        debug_assert_eq!(x.len(), self.dim);
        self.rows()
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> R {
        self.data.iter().fold(R::zero(), |m, v| m.max(v.abs()))
    }

    /// Row-sum norm (the l-infinity operator norm).
    pub fn inf_norm(&self) -> R {
        self.rows()
            .map(|row| row.iter().map(|v| v.abs()).sum::<R>())
            .fold(R::zero(), R::max)
    }

    pub fn frobenius(&self) -> R {
        self.data.iter().map(|&v| v * v).sum::<R>().sqrt()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> R {
        let n = self.dim;
        let mut a = self.clone();
        let mut det = R::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].abs().partial_cmp(&a[(y, col)].abs()).unwrap())
                .unwrap();
            if a[(pivot, col)] == R::zero() {
                return R::zero();
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                det = -det;
            }
            let p = a[(col, col)];
            det = det * p;
            for r in col + 1..n {
                let f = a[(r, col)] / p;
                if f != R::zero() {
                    for c in col..n {
                        let v = a[(col, c)];
                        a[(r, c)] = a[(r, c)] - f * v;
                    }
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].abs().partial_cmp(&a[(y, col)].abs()).unwrap())
                .unwrap();
            if a[(pivot, col)].abs() <= R::epsilon() * scale * R::lit(n as f64) {
                return Err(Error::Singular(format!("zero pivot in column {col}")));
            }
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a[(col, col)];
            for c in 0..n {
                a[(col, c)] = a[(col, c)] / p;
                inv[(col, c)] = inv[(col, c)] / p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == R::zero() {
                    continue;
                }
                for c in 0..n {
                    let (av, iv) = (a[(col, c)], inv[(col, c)]);
                    a[(r, c)] = a[(r, c)] - f * av;
                    inv[(r, c)] = inv[(r, c)] - f * iv;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.dim {
            self.data.swap(i * self.dim + c, j * self.dim + c);
        }
    }

    /// Matrix exponential by scaling and squaring of a truncated Taylor series.
    pub fn exp(&self) -> Self {
        let n = self.dim;
        let norm = self.inf_norm();
        let half = R::lit(0.5);
        let mut squarings = 0u32;
        let mut scaled = self.clone();
        if norm > half {
            squarings = (norm / half).log2().ceil().to_u32().unwrap_or(0);
            scaled = self.scale(R::lit(0.5f64.powi(squarings as i32)));
        }
        let mut result = Self::identity(n);
        let mut term = Self::identity(n);
        for k in 1..=20 {
            term = &term * &scaled;
            term = term.scale(R::one() / R::lit(k as f64));
            result = &result + &term;
            if term.max_abs() <= R::epsilon() * R::lit(1e-3) {
                break;
            }
        }
        for _ in 0..squarings {
            result = &result * &result;
        }
        result
    }
}

impl<R: Real> Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.dim + j]
    }
}

impl<R: Real> IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.dim + j]
    }
}

impl<R: Real> Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: &Matrix<R>) -> Matrix<R> {
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == R::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<R: Real> Add for &Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: &Matrix<R>) -> Matrix<R> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<R: Real> Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: &Matrix<R>) -> Matrix<R> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

const OPNORM_MAX_ITERS: usize = 10_000;

/// Largest singular value of `a`, by power iteration on `AᵀA` to relative
/// tolerance 1e-10 (or the scalar's precision, whichever is coarser).
pub fn euclidean_opnorm<R: Real>(a: &Matrix<R>) -> Result<R> {
    let n = a.dim();
    let scale = a.max_abs();
    if n == 0 || scale == R::zero() {
        return Ok(R::zero());
    }
    // Work on a normalized copy to avoid overflow in the Gram matrix.
    let a = a.scale(R::one() / scale);
    let gram = &a.transpose() * &a;

    // Start from the heaviest column of the Gram matrix; it cannot be
    // orthogonal to the dominant eigenvector unless that column is zero.
    let mut v: Vec<R> = (0..n)
        .map(|j| (0..n).map(|i| gram[(i, j)] * gram[(i, j)]).sum::<R>())
        .enumerate()
        .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
        .map(|(j, _)| (0..n).map(|i| gram[(i, j)]).collect())
        .unwrap();
    // Mix in a fixed dense direction so ties between columns do not matter.
    for (i, x) in v.iter_mut().enumerate() {
        *x = *x + R::lit(1e-3 / (i as f64 + 2.0));
    }
    normalize(&mut v);

    let tol = R::lit(1e-10).max(R::epsilon() * R::lit(16.0));
    let mut estimate = R::zero();
    for _ in 0..OPNORM_MAX_ITERS {
        let mut w = gram.mul_vec(&v);
        let rayleigh: R = w.iter().zip(&v).map(|(&x, &y)| x * y).sum();
        let norm = normalize(&mut w);
        if norm == R::zero() {
            return Ok(R::zero());
        }
        v = w;
        if (rayleigh - estimate).abs() <= tol * rayleigh.abs() {
            return Ok(rayleigh.max(R::zero()).sqrt() * scale);
        }
        estimate = rayleigh;
    }
    Err(Error::NoConvergence(OPNORM_MAX_ITERS))
}

fn normalize<R: Real>(v: &mut [R]) -> R {
    let norm = v.iter().map(|&x| x * x).sum::<R>().sqrt();
    if norm > R::zero() {
        for x in v.iter_mut() {
            *x = *x / norm;
        }
    }
    norm
}
