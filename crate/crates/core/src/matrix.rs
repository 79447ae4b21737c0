//! Small dense row-major matrices.
//!
//! Block matrices are at most a few dozen rows, so plain loops are used
//! throughout.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        mul_into(
            &self.data,
            self.rows,
            self.cols,
            &rhs.data,
            rhs.cols,
            &mut out.data,
        );
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute entry of `self·selfᵀ − I`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..self.cols)
                    .map(|k| self.get(i, k) * self.get(j, k))
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j) == if i == j { 1.0 } else { 0.0 }))
    }
}

/// `out = lhs · rhs` where `lhs` is `n×k` and `rhs` is `k×m`, all row-major.
pub(crate) fn mul_into(lhs: &[f64], n: usize, k: usize, rhs: &[f64], m: usize, out: &mut [f64]) {
    debug_assert_eq!(lhs.len(), n * k);
    debug_assert_eq!(rhs.len(), k * m);
    debug_assert_eq!(out.len(), n * m);
    out.fill(0.0);
    for i in 0..n {
        let row = &mut out[i * m..(i + 1) * m];
        for p in 0..k {
            let a = lhs[i * k + p];
            let src = &rhs[p * m..(p + 1) * m];
            for (o, b) in row.iter_mut().zip(src) {
                *o += a * b;
            }
        }
    }
}

/// Householder QR of a square matrix. Returns `Q` and the diagonal of `R`.
#[allow(clippy::needless_range_loop)]
pub(crate) fn householder_qr(a: &Matrix) -> (Matrix, Vec<f64>) {
    let n = a.rows;
    debug_assert_eq!(n, a.cols);
    let mut r = a.clone();
    let mut q = Matrix::identity(n);
    let mut v = vec![0.0; n];

    for k in 0..n.saturating_sub(1) {
        let norm = (k..n).map(|i| r.get(i, k).powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r.get(k, k);
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        for i in k..n {
            v[i] = r.get(i, k);
        }
        v[k] -= alpha;
        let vnorm = (k..n).map(|i| v[i] * v[i]).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for x in v.iter_mut().skip(k) {
            *x /= vnorm;
        }

        // R <- H R on the trailing submatrix
        for c in k..n {
            let dot: f64 = (k..n).map(|i| v[i] * r.get(i, c)).sum();
            for i in k..n {
                let val = r.get(i, c) - 2.0 * v[i] * dot;
                r.set(i, c, val);
            }
        }
        // Q <- Q H
        for row in 0..n {
            let dot: f64 = (k..n).map(|i| q.get(row, i) * v[i]).sum();
            for i in k..n {
                let val = q.get(row, i) - 2.0 * dot * v[i];
                q.set(row, i, val);
            }
        }
    }

    let diag = (0..n).map(|i| r.get(i, i)).collect();
    (q, diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr_reconstructs_input() {
        let a = Matrix::from_row_major(3, 3, vec![2.0, -1.0, 0.5, 4.0, 3.0, -2.0, 1.0, 0.0, 7.0])
            .unwrap();
        let (q, _) = householder_qr(&a);
        assert!(q.orthogonality_error() < 1e-12);
        // R = Qᵀ A must be upper triangular
        let r = q.transpose().matmul(&a).unwrap();
        for i in 0..3 {
            for j in 0..i {
                assert!(r.get(i, j).abs() < 1e-12, "r[{i}][{j}] = {}", r.get(i, j));
            }
        }
        let back = q.matmul(&r).unwrap();
        for (x, y) in back.as_slice().iter().zip(a.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn matmul_rejects_mismatched_shapes() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn transpose_twice_is_identity() {
        let a = Matrix::from_row_major(2, 3, (0..6).map(f64::from).collect()).unwrap();
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().get(2, 1), a.get(1, 2));
    }
}
