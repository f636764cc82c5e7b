//! Small dense linear algebra for affine operators.

use crate::error::{Error, Result};

/// Dense row-major square or rectangular matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("matrix must be non-empty".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

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
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// `M + M^T`.
    pub fn symmetric_sum(&self) -> Self {
        let mut s = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.set(i, j, self.get(i, j) + self.get(j, i));
            }
        }
        s
    }

    /// `M^T M`.
    pub fn gram(&self) -> Self {
        self.transpose().mul(self)
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending.
pub fn symmetric_eigenvalues(m: &Matrix) -> Vec<f64> {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let scale: f64 = a.data.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Smallest eigenvalue of `M + M^T`; nonnegative iff `z -> Mz` is monotone.
pub fn min_symmetric_eigenvalue(m: &Matrix) -> f64 {
    symmetric_eigenvalues(&m.symmetric_sum())[0]
}

/// Spectral norm through a full eigen-decomposition of `M^T M`.
pub fn spectral_norm_exact(m: &Matrix) -> f64 {
    let eig = symmetric_eigenvalues(&m.gram());
    eig.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Result of [`power_iteration_norm`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerIteration {
    pub norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Spectral norm by power iteration on `M^T M`. Stops when the relative
/// change of the eigenvalue estimate drops below `tol`.
pub fn power_iteration_norm(m: &Matrix, tol: f64, max_iter: usize) -> PowerIteration {
    let n = m.cols();
    let mt = m.transpose();
    // Fixed, dense, non-symmetric start vector so no eigenvector of a
    // structured matrix is orthogonal to it.
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i as f64 + 1.0) * 0.754_877_666).fract())
        .collect();
    normalize(&mut v);
    let mut estimate = 0.0;
    for k in 1..=max_iter {
        let w = mt.mul_vec(&m.mul_vec(&v));
        let lambda: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
        let wn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if wn == 0.0 {
            return PowerIteration {
                norm: 0.0,
                iterations: k,
                converged: true,
            };
        }
        v = w.into_iter().map(|x| x / wn).collect();
        if (lambda - estimate).abs() <= tol * lambda.abs() {
            return PowerIteration {
                norm: lambda.max(0.0).sqrt(),
                iterations: k,
                converged: true,
            };
        }
        estimate = lambda;
    }
    PowerIteration {
        norm: estimate.max(0.0).sqrt(),
        iterations: max_iter,
        converged: false,
    }
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonal_and_2x2() {
        let m = Matrix::from_row_major(2, 2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn power_iteration_diagonal() {
        let m = Matrix::from_row_major(2, 2, vec![2.0, 0.0, 0.0, 0.0]).unwrap();
        let p = power_iteration_norm(&m, 1e-10, 10_000);
        assert!(p.converged);
        assert!((p.norm - 2.0).abs() < 1e-12);
    }

    #[test]
    fn skew_matrix_has_zero_symmetric_part() {
        let m = Matrix::from_row_major(2, 2, vec![0.0, 1.0, -1.0, 0.0]).unwrap();
        assert_eq!(min_symmetric_eigenvalue(&m), 0.0);
        assert!((spectral_norm_exact(&m) - 1.0).abs() < 1e-15);
    }
}
