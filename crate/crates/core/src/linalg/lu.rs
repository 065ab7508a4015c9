//! LU factorisation with partial pivoting.

use super::Matrix;
use crate::error::{Error, Result};

/// Pivots smaller than this are treated as exact zeros.
pub const PIVOT_DROP_TOL: f64 = 1e-300;

/// `P·A = L·U` packed into one matrix (unit lower `L` below the diagonal).
#[derive(Clone, Debug)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.n();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let data = lu.as_mut_slice();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, data[i * n + k].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax < PIVOT_DROP_TOL {
                return Err(Error::SingularMatrix {
                    column: k,
                    pivot: pmax,
                });
            }
            if p != k {
                for j in 0..n {
                    data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = data[k * n + k];
            let (upper, lower) = data.split_at_mut((k + 1) * n);
            let pivot_row = &upper[k * n..(k + 1) * n];
            for row in lower.chunks_exact_mut(n) {
                let l = row[k] / pivot;
                row[k] = l;
                if l != 0.0 {
                    for j in (k + 1)..n {
                        row[j] -= l * pivot_row[j];
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn n(&self) -> usize {
        self.lu.n()
    }

    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(b.len(), n);
        let a = self.lu.as_slice();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| a[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| a[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / a[i * n + i];
        }
        x
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(b.len(), n);
        let a = self.lu.as_slice();
        // Uᵀ z = b, then Lᵀ y = z, then x = Pᵀ y
        let mut z = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| a[j * n + i] * z[j]).sum();
            z[i] = (z[i] - s) / a[i * n + i];
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| a[j * n + i] * z[j]).sum();
            z[i] -= s;
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        x
    }

    /// Solves `A X = B` for a square right-hand side.
    pub fn solve_mat(&self, b: &Matrix) -> Matrix {
        let n = self.n();
        assert_eq!(b.n(), n);
        let a = self.lu.as_slice();
        let mut x = Matrix::zeros(n);
        {
            let xs = x.as_mut_slice();
            for (i, &p) in self.perm.iter().enumerate() {
                xs[i * n..(i + 1) * n].copy_from_slice(b.row(p));
            }
            // Row-oriented substitution keeps the inner loops contiguous.
            for i in 0..n {
                let (done, rest) = xs.split_at_mut(i * n);
                let xi = &mut rest[..n];
                for j in 0..i {
                    let l = a[i * n + j];
                    if l != 0.0 {
                        for (t, s) in xi.iter_mut().zip(&done[j * n..(j + 1) * n]) {
                            *t -= l * s;
                        }
                    }
                }
            }
            for i in (0..n).rev() {
                let (head, tail) = xs.split_at_mut((i + 1) * n);
                let xi = &mut head[i * n..];
                for j in (i + 1)..n {
                    let u = a[i * n + j];
                    if u != 0.0 {
                        let xj = &tail[(j - i - 1) * n..(j - i) * n];
                        for (t, s) in xi.iter_mut().zip(xj) {
                            *t -= u * s;
                        }
                    }
                }
                let d = a[i * n + i];
                xi.iter_mut().for_each(|t| *t /= d);
            }
        }
        x
    }

    pub fn inverse(&self) -> Matrix {
        self.solve_mat(&Matrix::identity(self.n()))
    }
}

/// Solves `A X = B`; `A` and `B` are left untouched.
pub fn lu_solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(Lu::factor(a)?.solve_mat(b))
}

pub fn lu_solve_vec(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.n() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.len(),
        });
    }
    Ok(Lu::factor(a)?.solve_vec(b))
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    Ok(Lu::factor(a)?.inverse())
}
