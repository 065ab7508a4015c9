//! Symmetric eigendecomposition by cyclic Jacobi rotations, and the
//! eigen-based SPD logarithm used as a reference.

use super::Matrix;
use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// `A = Q·diag(values)·Qᵀ`, eigenvalues ascending, eigenvectors in the
/// columns of `vectors`.
#[derive(Clone, Debug)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymEig {
    pub fn reconstruct(&self) -> Matrix {
        self.apply_fn(|x| x)
    }

    /// `Q·diag(f(λ))·Qᵀ`
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let q = &self.vectors;
        let n = q.n();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        Matrix::from_fn(n, |i, j| (0..n).map(|k| q[(i, k)] * fl[k] * q[(j, k)]).sum())
    }
}

pub fn sym_eig(a: &Matrix) -> Result<SymEig> {
    let n = a.n();
    let fro = a.frobenius_norm();
    let asym = a.asymmetry();
    if asym > SYMMETRY_TOL * fro {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let mut w = Matrix::from_fn(n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let mut q = Matrix::identity(n);
    let floor = f64::EPSILON * f64::EPSILON * fro;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = w[(p, r)];
                let app = w[(p, p)];
                let arr = w[(r, r)];
                // Relative threshold keeps small eigenvalues of definite
                // matrices accurate to working precision.
                if apr.abs() <= f64::EPSILON * (app * arr).abs().sqrt() || apr.abs() <= floor {
                    continue;
                }
                rotated = true;
                // Rutishauser's stable rotation.
                let theta = (arr - app) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut w, p, r, c, s);
                w[(p, p)] = app - t * apr;
                w[(r, r)] = arr + t * apr;
                w[(p, r)] = 0.0;
                w[(r, p)] = 0.0;
                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = c * qkp - s * qkr;
                    q[(k, r)] = s * qkp + c * qkr;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Jacobi eigensolver",
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].total_cmp(&w[(j, j)]));
    let values = order.iter().map(|&i| w[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, |i, j| q[(i, order[j])]);
    Ok(SymEig { values, vectors })
}

/// Applies the (p, r) rotation to the off-diagonal rows/columns of `w`.
fn rotate(w: &mut Matrix, p: usize, r: usize, c: f64, s: f64) {
    let n = w.n();
    for k in 0..n {
        if k == p || k == r {
            continue;
        }
        let wkp = w[(k, p)];
        let wkr = w[(k, r)];
        let new_p = c * wkp - s * wkr;
        let new_r = s * wkp + c * wkr;
        w[(k, p)] = new_p;
        w[(p, k)] = new_p;
        w[(k, r)] = new_r;
        w[(r, k)] = new_r;
    }
}

/// `log(A)` for symmetric positive definite `A` through its eigendecomposition.
pub fn eig_logm_spd(a: &Matrix) -> Result<Matrix> {
    let eig = sym_eig(a)?;
    let smallest = eig.values[0];
    if smallest <= 0.0 {
        return Err(Error::NotSpd { smallest });
    }
    Ok(eig.apply_fn(f64::ln))
}
