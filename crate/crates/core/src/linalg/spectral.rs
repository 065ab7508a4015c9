//! 2-norm and spectral radius estimation, exact or by power iteration.
//!
//! Exact mode goes through a dense eigensolver (Jacobi on `AᵀA` for norms,
//! Jacobi or a real Schur form for the spectral radius). Approximate mode
//! runs power iteration to a relative tolerance, mirroring what a Krylov
//! `eigs(..., tol = 0.01)` call would give.

use super::eig::sym_eig;
use super::lu::Lu;
use super::matrix::{dot, norm2};
use super::Matrix;
use crate::error::{Error, Result};
use crate::truncation::theta_lower_bound;

/// Default relative tolerance of the approximate estimators.
pub const APPROX_TOL: f64 = 0.01;

const SYMMETRY_TOL: f64 = 1e-12;

/// How the spectral quantities feeding interval selection are estimated.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum ParamMode {
    #[default]
    Exact,
    Approximate { tol: f64 },
}

impl ParamMode {
    pub fn approximate() -> Self {
        ParamMode::Approximate { tol: APPROX_TOL }
    }
}

impl std::fmt::Display for ParamMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamMode::Exact => write!(f, "exact"),
            ParamMode::Approximate { tol } => write!(f, "approximate({tol})"),
        }
    }
}

fn max_iterations(n: usize) -> usize {
    10 * n + 100
}

fn ones_unit(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

/// Largest eigenvalue of a symmetric positive semidefinite operator by
/// power iteration, stopped once the Rayleigh quotient `λ` has residual
/// `‖Bv − λv‖ ≤ tol·λ`.
fn power_psd(n: usize, tol: f64, what: &'static str, op: impl Fn(&[f64]) -> Vec<f64>) -> Result<f64> {
    let mut v = ones_unit(n);
    let cap = max_iterations(n);
    for _ in 0..cap {
        let w = op(&v);
        let lambda = dot(&v, &w);
        let nw = norm2(&w);
        if nw == 0.0 {
            return Ok(0.0);
        }
        let residual: f64 = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - lambda * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol * lambda {
            return Ok(lambda);
        }
        v = w.into_iter().map(|x| x / nw).collect();
    }
    Err(Error::NoConvergence {
        what,
        iterations: cap,
    })
}

/// `‖A‖₂`
pub fn two_norm(a: &Matrix, mode: ParamMode) -> Result<f64> {
    match mode {
        ParamMode::Exact => {
            if a.is_symmetric(SYMMETRY_TOL) {
                let e = sym_eig(a)?;
                return Ok(e.values[0].abs().max(e.values[e.values.len() - 1].abs()));
            }
            let ata = &a.transpose() * a;
            let e = sym_eig(&ata)?;
            Ok(e.values[e.values.len() - 1].max(0.0).sqrt())
        }
        ParamMode::Approximate { tol } => {
            let lambda = power_psd(a.n(), tol, "power iteration for ||A||_2", |v| {
                a.matvec_t(&a.matvec(v))
            })?;
            Ok(lambda.sqrt())
        }
    }
}

/// `‖A⁻¹‖₂`, without forming `AᵀA` in exact mode (that would square the
/// condition number and lose the smallest singular value).
pub fn inverse_two_norm(a: &Matrix, mode: ParamMode) -> Result<f64> {
    let lu = Lu::factor(a)?;
    match mode {
        ParamMode::Exact => two_norm(&lu.inverse(), ParamMode::Exact),
        ParamMode::Approximate { tol } => {
            let lambda = power_psd(a.n(), tol, "inverse power iteration for ||A^-1||_2", |v| {
                lu.solve_vec(&lu.solve_transpose_vec(v))
            })?;
            Ok(lambda.sqrt())
        }
    }
}

/// Spectral radius together with how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusEstimate {
    pub value: f64,
    /// The dominant eigenvalues form a complex conjugate pair (iterates
    /// rotate instead of settling on one direction).
    pub oscillating: bool,
}

pub fn spectral_radius(a: &Matrix, mode: ParamMode) -> Result<RadiusEstimate> {
    match mode {
        ParamMode::Exact => exact_spectral_radius(a),
        ParamMode::Approximate { tol } => power_spectral_radius(a, tol),
    }
}

fn exact_spectral_radius(a: &Matrix) -> Result<RadiusEstimate> {
    if a.is_symmetric(SYMMETRY_TOL) {
        let e = sym_eig(a)?;
        let value = e.values[0].abs().max(e.values[e.values.len() - 1].abs());
        return Ok(RadiusEstimate {
            value,
            oscillating: false,
        });
    }
    let schur = nalgebra::Schur::try_new(a.to_nalgebra(), f64::EPSILON, 10_000).ok_or(
        Error::NoConvergence {
            what: "real Schur eigensolver",
            iterations: 10_000,
        },
    )?;
    let eigs = schur.complex_eigenvalues();
    let dominant = eigs
        .iter()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .expect("non-empty spectrum");
    Ok(RadiusEstimate {
        value: dominant.norm(),
        oscillating: dominant.im != 0.0,
    })
}

/// Power iteration from the normalised all-ones vector. When the iterate
/// direction does not settle, the dominant pair is recovered from the
/// two-term recurrence `x₂ ≈ c₁x₁ + c₀x₀` fitted to three successive
/// iterates; its roots are complex with modulus `√(−c₀)`.
fn power_spectral_radius(a: &Matrix, tol: f64) -> Result<RadiusEstimate> {
    let n = a.n();
    let cap = max_iterations(n);
    let mut v = ones_unit(n);
    let mut prev_real = f64::NAN;
    let mut prev_pair = f64::NAN;
    for _ in 0..cap {
        let w = a.matvec(&v);
        let nw = norm2(&w);
        if nw == 0.0 {
            // v landed in the null space; A is nilpotent along it.
            return Ok(RadiusEstimate {
                value: 0.0,
                oscillating: false,
            });
        }
        let u: Vec<f64> = w.iter().map(|x| x / nw).collect();
        let turn = {
            let plus: f64 = u.iter().zip(&v).map(|(x, y)| (x - y).powi(2)).sum();
            let minus: f64 = u.iter().zip(&v).map(|(x, y)| (x + y).powi(2)).sum();
            plus.min(minus).sqrt()
        };
        if turn <= tol && (nw - prev_real).abs() <= tol * nw {
            return Ok(RadiusEstimate {
                value: nw,
                oscillating: false,
            });
        }
        prev_real = nw;

        let z = a.matvec(&u);
        if let Some(pair) = complex_pair_modulus(&v, &u, &z, nw) {
            if (pair - prev_pair).abs() <= tol * pair {
                return Ok(RadiusEstimate {
                    value: pair,
                    oscillating: true,
                });
            }
            prev_pair = pair;
        } else {
            prev_pair = f64::NAN;
        }
        v = u;
    }
    Err(Error::NoConvergence {
        what: "power iteration for rho(A)",
        iterations: cap,
    })
}

/// Fits `A²v = c₁·Av + c₀·v` in least squares, given `v`, `u = Av/‖Av‖`,
/// `z = Au`, `nw = ‖Av‖`. Returns the modulus of the fitted roots when they
/// are a complex pair.
fn complex_pair_modulus(v: &[f64], u: &[f64], z: &[f64], nw: f64) -> Option<f64> {
    // Work in the basis (v, u): A²v = nw·z, Av = nw·u.
    let g11 = dot(u, u);
    let g12 = dot(u, v);
    let g22 = dot(v, v);
    let det = g11 * g22 - g12 * g12;
    if det <= 1e-12 * g11 * g22 {
        return None;
    }
    let r1 = dot(u, z);
    let r2 = dot(v, z);
    // z ≈ α·u + β·v
    let alpha = (r1 * g22 - r2 * g12) / det;
    let beta = (g11 * r2 - g12 * r1) / det;
    // A²v = nw·z = nw·α·u + nw·β·v = α·Av + nw·β·v
    let c1 = alpha;
    let c0 = nw * beta;
    if c1 * c1 + 4.0 * c0 < 0.0 {
        Some((-c0).sqrt())
    } else {
        None
    }
}

/// The quantities interval selection needs: `ρ(A)`, `‖A − I‖₂`, `‖A⁻¹‖₂`,
/// and the lower bound `θ ≤ ‖log A‖₂` derived from them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParams {
    pub rho_a: f64,
    pub norm_a_minus_i: f64,
    pub norm_a_inv: f64,
    /// `ρ(A⁻¹)`, known for free when `A` is SPD (`= ‖A⁻¹‖₂`).
    pub rho_a_inv: Option<f64>,
    pub theta: f64,
    pub spd: bool,
    pub mode: ParamMode,
    /// The power iteration for `ρ(A)` saw a complex dominant pair.
    pub oscillating: bool,
}

impl SpectralParams {
    /// Builds parameters from known values; `theta` follows from them.
    pub fn from_values(
        rho_a: f64,
        norm_a_minus_i: f64,
        norm_a_inv: f64,
        spd: bool,
    ) -> Result<Self> {
        if !(rho_a > 0.0) || !(norm_a_inv > 0.0) || !(norm_a_minus_i >= 0.0) {
            return Err(Error::PreconditionViolated(format!(
                "spectral parameters must be positive (rho={rho_a}, ||A-I||={norm_a_minus_i}, ||A^-1||={norm_a_inv})"
            )));
        }
        let mut p = Self {
            rho_a,
            norm_a_minus_i,
            norm_a_inv,
            rho_a_inv: spd.then_some(norm_a_inv),
            theta: f64::NAN,
            spd,
            mode: ParamMode::Exact,
            oscillating: false,
        };
        p.theta = theta_lower_bound(&p)?;
        Ok(p)
    }

    /// Estimates the parameters of `A`. SPD is detected structurally
    /// (symmetry to `1e-12` relative, then a positive smallest Jacobi
    /// eigenvalue, or a successful Cholesky factorisation in approximate mode).
    pub fn estimate(a: &Matrix, mode: ParamMode) -> Result<Self> {
        let n = a.n();
        let symmetric = a.is_symmetric(SYMMETRY_TOL);
        let a_minus_i = a.shifted(-1.0);
        let (rho, oscillating, spd, norm_a_inv) = match mode {
            ParamMode::Exact if symmetric => {
                let e = sym_eig(a)?;
                let lo = e.values[0];
                let hi = e.values[n - 1];
                let spd = lo > 0.0;
                let norm_inv = if spd {
                    1.0 / lo
                } else {
                    inverse_two_norm(a, mode)?
                };
                (lo.abs().max(hi.abs()), false, spd, norm_inv)
            }
            _ => {
                let r = spectral_radius(a, mode)?;
                let spd = symmetric && is_positive_definite(a);
                (r.value, r.oscillating, spd, inverse_two_norm(a, mode)?)
            }
        };
        let norm_a_minus_i = two_norm(&a_minus_i, mode)?;
        let mut p = Self {
            rho_a: rho,
            norm_a_minus_i,
            norm_a_inv,
            rho_a_inv: spd.then_some(norm_a_inv),
            theta: f64::NAN,
            spd,
            mode,
            oscillating,
        };
        p.theta = theta_lower_bound(&p)?;
        Ok(p)
    }
}

/// Cholesky succeeds iff the (symmetric) matrix is positive definite.
fn is_positive_definite(a: &Matrix) -> bool {
    let n = a.n();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    true
}
