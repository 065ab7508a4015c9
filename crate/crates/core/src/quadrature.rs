//! Integrands and quadrature rules.
//!
//! `F_DE(x) = cosh(x)·sech²(sinh x)·[(1 + tanh(sinh x))(A − I) + 2I]⁻¹` is the
//! integrand after `u = tanh(sinh x)`; `F_GL(u) = [(1 + u)(A − I) + 2I]⁻¹` the
//! one on `[−1, 1]`. Neither carries the outer `(A − I)` factor.
//!
//! Integrand values at different abscissas are computed in parallel in
//! fixed-size chunks, but always summed in ascending abscissa order, so the
//! result does not depend on the number of threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};

const CHUNK: usize = 32;

/// `cosh(x)·sech²(sinh x)`, the Jacobian of `u = tanh(sinh x)`.
pub fn de_weight(x: f64) -> f64 {
    let s = x.sinh();
    let sech = 1.0 / s.cosh();
    x.cosh() * sech * sech
}

/// `1 + tanh(sinh x)`, written as `2/(1 + e^{−2 sinh x})` so the left end
/// keeps its relative accuracy.
pub fn one_plus_tanh_sinh(x: f64) -> f64 {
    2.0 / (1.0 + (-2.0 * x.sinh()).exp())
}

/// `c(A − I) + 2I`
fn system_matrix(a: &Matrix, c: f64) -> Matrix {
    a.shifted(-1.0).scaled(c).shifted(2.0)
}

pub fn f_de(x: f64, a: &Matrix) -> Result<Matrix> {
    let m = system_matrix(a, one_plus_tanh_sinh(x));
    let mut inv = Lu::factor(&m)?.inverse();
    inv.scale_mut(de_weight(x));
    Ok(inv)
}

/// `F_DE(x)·v` from one linear solve.
pub fn f_de_action(x: f64, a: &Matrix, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: v.len(),
        });
    }
    let m = system_matrix(a, one_plus_tanh_sinh(x));
    let w = de_weight(x);
    Ok(Lu::factor(&m)?
        .solve_vec(v)
        .into_iter()
        .map(|y| y * w)
        .collect())
}

pub fn f_gl(u: f64, a: &Matrix) -> Result<Matrix> {
    Ok(Lu::factor(&system_matrix(a, 1.0 + u))?.inverse())
}

/// Evaluates `f` at every item and hands the values to `sink` in order.
pub(crate) fn for_each_ordered<P, T, F>(items: &[P], f: F, mut sink: impl FnMut(T)) -> Result<()>
where
    P: Sync,
    T: Send,
    F: Fn(&P) -> Result<T> + Sync,
{
    for chunk in items.chunks(CHUNK) {
        let values: Vec<Result<T>> = chunk.par_iter().map(&f).collect();
        for v in values {
            sink(v?);
        }
    }
    Ok(())
}

/// `Σ f(xᵢ)` accumulated in index order.
fn ordered_sum(n: usize, points: &[f64], f: impl Fn(f64) -> Result<Matrix> + Sync) -> Result<Matrix> {
    let mut acc = Matrix::zeros(n);
    for_each_ordered(points, |&x| f(x), |v| acc += &v)?;
    Ok(acc)
}

/// Running trapezoid value of `∫ₗʳ F_DE` (without the `(A − I)` factor).
#[derive(Clone, Debug)]
pub struct QuadratureState {
    pub t: Matrix,
    pub h: f64,
    pub m: usize,
    pub l: f64,
    pub r: f64,
    /// Integrand evaluations so far.
    pub evals: usize,
}

/// `T = (h/2)(F(l) + F(r)) + h·Σᵢ₌₁^{m−2} F(l + ih)`, `h = (r − l)/(m − 1)`.
pub fn trapezoid_de(a: &Matrix, l: f64, r: f64, m: usize) -> Result<QuadratureState> {
    if m < 2 || !(l < r) {
        return Err(Error::PreconditionViolated(format!(
            "trapezoid needs m >= 2 and l < r (m={m}, l={l}, r={r})"
        )));
    }
    let h = (r - l) / (m - 1) as f64;
    let mut t = f_de(l, a)?;
    t += &f_de(r, a)?;
    t.scale_mut(0.5 * h);
    let interior: Vec<f64> = (1..m - 1).map(|i| l + i as f64 * h).collect();
    let s = ordered_sum(a.n(), &interior, |x| f_de(x, a))?;
    t.axpy(h, &s);
    Ok(QuadratureState {
        t,
        h,
        m,
        l,
        r,
        evals: m,
    })
}

/// Halves the mesh reusing every previous value:
/// `T(h/2) = T(h)/2 + (h/2)·Σᵢ₌₁^{m−1} F(l + (2i − 1)h/2)`.
pub fn refine(state: &QuadratureState, a: &Matrix) -> Result<QuadratureState> {
    let half = 0.5 * state.h;
    let midpoints: Vec<f64> = (1..state.m)
        .map(|i| state.l + (2 * i - 1) as f64 * half)
        .collect();
    let s = ordered_sum(a.n(), &midpoints, |x| f_de(x, a))?;
    let mut t = state.t.scaled(0.5);
    t.axpy(half, &s);
    Ok(QuadratureState {
        t,
        h: half,
        m: 2 * state.m - 1,
        l: state.l,
        r: state.r,
        evals: state.evals + state.m - 1,
    })
}

/// Gauss–Legendre nodes (ascending) and weights on `[−1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GlRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

pub const GL_MAX_NODES: usize = 4096;

/// `(P_m(x), P_{m−1}(x))` from the three-term recurrence.
fn legendre_pair(m: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    for k in 2..=m {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// `P′_m(x) = m(x·P_m − P_{m−1})/(x² − 1)`
fn legendre_derivative(m: usize, x: f64) -> f64 {
    let (p, q) = legendre_pair(m, x);
    m as f64 * (x * p - q) / (x * x - 1.0)
}

fn newton_step(m: usize, x: f64) -> f64 {
    legendre_pair(m, x).0 / legendre_derivative(m, x)
}

/// Roots of `P_m` by Newton's method from Chebyshev-type angles; weights
/// `2/((1 − x²)P′_m(x)²)`.
pub fn gl_nodes(m: usize) -> Result<GlRule> {
    if m == 0 || m > GL_MAX_NODES {
        return Err(Error::PreconditionViolated(format!(
            "Gauss-Legendre order must be in 1..={GL_MAX_NODES}, got {m}"
        )));
    }
    let mf = m as f64;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    // Positive roots, largest first; the rest follow by symmetry.
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let dx = newton_step(m, x);
            x -= dx;
            if dx.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                what: "Gauss-Legendre Newton iteration",
                iterations: 100,
            });
        }
        x -= newton_step(m, x);
        if 2 * i + 1 == m {
            x = 0.0;
        }
        let dp = legendre_derivative(m, x);
        let w = 2.0 / ((1.0 - x) * (1.0 + x) * dp * dp);
        nodes[m - 1 - i] = x;
        nodes[i] = -x;
        weights[m - 1 - i] = w;
        weights[i] = w;
    }
    Ok(GlRule { nodes, weights })
}

/// `Σ wᵢ F_GL(uᵢ)` in node order.
pub fn gl_sum(a: &Matrix, rule: &GlRule) -> Result<Matrix> {
    let mut acc = Matrix::zeros(a.n());
    let pairs: Vec<(f64, f64)> = rule.nodes.iter().copied().zip(rule.weights.iter().copied()).collect();
    for_each_ordered(
        &pairs,
        |&(u, w)| {
            let mut v = f_gl(u, a)?;
            v.scale_mut(w);
            Ok(v)
        },
        |v| acc += &v,
    )?;
    Ok(acc)
}
