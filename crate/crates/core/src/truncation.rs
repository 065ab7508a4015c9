//! Choice of the finite integration interval `[l, r]` for the DE rule.
//!
//! With `a = (tanh(sinh l) + 1)/2` and `b = (tanh(sinh r) + 1)/2`, the part
//! of the integral cut off on the left is at most `(3a/2)‖A − I‖` as long as
//! `a ≤ 1/(2‖A − I‖)`, and the part cut off on the right is at most
//! `(−log b + (1 − b)/(2b))‖A − I‖‖A⁻¹‖` as long as
//! `b ≥ 2‖A⁻¹‖/(2‖A⁻¹‖ + 1)`. Dividing by `θ ≤ ‖log A‖₂` and splitting the
//! tolerance evenly between the two tails gives `a` directly and `b` as the
//! root of a scalar equation, or of its linearisation at `b = 1`.
//!
//! For the ill-conditioned cases `1 − b` drops far below machine epsilon,
//! so the right end is carried as its complement `1 − b` throughout.

use crate::error::{Error, Result};
use crate::linalg::SpectralParams;

/// How the right end `b` is obtained from the tolerance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SMode {
    /// `s̃ = 1 − θε/(3‖A − I‖₂‖A⁻¹‖₂)`, the first-order solution.
    #[default]
    Linearized,
    /// Root of the full tail equation; carries the rigorous guarantee.
    Exact,
}

/// A finite DE interval and the tolerance it was built for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationInterval {
    pub a: f64,
    pub b: f64,
    /// `1 − b`, kept separately because `b` rounds to 1 for tight tolerances.
    pub b_complement: f64,
    pub l: f64,
    pub r: f64,
    pub eps_effective: f64,
    pub clamped: bool,
}

/// Tolerances and limits of the adaptive algorithms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// Interval truncation tolerance `ε`.
    pub eps: f64,
    /// Quadrature error tolerance `ζ`.
    pub zeta: f64,
    /// Initial number of abscissas.
    pub m0: usize,
    pub max_evals: usize,
}

/// Evaluation limit of the adaptive DE algorithm (16 → 31 → … → 1921).
pub const DE_MAX_EVALS: usize = 1921;
/// Cumulative evaluation limit of the adaptive GL algorithm (16 + 32 + … + 1024).
pub const GL_MAX_EVALS: usize = 2032;

impl ToleranceConfig {
    pub fn new(eps: f64, zeta: f64, m0: usize, max_evals: usize) -> Result<Self> {
        if !(eps > 0.0) || !(zeta > 0.0) || m0 < 2 || max_evals == 0 {
            return Err(Error::PreconditionViolated(format!(
                "tolerance config needs eps > 0, zeta > 0, m0 >= 2, max_evals > 0 \
                 (got eps={eps}, zeta={zeta}, m0={m0}, max_evals={max_evals})"
            )));
        }
        Ok(Self {
            eps,
            zeta,
            m0,
            max_evals,
        })
    }

    /// `ε = ζ`, `m0 = 16`, limit 1921.
    pub fn de(zeta: f64) -> Self {
        Self {
            eps: zeta,
            zeta,
            m0: 16,
            max_evals: DE_MAX_EVALS,
        }
    }

    /// `ε = ζ`, `m0 = 16`, limit 2032.
    pub fn gl(zeta: f64) -> Self {
        Self {
            eps: zeta,
            zeta,
            m0: 16,
            max_evals: GL_MAX_EVALS,
        }
    }
}

/// Lower bound on `‖log A‖₂` from the spectral radius: `|log ρ(A)|`, or
/// `max(|log ρ(A)|, |log ρ(A⁻¹)|)` when `A` is SPD.
pub fn theta_lower_bound(params: &SpectralParams) -> Result<f64> {
    if !(params.rho_a > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "spectral radius must be positive, got {}",
            params.rho_a
        )));
    }
    let mut theta = params.rho_a.ln().abs();
    if params.spd {
        let rho_inv = params.rho_a_inv.ok_or_else(|| {
            Error::PreconditionViolated("SPD tightening needs rho(A^-1)".into())
        })?;
        theta = theta.max(rho_inv.ln().abs());
    }
    if theta == 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    Ok(theta)
}

fn slack(x: f64) -> f64 {
    x * (1.0 + 4.0 * f64::EPSILON)
}

/// `(3a/2)‖A − I‖`, valid for `0 < a ≤ 1/(2‖A − I‖)`.
pub fn tail_bound_left(a: f64, norm_a_minus_i: f64) -> Result<f64> {
    if !(norm_a_minus_i > 0.0) {
        return Err(Error::PreconditionViolated(
            "left tail bound needs ||A-I|| > 0".into(),
        ));
    }
    if !(a >= 0.0) || a > slack(0.5 / norm_a_minus_i) {
        return Err(Error::PreconditionViolated(format!(
            "a = {a:e} outside (0, 1/(2||A-I||)] = (0, {:e}]",
            0.5 / norm_a_minus_i
        )));
    }
    Ok(1.5 * a * norm_a_minus_i)
}

/// `(−log b + (1 − b)/(2b))‖A − I‖‖A⁻¹‖`, valid for
/// `2‖A⁻¹‖/(2‖A⁻¹‖ + 1) ≤ b < 1`.
pub fn tail_bound_right(b: f64, norm_a_minus_i: f64, norm_a_inv: f64) -> Result<f64> {
    tail_bound_right_complement(1.0 - b, norm_a_minus_i, norm_a_inv)
}

/// [`tail_bound_right`] parametrised by `d = 1 − b`.
pub fn tail_bound_right_complement(d: f64, norm_a_minus_i: f64, norm_a_inv: f64) -> Result<f64> {
    let d_max = 1.0 / (2.0 * norm_a_inv + 1.0);
    if !(d >= 0.0) || d > slack(d_max) {
        return Err(Error::PreconditionViolated(format!(
            "1 - b = {d:e} outside [0, 1/(2||A^-1||+1)] = [0, {d_max:e}]"
        )));
    }
    Ok(right_tail_shape(d) * norm_a_minus_i * norm_a_inv)
}

/// `−log(1 − d) + d/(2(1 − d))`, increasing and convex in `d`.
fn right_tail_shape(d: f64) -> f64 {
    -(-d).ln_1p() + d / (2.0 * (1.0 - d))
}

fn right_tail_shape_derivative(d: f64) -> f64 {
    let e = 1.0 - d;
    1.0 / e + 1.0 / (2.0 * e * e)
}

/// Upper bound on `‖log A − (A − I)∫ₗʳ F_DE‖` for the given interval.
pub fn truncation_bound(interval: &TruncationInterval, params: &SpectralParams) -> Result<f64> {
    Ok(tail_bound_left(interval.a, params.norm_a_minus_i)?
        + tail_bound_right_complement(
            interval.b_complement,
            params.norm_a_minus_i,
            params.norm_a_inv,
        )?)
}

/// Largest tolerance for which the interval construction is well posed.
pub fn epsilon_max(params: &SpectralParams) -> f64 {
    3.0 / params.theta * params.norm_a_minus_i * params.norm_a_inv / (1.0 + params.norm_a_inv)
}

fn check_below_eps_max(params: &SpectralParams, eps: f64) -> Result<()> {
    let emax = epsilon_max(params);
    if !(eps > 0.0) || eps >= emax {
        return Err(Error::PreconditionViolated(format!(
            "eps = {eps:e} must lie in (0, eps_max = {emax:e})"
        )));
    }
    Ok(())
}

/// `1 − s` for the exact root `s` of
/// `(1/θ)(−log s + (1 − s)/(2s))‖A − I‖₂‖A⁻¹‖₂ = ε/2`.
pub fn solve_s_exact_complement(params: &SpectralParams, eps: f64) -> Result<f64> {
    check_below_eps_max(params, eps)?;
    let target = eps * params.theta / (2.0 * params.norm_a_minus_i * params.norm_a_inv);
    let b_min = 2.0 * params.norm_a_inv / (2.0 * params.norm_a_inv + 1.0);
    let s_lo = b_min.min(0.5);
    let mut hi = 1.0 - s_lo;
    // The shape function is ≥ 3d/2, so the root never exceeds the linearised one.
    hi = hi.min(slack(2.0 * target / 3.0));
    if right_tail_shape(hi) < target {
        hi = 1.0 - s_lo;
        if right_tail_shape(hi) < target {
            return Err(Error::NoRoot);
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if right_tail_shape(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut d = 0.5 * (lo + hi);
    for _ in 0..3 {
        let step = (right_tail_shape(d) - target) / right_tail_shape_derivative(d);
        let next = d - step;
        if next > 0.0 && next < 1.0 {
            d = next;
        }
    }
    Ok(d)
}

/// Exact root `s` of the right-tail equation.
pub fn solve_s_exact(params: &SpectralParams, eps: f64) -> Result<f64> {
    Ok(1.0 - solve_s_exact_complement(params, eps)?)
}

/// Linearised root `s̃ = 1 − θε/(3‖A − I‖₂‖A⁻¹‖₂)`.
pub fn s_tilde(params: &SpectralParams, eps: f64) -> f64 {
    1.0 - s_tilde_complement(params, eps)
}

fn s_tilde_complement(params: &SpectralParams, eps: f64) -> f64 {
    params.theta * eps / (3.0 * params.norm_a_minus_i * params.norm_a_inv)
}

/// `asinh(atanh(2a − 1))` with `atanh(2a − 1) = ½(log a − log(1 − a))`.
pub fn left_abscissa(a: f64) -> f64 {
    (0.5 * (a.ln() - (-a).ln_1p())).asinh()
}

/// `asinh(atanh(2b − 1))` from `d = 1 − b`.
pub fn right_abscissa(d: f64) -> f64 {
    (0.5 * ((-d).ln_1p() - d.ln())).asinh()
}

/// Picks `[l, r]` so the relative truncation error is (about) `eps`.
/// Tolerances at or above `ε_max` are replaced by `ε_max/2`.
pub fn select_interval(
    params: &SpectralParams,
    eps: f64,
    s_mode: SMode,
) -> Result<TruncationInterval> {
    if params.norm_a_minus_i == 0.0 {
        return Err(Error::AIsIdentity);
    }
    if !(eps > 0.0) {
        return Err(Error::PreconditionViolated(format!("eps must be positive, got {eps}")));
    }
    let nai = params.norm_a_minus_i;
    let ninv = params.norm_a_inv;
    let emax = epsilon_max(params);
    let (eps_effective, clamped) = if eps >= emax {
        (emax / 2.0, true)
    } else {
        (eps, false)
    };

    let a = (params.theta * eps_effective / (3.0 * nai)).min(0.5 / nai);
    let s_complement = match s_mode {
        SMode::Linearized => s_tilde_complement(params, eps_effective),
        SMode::Exact => solve_s_exact_complement(params, eps_effective)?,
    };
    let b_complement = s_complement.min(1.0 / (2.0 * ninv + 1.0));
    let b = 1.0 - b_complement;
    if !(a < 1.0 - b_complement) {
        return Err(Error::PreconditionViolated(format!(
            "interval collapsed: a = {a:e}, b = {b:e}"
        )));
    }
    Ok(TruncationInterval {
        a,
        b,
        b_complement,
        l: left_abscissa(a),
        r: right_abscissa(b_complement),
        eps_effective,
        clamped,
    })
}
