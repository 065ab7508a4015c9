//! End-to-end logarithm algorithms.
//!
//! * [`logm_de`]: `m`-point DE trapezoid on an interval selected for `ε`.
//! * [`logm_de_adaptive`]: the same, halving the mesh until
//!   `‖T_{k+1} − T_k‖_F/(3θ) ≤ ζ`; every earlier value is reused.
//! * [`logm_gl`] / [`logm_gl_adaptive`]: Gauss–Legendre with `m`, `2m`, `4m`, …
//!   nodes, stopping when `‖G_{k+1} − G_k‖_F/θ ≤ ζ`; nodes are not nested so
//!   each level is computed from scratch.
//! * [`logm_action_de`]: `log(A)·v` from `m` linear solves, never forming
//!   a dense inverse.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, ParamMode, SpectralParams};
use crate::quadrature::{f_de_action, for_each_ordered, gl_nodes, gl_sum, refine, trapezoid_de};
use crate::truncation::{select_interval, SMode, ToleranceConfig, TruncationInterval};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    EvalLimit,
    FixedM,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::EvalLimit => "eval_limit",
            StopReason::FixedM => "fixed_m",
        }
    }
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct LogmResult {
    /// Approximation of `log A`.
    pub x: Matrix,
    /// Integrand evaluations spent.
    pub evals: usize,
    /// DE paths only.
    pub interval: Option<TruncationInterval>,
    /// Adaptive paths only: the last computed error estimate.
    pub err_estimate: Option<f64>,
    pub stop: StopReason,
    /// `None` when `A = I` short-circuited.
    pub params: Option<SpectralParams>,
}

impl LogmResult {
    fn identity(n: usize, stop: StopReason) -> Self {
        Self {
            x: Matrix::zeros(n),
            evals: 0,
            interval: None,
            err_estimate: None,
            stop,
            params: None,
        }
    }
}

/// One level of an adaptive run.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    /// Abscissas of this level's rule.
    pub m: usize,
    /// Cumulative integrand evaluations after this level.
    pub evals: usize,
    /// Error estimate against the previous level (`None` at level 0).
    pub estimate: Option<f64>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct AdaptiveReport {
    pub levels: Vec<Level>,
    pub result: LogmResult,
}

/// `log A` with the `m`-point DE formula, `ε` the interval tolerance.
pub fn logm_de(a: &Matrix, m: usize, eps: f64, mode: ParamMode) -> Result<LogmResult> {
    if a.is_identity() {
        return Ok(LogmResult::identity(a.n(), StopReason::FixedM));
    }
    let params = SpectralParams::estimate(a, mode)?;
    logm_de_with_params(a, m, eps, &params)
}

/// [`logm_de`] with precomputed spectral parameters.
pub fn logm_de_with_params(
    a: &Matrix,
    m: usize,
    eps: f64,
    params: &SpectralParams,
) -> Result<LogmResult> {
    if a.is_identity() {
        return Ok(LogmResult::identity(a.n(), StopReason::FixedM));
    }
    let interval = select_interval(params, eps, SMode::Linearized)?;
    let state = trapezoid_de(a, interval.l, interval.r, m)?;
    Ok(LogmResult {
        x: &a.shifted(-1.0) * &state.t,
        evals: state.evals,
        interval: Some(interval),
        err_estimate: None,
        stop: StopReason::FixedM,
        params: Some(*params),
    })
}

pub fn logm_de_adaptive(a: &Matrix, cfg: &ToleranceConfig, mode: ParamMode) -> Result<AdaptiveReport> {
    if a.is_identity() {
        return Ok(AdaptiveReport {
            levels: Vec::new(),
            result: LogmResult::identity(a.n(), StopReason::Converged),
        });
    }
    let params = SpectralParams::estimate(a, mode)?;
    logm_de_adaptive_with_params(a, cfg, &params)
}

pub fn logm_de_adaptive_with_params(
    a: &Matrix,
    cfg: &ToleranceConfig,
    params: &SpectralParams,
) -> Result<AdaptiveReport> {
    check_config(cfg)?;
    if a.is_identity() {
        return Ok(AdaptiveReport {
            levels: Vec::new(),
            result: LogmResult::identity(a.n(), StopReason::Converged),
        });
    }
    let start = Instant::now();
    let interval = select_interval(params, cfg.eps, SMode::Linearized)?;
    let mut state = trapezoid_de(a, interval.l, interval.r, cfg.m0)?;
    let mut levels = vec![Level {
        m: state.m,
        evals: state.evals,
        estimate: None,
        elapsed: start.elapsed(),
    }];
    let mut estimate = None;
    let stop = loop {
        if 2 * state.m - 1 > cfg.max_evals {
            break StopReason::EvalLimit;
        }
        let next = refine(&state, a)?;
        let est = (&next.t - &state.t).frobenius_norm() / (3.0 * params.theta);
        state = next;
        estimate = Some(est);
        levels.push(Level {
            m: state.m,
            evals: state.evals,
            estimate,
            elapsed: start.elapsed(),
        });
        if est <= cfg.zeta {
            break StopReason::Converged;
        }
    };
    Ok(AdaptiveReport {
        levels,
        result: LogmResult {
            x: &a.shifted(-1.0) * &state.t,
            evals: state.evals,
            interval: Some(interval),
            err_estimate: estimate,
            stop,
            params: Some(*params),
        },
    })
}

/// `log A` with the `m`-node Gauss–Legendre rule on `[−1, 1]`.
pub fn logm_gl(a: &Matrix, m: usize) -> Result<LogmResult> {
    if a.is_identity() {
        return Ok(LogmResult::identity(a.n(), StopReason::FixedM));
    }
    let g = gl_sum(a, &gl_nodes(m)?)?;
    Ok(LogmResult {
        x: &a.shifted(-1.0) * &g,
        evals: m,
        interval: None,
        err_estimate: None,
        stop: StopReason::FixedM,
        params: None,
    })
}

pub fn logm_gl_adaptive(a: &Matrix, cfg: &ToleranceConfig, mode: ParamMode) -> Result<AdaptiveReport> {
    if a.is_identity() {
        return Ok(AdaptiveReport {
            levels: Vec::new(),
            result: LogmResult::identity(a.n(), StopReason::Converged),
        });
    }
    let params = SpectralParams::estimate(a, mode)?;
    logm_gl_adaptive_with_params(a, cfg, &params)
}

pub fn logm_gl_adaptive_with_params(
    a: &Matrix,
    cfg: &ToleranceConfig,
    params: &SpectralParams,
) -> Result<AdaptiveReport> {
    check_config(cfg)?;
    if a.is_identity() {
        return Ok(AdaptiveReport {
            levels: Vec::new(),
            result: LogmResult::identity(a.n(), StopReason::Converged),
        });
    }
    let start = Instant::now();
    let mut m = cfg.m0;
    let mut g = gl_sum(a, &gl_nodes(m)?)?;
    let mut evals = m;
    let mut levels = vec![Level {
        m,
        evals,
        estimate: None,
        elapsed: start.elapsed(),
    }];
    let mut estimate = None;
    let stop = loop {
        let next_m = 2 * m;
        if evals + next_m > cfg.max_evals {
            break StopReason::EvalLimit;
        }
        let next = gl_sum(a, &gl_nodes(next_m)?)?;
        let est = (&next - &g).frobenius_norm() / params.theta;
        m = next_m;
        evals += m;
        g = next;
        estimate = Some(est);
        levels.push(Level {
            m,
            evals,
            estimate,
            elapsed: start.elapsed(),
        });
        if est <= cfg.zeta {
            break StopReason::Converged;
        }
    };
    Ok(AdaptiveReport {
        levels,
        result: LogmResult {
            x: &a.shifted(-1.0) * &g,
            evals,
            interval: None,
            err_estimate: estimate,
            stop,
            params: Some(*params),
        },
    })
}

fn check_config(cfg: &ToleranceConfig) -> Result<()> {
    ToleranceConfig::new(cfg.eps, cfg.zeta, cfg.m0, cfg.max_evals).map(|_| ())
}

#[derive(Clone, Debug)]
pub struct ActionResult {
    /// Approximation of `log(A)·v`.
    pub y: Vec<f64>,
    /// Linear solves performed.
    pub evals: usize,
    pub interval: Option<TruncationInterval>,
}

/// `log(A)·v` from the `m`-point DE rule: one solve per abscissa and a
/// single final multiply by `A − I`.
pub fn logm_action_de(
    a: &Matrix,
    v: &[f64],
    m: usize,
    eps: f64,
    mode: ParamMode,
) -> Result<ActionResult> {
    let n = a.n();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    if a.is_identity() {
        return Ok(ActionResult {
            y: vec![0.0; n],
            evals: 0,
            interval: None,
        });
    }
    if m < 2 {
        return Err(Error::PreconditionViolated(format!("m must be >= 2, got {m}")));
    }
    let params = SpectralParams::estimate(a, mode)?;
    let interval = select_interval(&params, eps, SMode::Linearized)?;
    let (l, r) = (interval.l, interval.r);
    let h = (r - l) / (m - 1) as f64;

    let mut ends = f_de_action(l, a, v)?;
    for (e, x) in ends.iter_mut().zip(f_de_action(r, a, v)?) {
        *e += x;
    }
    let interior: Vec<f64> = (1..m - 1).map(|i| l + i as f64 * h).collect();
    let mut sum = vec![0.0; n];
    for_each_ordered(
        &interior,
        |&x| f_de_action(x, a, v),
        |y| sum.iter_mut().zip(y).for_each(|(s, yi)| *s += yi),
    )?;
    let t: Vec<f64> = ends
        .iter()
        .zip(&sum)
        .map(|(e, s)| 0.5 * h * e + h * s)
        .collect();
    Ok(ActionResult {
        y: a.shifted(-1.0).matvec(&t),
        evals: m,
        interval: Some(interval),
    })
}
