//! Convergence and adaptive comparison studies.
//!
//! Every matrix is scaled to `ρ(Ã) = 10` first. Errors are relative
//! Frobenius errors against the eigen-logarithm for SPD matrices and against
//! a 3841-point DE result otherwise.

use std::io::Write;

use crate::algorithms::{
    logm_de_adaptive_with_params, logm_de_with_params, logm_gl, logm_gl_adaptive_with_params,
    StopReason,
};
use crate::error::{Error, Result};
use crate::linalg::{eig_logm_spd, Matrix, ParamMode, SpectralParams};
use crate::testmats::{precondition_scale, MatrixSpec};
use crate::truncation::{ToleranceConfig, DE_MAX_EVALS, GL_MAX_EVALS};

/// Abscissas of the DE self-reference for nonsymmetric matrices.
pub const REFERENCE_M: usize = 3841;

/// `2⁻⁵³`, the interval tolerance of fixed-`m` DE runs.
pub const EPS_MACHINE: f64 = 1.0 / 9_007_199_254_740_992.0;

pub const DEFAULT_ZETAS: [f64; 2] = [1e-8, 1e-11];

/// Default `m` grid of the convergence study: the DE refinement counts
/// `16·2ᵏ + 1`, powers of two, and the GL totals of the adaptive runs.
pub fn default_m_list() -> Vec<usize> {
    vec![
        8, 16, 17, 32, 33, 48, 61, 64, 65, 96, 112, 121, 128, 129, 241, 256, 257, 481, 496, 512,
        513, 961, 1008, 1024, 1025,
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReferenceKind {
    Eigen,
    De,
}

impl ReferenceKind {
    pub fn label(self) -> String {
        match self {
            ReferenceKind::Eigen => "eig".to_string(),
            ReferenceKind::De => format!("de:{REFERENCE_M}"),
        }
    }
}

/// A scaled matrix with its parameters and reference logarithm.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub name: String,
    pub a: Matrix,
    pub scale: f64,
    pub params: SpectralParams,
    pub reference: Matrix,
    pub reference_kind: ReferenceKind,
}

impl Prepared {
    pub fn rel_err(&self, x: &Matrix) -> f64 {
        (x - &self.reference).frobenius_norm() / self.reference.frobenius_norm()
    }
}

/// Scales with the exact spectral radius, estimates parameters in `mode`
/// and computes the reference from exact parameters.
pub fn prepare(spec: &MatrixSpec, mode: ParamMode) -> Result<Prepared> {
    let raw = spec.build()?;
    let (a, scale) = precondition_scale(&raw, ParamMode::Exact)?;
    let exact = SpectralParams::estimate(&a, ParamMode::Exact)?;
    let params = if mode == ParamMode::Exact {
        exact
    } else {
        SpectralParams::estimate(&a, mode)?
    };
    let (reference, reference_kind) = if exact.spd {
        (eig_logm_spd(&a)?, ReferenceKind::Eigen)
    } else {
        let r = logm_de_with_params(&a, REFERENCE_M, EPS_MACHINE, &exact)?;
        (r.x, ReferenceKind::De)
    };
    Ok(Prepared {
        name: spec.name(),
        a,
        scale,
        params,
        reference,
        reference_kind,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    De,
    Gl,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::De => "de",
            Method::Gl => "gl",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub matrix: String,
    pub method: Method,
    pub m: usize,
    /// `None` when the computation failed.
    pub rel_err_fro: Option<f64>,
}

pub fn convergence_study(p: &Prepared, m_list: &[usize], methods: &[Method]) -> Vec<ConvergenceRow> {
    let mut rows = Vec::with_capacity(m_list.len() * methods.len());
    for &method in methods {
        for &m in m_list {
            let x = match method {
                Method::De => logm_de_with_params(&p.a, m, EPS_MACHINE, &p.params),
                Method::Gl => logm_gl(&p.a, m),
            };
            rows.push(ConvergenceRow {
                matrix: p.name.clone(),
                method,
                m,
                rel_err_fro: x.ok().map(|r| p.rel_err(&r.x)),
            });
        }
    }
    rows
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    DeAdaptive,
    GlAdaptive,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::DeAdaptive => "de-adaptive",
            Algorithm::GlAdaptive => "gl-adaptive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveRow {
    pub matrix: String,
    pub algorithm: Algorithm,
    pub zeta: f64,
    pub evals: Option<usize>,
    pub rel_err_fro: Option<f64>,
    /// `converged`, `eval_limit` or `error`.
    pub stop: String,
}

impl AdaptiveRow {
    pub fn converged(&self) -> bool {
        self.stop == StopReason::Converged.as_str()
    }
}

/// One adaptive run with `m0 = 16`, `ε = ζ` and the default evaluation limits.
pub fn adaptive_run(p: &Prepared, algorithm: Algorithm, zeta: f64) -> AdaptiveRow {
    let result = ToleranceConfig::new(
        zeta,
        zeta,
        16,
        match algorithm {
            Algorithm::DeAdaptive => DE_MAX_EVALS,
            Algorithm::GlAdaptive => GL_MAX_EVALS,
        },
    )
    .and_then(|cfg| match algorithm {
        Algorithm::DeAdaptive => logm_de_adaptive_with_params(&p.a, &cfg, &p.params),
        Algorithm::GlAdaptive => logm_gl_adaptive_with_params(&p.a, &cfg, &p.params),
    });
    match result {
        Ok(rep) => AdaptiveRow {
            matrix: p.name.clone(),
            algorithm,
            zeta,
            evals: Some(rep.result.evals),
            rel_err_fro: Some(p.rel_err(&rep.result.x)),
            stop: rep.result.stop.as_str().to_string(),
        },
        Err(_) => AdaptiveRow {
            matrix: p.name.clone(),
            algorithm,
            zeta,
            evals: None,
            rel_err_fro: None,
            stop: "error".to_string(),
        },
    }
}

/// Rows ordered matrix, algorithm (DE first), then `ζ`.
pub fn adaptive_study(prepared: &[Prepared], zetas: &[f64]) -> Vec<AdaptiveRow> {
    let mut rows = Vec::new();
    for p in prepared {
        for alg in [Algorithm::DeAdaptive, Algorithm::GlAdaptive] {
            for &z in zetas {
                rows.push(adaptive_run(p, alg, z));
            }
        }
    }
    rows
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_else(|| "NA".to_string())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

pub fn write_convergence_csv<W: Write>(
    mut w: W,
    reference: ReferenceKind,
    rows: &[ConvergenceRow],
) -> Result<()> {
    writeln!(w, "# reference={}", reference.label())?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["matrix", "method", "m", "rel_err_fro"]).map_err(csv_err)?;
    for r in rows {
        csv.write_record([
            r.matrix.clone(),
            r.method.as_str().to_string(),
            r.m.to_string(),
            opt_float(r.rel_err_fro),
        ])
        .map_err(csv_err)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_adaptive_csv<W: Write>(w: W, rows: &[AdaptiveRow]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["matrix", "algorithm", "zeta", "evals", "rel_err_fro", "stop"])
        .map_err(csv_err)?;
    for r in rows {
        csv.write_record([
            r.matrix.clone(),
            r.algorithm.as_str().to_string(),
            format!("{:e}", r.zeta),
            r.evals.map(|e| e.to_string()).unwrap_or_else(|| "NA".to_string()),
            opt_float(r.rel_err_fro),
            r.stop.clone(),
        ])
        .map_err(csv_err)?;
    }
    csv.flush()?;
    Ok(())
}
