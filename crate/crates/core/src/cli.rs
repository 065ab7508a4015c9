//! Command-line front end.
//!
//! Exit codes: 0 success, 2 adaptive run hit its evaluation limit, 1 runtime
//! error, 64 usage error, 65 malformed input (bad spec string or Matrix
//! Market file). `QUADLOG_THREADS` caps the worker pool (`0` = sequential).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algorithms::{
    logm_de, logm_de_adaptive, logm_gl, logm_gl_adaptive, LogmResult, StopReason,
};
use crate::error::Error;
use crate::linalg::{Matrix, ParamMode, APPROX_TOL};
use crate::study::{
    adaptive_study, convergence_study, default_m_list, prepare, write_adaptive_csv,
    write_convergence_csv, Method, DEFAULT_ZETAS, EPS_MACHINE,
};
use crate::testmats::{format_matrix_market, precondition_scale, MatrixKind, MatrixSpec};
use crate::truncation::{ToleranceConfig, DE_MAX_EVALS, GL_MAX_EVALS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_EVAL_LIMIT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

pub const THREADS_ENV: &str = "QUADLOG_THREADS";

#[derive(Parser, Debug)]
#[command(name = "quadlog", version, about = "Principal matrix logarithm by quadrature")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute log(A) and write it in Matrix Market array format.
    Logm(LogmArgs),
    /// Error studies over the test corpus.
    #[command(subcommand)]
    Study(StudyCommand),
    /// Write a generated matrix in Matrix Market array format.
    Genmat(GenmatArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    De,
    Gl,
    DeAdaptive,
    GlAdaptive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ParamModeArg {
    Exact,
    Approximate,
}

impl ParamModeArg {
    fn mode(self) -> ParamMode {
        match self {
            ParamModeArg::Exact => ParamMode::Exact,
            ParamModeArg::Approximate => ParamMode::Approximate { tol: APPROX_TOL },
        }
    }
}

#[derive(Args, Debug)]
struct LogmArgs {
    /// Matrix Market file or generator spec (e.g. spd:n=50,kappa=1e4,seed=7).
    #[arg(long)]
    input: String,
    #[arg(long, value_enum, default_value = "de-adaptive")]
    method: MethodArg,
    /// Abscissas for the fixed-m methods.
    #[arg(long)]
    m: Option<usize>,
    /// Interval tolerance; defaults to 2^-53 for `de`, to zeta for `de-adaptive`.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    zeta: f64,
    #[arg(long, default_value_t = 16)]
    m0: usize,
    /// Defaults to 1921 (de-adaptive) or 2032 (gl-adaptive).
    #[arg(long)]
    max_evals: Option<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    param_mode: ParamModeArg,
    /// Skip the 10/rho(A) scaling.
    #[arg(long)]
    no_scale: bool,
    /// Output file for log(A); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output file for the key=value stats; stderr when omitted.
    #[arg(long)]
    stats_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum StudyCommand {
    /// Relative error against m for fixed-m DE and GL.
    Convergence(ConvergenceArgs),
    /// Evaluation counts and errors of the adaptive algorithms.
    Adaptive(AdaptiveArgs),
}

#[derive(Args, Debug)]
struct ConvergenceArgs {
    /// Matrix spec or Matrix Market file.
    #[arg(long)]
    matrix: String,
    #[arg(long, value_delimiter = ',')]
    m_list: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', default_values = ["de", "gl"])]
    methods: Vec<String>,
    #[arg(long, value_enum, default_value = "exact")]
    param_mode: ParamModeArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AdaptiveArgs {
    /// Matrix specs; defaults to the built-in corpus plus any file matrices
    /// found in $QUADLOG_DATA_DIR.
    #[arg(long, value_delimiter = ',')]
    matrices: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    zetas: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "exact")]
    param_mode: ParamModeArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenmatArgs {
    #[arg(long)]
    spec: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::BadSpec { .. } | Error::DimensionMismatch { .. } => EXIT_DATA,
            _ => EXIT_ERROR,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(f) = configure_threads() {
        eprintln!("quadlog: {}", f.message);
        return f.code;
    }
    let outcome = match cli.command {
        Command::Logm(a) => cmd_logm(&a),
        Command::Study(StudyCommand::Convergence(a)) => cmd_study_convergence(&a),
        Command::Study(StudyCommand::Adaptive(a)) => cmd_study_adaptive(&a),
        Command::Genmat(a) => cmd_genmat(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("quadlog: {}", f.message);
            f.code
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Some(raw) = std::env::var_os(THREADS_ENV) else {
        return Ok(());
    };
    let raw = raw.to_string_lossy();
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| usage(format!("{THREADS_ENV} must be a non-negative integer, got '{raw}'")))?;
    // A pool built earlier in the same process keeps its size.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global();
    Ok(())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn parse_spec(s: &str) -> Result<MatrixSpec, Failure> {
    Ok(s.parse::<MatrixSpec>()?)
}

fn cmd_logm(args: &LogmArgs) -> Result<i32, Failure> {
    let spec = parse_spec(&args.input)?;
    let a = spec.build()?;
    let mode = args.param_mode.mode();
    let start = Instant::now();

    let (scaled, scale) = if args.no_scale || a.is_identity() {
        (a.clone(), 1.0)
    } else {
        precondition_scale(&a, mode)?
    };
    let fixed_m = || args.m.ok_or_else(|| usage("--m is required for fixed-m methods"));
    let max_evals = |default| args.max_evals.unwrap_or(default);
    let (result, level_count): (LogmResult, usize) = match args.method {
        MethodArg::De => {
            let eps = args.eps.unwrap_or(EPS_MACHINE);
            (logm_de(&scaled, fixed_m()?, eps, mode)?, 1)
        }
        MethodArg::Gl => (logm_gl(&scaled, fixed_m()?)?, 1),
        MethodArg::DeAdaptive => {
            let cfg = ToleranceConfig::new(
                args.eps.unwrap_or(args.zeta),
                args.zeta,
                args.m0,
                max_evals(DE_MAX_EVALS),
            )?;
            let rep = logm_de_adaptive(&scaled, &cfg, mode)?;
            (rep.result, rep.levels.len())
        }
        MethodArg::GlAdaptive => {
            let cfg = ToleranceConfig::new(
                args.eps.unwrap_or(args.zeta),
                args.zeta,
                args.m0,
                max_evals(GL_MAX_EVALS),
            )?;
            let rep = logm_gl_adaptive(&scaled, &cfg, mode)?;
            (rep.result, rep.levels.len())
        }
    };
    // log A = log Ã − log(scale)·I
    let x = if scale == 1.0 {
        result.x.clone()
    } else {
        result.x.shifted(-scale.ln())
    };
    let wall = start.elapsed().as_secs_f64();

    let mut out = output(args.out.as_deref())?;
    out.write_all(format_matrix_market(&x).as_bytes())?;
    out.flush()?;

    let stats = stats_record(&spec, &x, args.method, &result, scale, level_count, wall);
    match &args.stats_out {
        Some(p) => std::fs::write(p, stats)?,
        None => eprint!("{stats}"),
    }
    Ok(match result.stop {
        StopReason::EvalLimit => EXIT_EVAL_LIMIT,
        _ => EXIT_OK,
    })
}

fn stats_record(
    spec: &MatrixSpec,
    x: &Matrix,
    method: MethodArg,
    r: &LogmResult,
    scale: f64,
    levels: usize,
    wall: f64,
) -> String {
    let method = method
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let na = || "NA".to_string();
    let mut s = String::new();
    let _ = writeln!(s, "matrix={}", spec.name());
    let _ = writeln!(s, "n={}", x.n());
    let _ = writeln!(s, "method={method}");
    let _ = writeln!(s, "evals={}", r.evals);
    let _ = writeln!(s, "levels={levels}");
    let _ = writeln!(s, "stop={}", r.stop);
    let _ = writeln!(s, "estimate={}", r.err_estimate.map(|e| format!("{e:e}")).unwrap_or_else(na));
    let iv = r.interval.as_ref();
    let _ = writeln!(s, "l={}", iv.map(|i| format!("{:e}", i.l)).unwrap_or_else(na));
    let _ = writeln!(s, "r={}", iv.map(|i| format!("{:e}", i.r)).unwrap_or_else(na));
    let _ = writeln!(s, "eps_effective={}", iv.map(|i| format!("{:e}", i.eps_effective)).unwrap_or_else(na));
    let _ = writeln!(s, "theta={}", r.params.map(|p| format!("{:e}", p.theta)).unwrap_or_else(na));
    let _ = writeln!(s, "scale={scale:e}");
    let _ = writeln!(s, "wall_time_s={wall:.6}");
    s
}

fn parse_methods(names: &[String]) -> Result<Vec<Method>, Failure> {
    names
        .iter()
        .map(|m| match m.trim() {
            "de" => Ok(Method::De),
            "gl" => Ok(Method::Gl),
            other => Err(usage(format!("unknown method '{other}' (expected de or gl)"))),
        })
        .collect()
}

fn cmd_study_convergence(args: &ConvergenceArgs) -> Result<i32, Failure> {
    let methods = parse_methods(&args.methods)?;
    let m_list = args.m_list.clone().unwrap_or_else(default_m_list);
    if let Some(&bad) = m_list.iter().find(|&&m| m < 1) {
        return Err(usage(format!("m values must be >= 1, got {bad}")));
    }
    let spec = parse_spec(&args.matrix)?;
    let p = prepare(&spec, args.param_mode.mode())?;
    let rows = convergence_study(&p, &m_list, &methods);
    let mut out = output(args.out.as_deref())?;
    write_convergence_csv(&mut out, p.reference_kind, &rows)?;
    out.flush()?;
    Ok(EXIT_OK)
}

fn default_adaptive_specs() -> Vec<MatrixSpec> {
    MatrixSpec::corpus()
        .into_iter()
        .filter(|s| match &s.kind {
            MatrixKind::File(p) => p.exists(),
            _ => true,
        })
        .collect()
}

fn cmd_study_adaptive(args: &AdaptiveArgs) -> Result<i32, Failure> {
    let specs = match &args.matrices {
        Some(list) => list.iter().map(|s| parse_spec(s)).collect::<Result<Vec<_>, _>>()?,
        None => default_adaptive_specs(),
    };
    let zetas = args.zetas.clone().unwrap_or_else(|| DEFAULT_ZETAS.to_vec());
    let mode = args.param_mode.mode();
    let prepared = specs
        .iter()
        .map(|s| prepare(s, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = adaptive_study(&prepared, &zetas);
    let mut out = output(args.out.as_deref())?;
    write_adaptive_csv(&mut out, &rows)?;
    out.flush()?;
    Ok(EXIT_OK)
}

fn cmd_genmat(args: &GenmatArgs) -> Result<i32, Failure> {
    let a = parse_spec(&args.spec)?.build()?;
    let mut out = output(args.out.as_deref())?;
    out.write_all(format_matrix_market(&a).as_bytes())?;
    out.flush()?;
    Ok(EXIT_OK)
}
