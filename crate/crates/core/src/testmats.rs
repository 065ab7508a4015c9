//! Test matrices: seeded SPD matrices with a prescribed spectrum, the
//! classic `parter`, `frank` and `vand` matrices, Matrix Market I/O and the
//! `10/ρ(A)` scaling applied before every experiment.
//!
//! Random matrices come from `ChaCha8Rng::seed_from_u64(seed)`, so a spec
//! string such as `spd:n=50,kappa=1e4,seed=7` names the same matrix on
//! every platform.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{spectral_radius, Matrix, ParamMode};

/// Matrices of the corpus that are only available as files.
pub const FILE_MATRICES: [&str; 3] = ["bcsstk02", "bcsstk03", "ck104"];

/// Directory searched for `<name>.mtx` when a spec names a file matrix.
pub const DATA_DIR_ENV: &str = "QUADLOG_DATA_DIR";

/// `Q·D·Qᵀ` with `dᵢ = κ^{−1/2}·κ^{(i−1)/(n−1)}` and `Q` the orthogonal
/// factor of a seeded uniform `[0, 1)` matrix.
pub fn gen_spd(n: usize, kappa: f64, seed: u64) -> Matrix {
    assert!(n >= 2, "gen_spd needs n >= 2");
    let d = geometric_spectrum(n, kappa);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = nalgebra::DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen::<f64>());
    let q = m.qr().q();
    let half = Matrix::from_fn(n, |i, j| {
        (0..n).map(|k| q[(i, k)] * d[k] * q[(j, k)]).sum()
    });
    // Mirror the upper triangle so the result is exactly symmetric.
    Matrix::from_fn(n, |i, j| if i <= j { half[(i, j)] } else { half[(j, i)] })
}

/// `κ^{−1/2}·κ^{(i−1)/(n−1)}`, `i = 1..n`.
pub fn geometric_spectrum(n: usize, kappa: f64) -> Vec<f64> {
    (0..n)
        .map(|i| kappa.powf(-0.5) * kappa.powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// `Aᵢⱼ = 1/(i − j + 1/2)`.
pub fn gen_parter(n: usize) -> Matrix {
    Matrix::from_fn(n, |i, j| 1.0 / (i as f64 - j as f64 + 0.5))
}

/// Upper Hessenberg with `Aᵢⱼ = n + 1 − max(i, j)` (1-based) for `j ≥ i − 1`.
pub fn gen_frank(n: usize) -> Matrix {
    Matrix::from_fn(n, |i, j| {
        if j + 1 >= i {
            (n - i.max(j)) as f64
        } else {
            0.0
        }
    })
}

/// Vandermonde matrix on the points `1, 2, …, n`: `Aᵢⱼ = i^{j−1}`.
pub fn gen_vand(n: usize) -> Matrix {
    Matrix::from_fn(n, |i, j| ((i + 1) as f64).powi(j as i32))
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixKind {
    Spd { kappa: f64 },
    Parter,
    Frank,
    Vand,
    Identity,
    File(PathBuf),
}

/// A named recipe for a test matrix.
///
/// Accepted forms:
///
/// * `spd:n=50,kappa=1e4,seed=7`, `parter:n=10`, `frank:n=10`, `vand:n=10`,
///   `identity:n=4`;
/// * the corpus aliases `spd1`, `spd2`, `spd3` (`n = 50`, `κ = 1e1, 1e4, 1e7`,
///   seed 1) and `parter`, `frank`, `vand` (`n = 10`);
/// * `bcsstk02`, `bcsstk03`, `ck104`, loaded from `$QUADLOG_DATA_DIR`;
/// * any other string is taken as a path to a Matrix Market file.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSpec {
    pub kind: MatrixKind,
    /// Ignored for files.
    pub n: usize,
    pub seed: u64,
    label: Option<String>,
}

impl MatrixSpec {
    pub fn spd(n: usize, kappa: f64, seed: u64) -> Self {
        Self {
            kind: MatrixKind::Spd { kappa },
            n,
            seed,
            label: None,
        }
    }

    pub fn file(path: impl Into<PathBuf>) -> Self {
        Self {
            kind: MatrixKind::File(path.into()),
            n: 0,
            seed: 0,
            label: None,
        }
    }

    fn simple(kind: MatrixKind, n: usize) -> Self {
        Self {
            kind,
            n,
            seed: 0,
            label: None,
        }
    }

    fn labelled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    /// Short name used in study output.
    pub fn name(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match &self.kind {
            MatrixKind::Spd { kappa } => format!("spd(n={},kappa={:e},seed={})", self.n, kappa, self.seed),
            MatrixKind::Parter => format!("parter({})", self.n),
            MatrixKind::Frank => format!("frank({})", self.n),
            MatrixKind::Vand => format!("vand({})", self.n),
            MatrixKind::Identity => format!("identity({})", self.n),
            MatrixKind::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
        }
    }

    pub fn build(&self) -> Result<Matrix> {
        Ok(match &self.kind {
            MatrixKind::Spd { kappa } => gen_spd(self.n, *kappa, self.seed),
            MatrixKind::Parter => gen_parter(self.n),
            MatrixKind::Frank => gen_frank(self.n),
            MatrixKind::Vand => gen_vand(self.n),
            MatrixKind::Identity => Matrix::identity(self.n),
            MatrixKind::File(p) => read_matrix_market(p)?,
        })
    }

    /// The paper's corpus in table order.
    pub fn corpus() -> Vec<MatrixSpec> {
        ["spd1", "spd2", "spd3", "parter", "frank", "vand", "bcsstk02", "bcsstk03", "ck104"]
            .iter()
            .map(|s| s.parse().expect("corpus names parse"))
            .collect()
    }

    /// Corpus members that can be built without external files.
    pub fn generated_corpus() -> Vec<MatrixSpec> {
        Self::corpus()
            .into_iter()
            .filter(|s| !matches!(s.kind, MatrixKind::File(_)))
            .collect()
    }
}

fn data_dir_path(name: &str) -> PathBuf {
    let dir = std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"));
    dir.join(format!("{name}.mtx"))
}

impl FromStr for MatrixSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = s.trim();
        let bad = |msg: &str| Error::BadSpec {
            spec: spec.to_string(),
            msg: msg.to_string(),
        };
        match spec {
            "spd1" => return Ok(Self::spd(50, 1e1, 1).labelled("SPD1")),
            "spd2" => return Ok(Self::spd(50, 1e4, 1).labelled("SPD2")),
            "spd3" => return Ok(Self::spd(50, 1e7, 1).labelled("SPD3")),
            "parter" => return Ok(Self::simple(MatrixKind::Parter, 10).labelled("parter")),
            "frank" => return Ok(Self::simple(MatrixKind::Frank, 10).labelled("frank")),
            "vand" => return Ok(Self::simple(MatrixKind::Vand, 10).labelled("vand")),
            _ => {}
        }
        if FILE_MATRICES.contains(&spec) {
            return Ok(Self::file(data_dir_path(spec)).labelled(spec));
        }
        let Some((kind, args)) = spec.split_once(':') else {
            return Ok(Self::file(spec));
        };
        let kind = kind.trim();
        if !["spd", "parter", "frank", "vand", "identity"].contains(&kind) {
            return Ok(Self::file(spec));
        }

        let mut n = None;
        let mut kappa = None;
        let mut seed = None;
        for part in args.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(&format!("expected key=value, got '{part}'")))?;
            let value = value.trim();
            match key.trim() {
                "n" => n = Some(value.parse::<usize>().map_err(|e| bad(&format!("n: {e}")))?),
                "kappa" if kind == "spd" => {
                    kappa = Some(value.parse::<f64>().map_err(|e| bad(&format!("kappa: {e}")))?)
                }
                "seed" if kind == "spd" => {
                    seed = Some(value.parse::<u64>().map_err(|e| bad(&format!("seed: {e}")))?)
                }
                other => return Err(bad(&format!("unknown key '{other}' for {kind}"))),
            }
        }
        let n = n.ok_or_else(|| bad("missing n"))?;
        let min_n = if kind == "identity" { 1 } else { 2 };
        if n < min_n {
            return Err(bad(&format!("n must be >= {min_n}")));
        }
        Ok(match kind {
            "spd" => {
                let kappa = kappa.ok_or_else(|| bad("missing kappa"))?;
                if !(kappa > 1.0) || !kappa.is_finite() {
                    return Err(bad("kappa must be a finite number > 1"));
                }
                Self::spd(n, kappa, seed.unwrap_or(0))
            }
            "parter" => Self::simple(MatrixKind::Parter, n),
            "frank" => Self::simple(MatrixKind::Frank, n),
            "vand" => Self::simple(MatrixKind::Vand, n),
            _ => Self::simple(MatrixKind::Identity, n),
        })
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Layout {
    Coordinate,
    Array,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<Matrix> {
    parse_matrix_market(&std::fs::read_to_string(path)?)
}

/// Parses the real `coordinate` and `array` Matrix Market variants, with
/// `general` or `symmetric` storage. Only square matrices are accepted.
pub fn parse_matrix_market(text: &str) -> Result<Matrix> {
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty file".into()))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(perr(hline, format!("bad header '{header}'")));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(perr(hline, format!("unsupported format '{other}'"))),
    };
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(perr(hline, format!("unsupported field '{}'", tokens[3])));
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(perr(hline, format!("unsupported symmetry '{other}'"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sline, size) = body.next().ok_or_else(|| perr(hline + 1, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| perr(sline, format!("bad size line: {e}")))?;
    let expected_len = if layout == Layout::Coordinate { 3 } else { 2 };
    if dims.len() != expected_len {
        return Err(perr(sline, format!("size line needs {expected_len} integers")));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if rows != cols {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: cols,
        });
    }
    if rows == 0 {
        return Err(perr(sline, "empty matrix".into()));
    }
    let n = rows;
    let mut a = Matrix::zeros(n);

    let parse_f = |line: usize, t: &str| {
        t.parse::<f64>()
            .map_err(|e| perr(line, format!("bad value '{t}': {e}")))
    };

    match layout {
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut count = 0;
            for (ln, l) in body {
                let t: Vec<&str> = l.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(perr(ln, "expected 'row col value'".into()));
                }
                let idx = |s: &str| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&k| (1..=n).contains(&k))
                        .ok_or_else(|| perr(ln, format!("index '{s}' outside 1..={n}")))
                };
                let (i, j) = (idx(t[0])? - 1, idx(t[1])? - 1);
                let v = parse_f(ln, t[2])?;
                if symmetric && j > i {
                    return Err(perr(ln, "symmetric storage must hold the lower triangle".into()));
                }
                a[(i, j)] += v;
                if symmetric && i != j {
                    a[(j, i)] += v;
                }
                count += 1;
            }
            if count != nnz {
                return Err(Error::DimensionMismatch {
                    expected: nnz,
                    found: count,
                });
            }
        }
        Layout::Array => {
            // Column-major; symmetric storage lists the lower triangle.
            let slots: Vec<(usize, usize)> = (0..n)
                .flat_map(|j| {
                    let start = if symmetric { j } else { 0 };
                    (start..n).map(move |i| (i, j))
                })
                .collect();
            let mut count = 0;
            for (ln, l) in body {
                for t in l.split_whitespace() {
                    let v = parse_f(ln, t)?;
                    let Some(&(i, j)) = slots.get(count) else {
                        return Err(perr(ln, "more values than the declared size".into()));
                    };
                    a[(i, j)] = v;
                    a[(j, i)] = if symmetric { v } else { a[(j, i)] };
                    count += 1;
                }
            }
            if count != slots.len() {
                return Err(Error::DimensionMismatch {
                    expected: slots.len(),
                    found: count,
                });
            }
        }
    }
    Ok(a)
}

/// Dense `array real general` text with 17 significant digits.
pub fn format_matrix_market(a: &Matrix) -> String {
    let n = a.n();
    let mut s = String::with_capacity(24 * n * n + 64);
    s.push_str("%%MatrixMarket matrix array real general\n");
    let _ = writeln!(s, "{n} {n}");
    for j in 0..n {
        for i in 0..n {
            let _ = writeln!(s, "{:.16e}", a[(i, j)]);
        }
    }
    s
}

pub fn write_matrix_market(path: impl AsRef<Path>, a: &Matrix) -> Result<()> {
    std::fs::write(path, format_matrix_market(a))?;
    Ok(())
}

/// `Ã = (10/ρ(A))·A`; returns `Ã` and the factor `10/ρ(A)`.
pub fn precondition_scale(a: &Matrix, mode: ParamMode) -> Result<(Matrix, f64)> {
    let rho = spectral_radius(a, mode)?.value;
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::PreconditionViolated(format!(
            "spectral radius must be positive, got {rho}"
        )));
    }
    let scale = 10.0 / rho;
    Ok((a.scaled(scale), scale))
}
