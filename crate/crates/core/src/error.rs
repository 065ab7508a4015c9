use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular to working precision (pivot {pivot:e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {smallest:e})")]
    NotSpd { smallest: f64 },
    #[error("overflow in {0}")]
    Overflow(&'static str),
    #[error("spectrum gives a zero lower bound on ||log A||")]
    DegenerateSpectrum,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no root of the interval equation in the bracket")]
    NoRoot,
    #[error("A equals the identity")]
    AIsIdentity,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid matrix spec '{spec}': {msg}")]
    BadSpec { spec: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
