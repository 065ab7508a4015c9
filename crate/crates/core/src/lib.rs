//! Principal matrix logarithm by numerical quadrature.
//!
//! The logarithm is computed from the integral representation
//! `log(A) = (A - I) ∫₀¹ [t(A - I) + I]⁻¹ dt`, either with Gauss–Legendre
//! quadrature on `[-1, 1]` or with the double-exponential (tanh-sinh)
//! trapezoidal rule on a finite interval `[l, r]` chosen from closed-form
//! tail bounds, so that the relative truncation error stays below a
//! requested tolerance.
//!
//! Module map:
//!
//! * [`linalg`]: dense matrices, LU, Jacobi eigensolver, norm and spectral
//!   radius estimation, `expm` and the SPD eigen-logarithm used as oracles.
//! * [`truncation`]: tail bounds, the `θ` lower bound and interval selection.
//! * [`quadrature`]: integrands, the DE trapezoid with step halving and
//!   Gauss–Legendre rules.
//! * [`algorithms`]: fixed-`m` DE, adaptive DE, fixed and adaptive GL, and the
//!   `log(A)·v` action.
//! * [`testmats`]: test matrix generators, Matrix Market I/O and scaling.
//! * [`study`]: convergence and adaptive comparison studies used by the CLI.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod study;
pub mod testmats;
pub mod truncation;

pub use error::{Error, Result};
pub use linalg::{Matrix, ParamMode, SpectralParams};
