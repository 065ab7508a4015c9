//! Dense linear algebra kernels.

mod eig;
mod expm;
mod lu;
mod matrix;
mod spectral;

pub use eig::{eig_logm_spd, sym_eig, SymEig};
pub use expm::expm;
pub use lu::{inverse, lu_solve, lu_solve_vec, Lu, PIVOT_DROP_TOL};
pub use matrix::{dot, norm2, Matrix};
pub use spectral::{
    inverse_two_norm, spectral_radius, two_norm, ParamMode, RadiusEstimate, SpectralParams,
    APPROX_TOL,
};
