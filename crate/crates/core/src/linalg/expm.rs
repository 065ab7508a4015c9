//! Matrix exponential by scaling and squaring with a degree-20 Taylor
//! polynomial. Only used to check logarithms through `exp(log A) = A`.

use super::Matrix;
use crate::error::{Error, Result};

const TAYLOR_DEGREE: usize = 20;
const OVERFLOW_LIMIT: f64 = 1e300;

pub fn expm(x: &Matrix) -> Result<Matrix> {
    let n = x.n();
    let norm = x.norm1();
    // ‖X / 2^σ‖₁ ≤ 1/2
    let sigma = if norm > 0.0 {
        (norm.log2().ceil() as i64 + 1).max(0) as i32
    } else {
        0
    };
    let scaled = x.scaled(2f64.powi(-sigma));

    // Horner: I + X(I + X/2(I + X/3(...)))
    let mut p = Matrix::identity(n);
    for k in (1..=TAYLOR_DEGREE).rev() {
        p = (&scaled * &p).scaled(1.0 / k as f64).shifted(1.0);
    }
    for _ in 0..sigma {
        p = &p * &p;
        if !(p.max_abs() <= OVERFLOW_LIMIT) {
            return Err(Error::Overflow("expm squaring"));
        }
    }
    Ok(p)
}
