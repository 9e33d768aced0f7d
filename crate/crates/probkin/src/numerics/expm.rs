//! Matrix exponential by scaling-and-squaring with a truncated Taylor
//! series. Accurate to ~1e-12 for max-norm up to ~50, which covers every
//! propagator this crate builds.

use super::{all_finite, identity, max_norm, require_square, CMatrix};
use crate::error::{Error, Result};

/// `exp(a)` for a square complex matrix.
///
/// For anti-Hermitian `a` the result is unitary to ~1e-12.
pub fn mat_exp(a: &CMatrix) -> Result<CMatrix> {
    require_square(a)?;
    if !all_finite(a) {
        return Err(Error::NonFiniteEntry);
    }

    // Scale so the series argument has norm <= 1/2.
    let norm = max_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / 2f64.powi(squarings as i32));

    let n = a.nrows();
    let mut sum = identity(n);
    let mut term = identity(n);
    for k in 1..=64u32 {
        term = term.dot(&scaled).mapv(|z| z / f64::from(k));
        sum += &term;
        if max_norm(&term) < 1e-18 * max_norm(&sum).max(1.0) {
            break;
        }
    }

    let mut result = sum;
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Ok(result)
}
