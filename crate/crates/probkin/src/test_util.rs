//! Random-data generators shared by the unit tests.
//!
//! Seeding honors the `PROBKIN_SEED` environment variable so failing cases
//! can be replayed; the default seed keeps regular runs deterministic.

use ndarray::Array2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::numerics::{CMatrix, C64};

pub fn test_rng() -> ChaCha8Rng {
    let seed = std::env::var("PROBKIN_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(0x70726f626b696e);
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// Random Hermitian matrix with entries in [-1, 1].
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let mut m: CMatrix = Array2::zeros((n, n));
    for i in 0..n {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..n {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random complex matrix with entries in the unit square.
pub fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let mut m: CMatrix = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    m
}

/// Random quantum-admissible probability triple: uniform direction, radius
/// biased toward the boundary of the ball.
pub fn random_admissible(rng: &mut ChaCha8Rng) -> crate::qubit_map::ProbTriple {
    let cos_theta = rng.gen_range(-1.0..1.0f64);
    let sin_theta = (1.0 - cos_theta * cos_theta).sqrt();
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let radius = 0.5 * rng.gen_range(0.0..1.0f64).cbrt();
    crate::qubit_map::ProbTriple::new(
        0.5 + radius * sin_theta * phi.cos(),
        0.5 + radius * sin_theta * phi.sin(),
        0.5 + radius * cos_theta,
    )
    .expect("point inside the ball")
}

/// Random 2x2 unitary, `exp(-i H)` of a random Hermitian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let h = random_hermitian(rng, n);
    crate::numerics::mat_exp(&h.mapv(|z| z * C64::new(0.0, -1.0))).expect("square input")
}
