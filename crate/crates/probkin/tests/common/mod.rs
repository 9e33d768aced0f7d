//! Random-data generators shared by the integration tests. Seeding honors
//! `PROBKIN_SEED` so failures replay deterministically.
#![allow(dead_code)] // each test target uses its own subset

use ndarray::Array2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use probkin::numerics::{dagger, hermitian_eigen, mat_exp, CMatrix, C64};
use probkin::qubit_map::ProbTriple;

pub fn test_rng() -> ChaCha8Rng {
    let seed = std::env::var("PROBKIN_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(0x70726f626b696e);
    ChaCha8Rng::seed_from_u64(seed)
}

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

pub fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let mut m: CMatrix = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    m
}

pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let h = random_hermitian(rng, n);
    mat_exp(&h.mapv(|z| z * C64::new(0.0, -1.0))).expect("square input")
}

/// Uniform direction, cube-root radius: uniform over the admissible ball.
pub fn random_admissible(rng: &mut ChaCha8Rng) -> ProbTriple {
    let cos_theta = rng.gen_range(-1.0..1.0f64);
    let sin_theta = (1.0 - cos_theta * cos_theta).sqrt();
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let radius = 0.5 * rng.gen_range(0.0..1.0f64).cbrt();
    ProbTriple::new(
        0.5 + radius * sin_theta * phi.cos(),
        0.5 + radius * sin_theta * phi.sin(),
        0.5 + radius * cos_theta,
    )
    .expect("point inside the ball")
}

/// Random valid Kraus set: raw matrices right-multiplied by
/// `(sum A^dag A)^{-1/2}`.
pub fn random_kraus_set(rng: &mut ChaCha8Rng, count: usize) -> Vec<CMatrix> {
    let raw: Vec<CMatrix> = (0..count).map(|_| random_complex(rng, 2)).collect();
    let mut total: CMatrix = Array2::zeros((2, 2));
    for a in &raw {
        total += &dagger(a).dot(a);
    }
    let (vals, vecs) = hermitian_eigen(&total).expect("Hermitian by construction");
    let mut inv_sqrt: CMatrix = Array2::zeros((2, 2));
    for i in 0..2 {
        inv_sqrt[(i, i)] = C64::new(1.0 / vals[i].sqrt(), 0.0);
    }
    let t_inv_sqrt = vecs.dot(&inv_sqrt).dot(&dagger(&vecs));
    raw.iter().map(|a| a.dot(&t_inv_sqrt)).collect()
}

/// Random positive unit-trace matrix `G G^dag / Tr`.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = random_complex(rng, n);
    let gg = g.dot(&dagger(&g));
    let tr: C64 = gg.diag().sum();
    gg.mapv(|z| z / tr.re)
}
