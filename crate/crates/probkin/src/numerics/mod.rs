//! Dense complex linear algebra at small fixed sizes and a fixed-step ODE
//! integrator. Everything else in the crate builds on these primitives.
//!
//! Matrices are `ndarray::Array2<Complex64>` in row-major order; all
//! operations are pure functions and the values are freely sendable.

mod eigen;
mod expm;
mod ode;

pub use eigen::hermitian_eigen;
pub use expm::mat_exp;
pub use ode::{rk4_integrate, OdeState, Trajectory};

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Dense complex matrix, row-major.
pub type CMatrix = Array2<C64>;

/// Dense real vector.
pub type RVector = Array1<f64>;

/// Hermiticity tolerance accepted by operations that require `a == a^dag`.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Unitarity tolerance accepted by operations that require `u u^dag == 1`.
pub const UNITARITY_TOL: f64 = 1e-9;

pub fn identity(n: usize) -> CMatrix {
    Array2::from_diag_elem(n, C64::new(1.0, 0.0))
}

/// Pauli matrix sigma_1 (x).
pub fn sigma_x() -> CMatrix {
    complex_matrix(&[[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]])
}

/// Pauli matrix sigma_2 (y).
pub fn sigma_y() -> CMatrix {
    complex_matrix(&[[(0.0, 0.0), (0.0, -1.0)], [(0.0, 1.0), (0.0, 0.0)]])
}

/// Pauli matrix sigma_3 (z).
pub fn sigma_z() -> CMatrix {
    complex_matrix(&[[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]])
}

/// Spin-lowering operator `[[0,0],[1,0]]` in the basis where the first
/// basis vector is spin-up along z.
pub fn sigma_minus() -> CMatrix {
    complex_matrix(&[[(0.0, 0.0), (0.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]])
}

/// Spin-raising operator `[[0,1],[0,0]]`, the adjoint of [`sigma_minus`].
pub fn sigma_plus() -> CMatrix {
    complex_matrix(&[[(0.0, 0.0), (1.0, 0.0)], [(0.0, 0.0), (0.0, 0.0)]])
}

/// Builds a square matrix from rows of `(re, im)` pairs.
pub fn complex_matrix<const N: usize>(rows: &[[(f64, f64); N]]) -> CMatrix {
    let mut m = Array2::zeros((rows.len(), N));
    for (i, row) in rows.iter().enumerate() {
        for (j, &(re, im)) in row.iter().enumerate() {
            m[(i, j)] = C64::new(re, im);
        }
    }
    m
}

/// Conjugate transpose.
pub fn dagger(a: &CMatrix) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

/// Largest entry magnitude, the max-norm used by the tolerance checks.
pub fn max_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-norm of the difference of two equally shaped matrices.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Deviation from Hermiticity, `max |a - a^dag|`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    max_diff(a, &dagger(a))
}

/// Deviation from unitarity, `max |u u^dag - 1|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    max_diff(&u.dot(&dagger(u)), &identity(u.nrows()))
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diag().sum()
}

pub fn all_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Errors unless `a` is square.
pub fn require_square(a: &CMatrix) -> Result<usize> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok(rows)
}

/// Errors unless `a` is square and Hermitian within `tol`.
pub fn require_hermitian(a: &CMatrix, tol: f64) -> Result<usize> {
    let n = require_square(a)?;
    let defect = hermiticity_defect(a);
    if defect > tol {
        return Err(Error::NotHermitian { defect });
    }
    Ok(n)
}

/// Kronecker product `a (x) b`.
///
/// Entry `(a (x) b)[ia*rb + ib, ja*cb + jb] = a[ia, ja] * b[ib, jb]`, so
/// dimensions multiply and `(a (x) b)(c (x) d) = (ac) (x) (bd)` on
/// compatible shapes.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for ia in 0..ra {
        for ja in 0..ca {
            let aij = a[(ia, ja)];
            for ib in 0..rb {
                for jb in 0..cb {
                    out[(ia * rb + ib, ja * cb + jb)] = aij * b[(ib, jb)];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_identities() {
        let i2 = identity(2);
        assert_eq!(kron(&i2, &i2), identity(4));

        let d = complex_matrix(&[[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (2.0, 0.0)]]);
        let expect = Array2::from_diag(&ndarray::arr1(&[
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0),
            C64::new(2.0, 0.0),
        ]));
        assert_eq!(kron(&d, &i2), expect);
    }

    #[test]
    fn kron_sigma_z_squares() {
        // 4x4 expansion done by hand: diag(1, -1, -1, 1).
        let got = kron(&sigma_z(), &sigma_z());
        let expect = Array2::from_diag(&ndarray::arr1(&[
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(1.0, 0.0),
        ]));
        assert_eq!(got, expect);
    }

    #[test]
    fn kron_is_bilinear() {
        let a = sigma_x();
        let b = sigma_y();
        let two = C64::new(2.0, 0.0);
        let scaled = kron(&a.mapv(|z| z * two), &b);
        let reference = kron(&a, &b).mapv(|z| z * two);
        // Entries are exact in integer arithmetic.
        assert_eq!(scaled, reference);
    }

    #[test]
    fn kron_mixed_product() {
        let a = sigma_x();
        let b = sigma_y();
        let c = sigma_z();
        let d = sigma_x();
        let lhs = kron(&a, &b).dot(&kron(&c, &d));
        let rhs = kron(&a.dot(&c), &b.dot(&d));
        assert!(max_diff(&lhs, &rhs) < 1e-14);
    }

    #[test]
    fn hermiticity_and_unitarity_defects() {
        assert_eq!(hermiticity_defect(&sigma_y()), 0.0);
        assert_eq!(unitarity_defect(&sigma_x()), 0.0);
        let bad = complex_matrix(&[[(0.0, 0.0), (1.0, 0.0)], [(0.0, 0.0), (0.0, 0.0)]]);
        assert!(hermiticity_defect(&bad) > 0.9);
    }

    #[test]
    fn require_square_rejects_rectangular() {
        let rect: CMatrix = Array2::zeros((2, 3));
        assert!(matches!(
            require_square(&rect),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }
}
