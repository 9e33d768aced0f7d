//! Eigendecomposition of complex Hermitian matrices by cyclic Jacobi
//! rotations. Quadratically convergent and plenty accurate for the matrix
//! sizes this crate works with (a few hundred at most).

use ndarray::{Array1, Array2};

use super::{all_finite, require_hermitian, CMatrix, RVector, C64, HERMITICITY_TOL};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns of a
/// Hermitian matrix.
///
/// Within a degenerate cluster the eigenvector order is unspecified;
/// compare spectra as multisets.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(RVector, CMatrix)> {
    let n = require_hermitian(a, HERMITICITY_TOL)?;
    if !all_finite(a) {
        return Err(Error::NonFiniteEntry);
    }

    let mut m = a.clone();
    // Work on the exactly Hermitian part so round-off in the input cannot
    // leak imaginary components into the eigenvalues.
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }

    let mut v: CMatrix = Array2::from_diag_elem(n, C64::new(1.0, 0.0));
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-15 * scale;

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= tol * 1e-2 {
                    continue;
                }
                let (c, s) = rotation(m[(p, p)].re, m[(q, q)].re, apq);
                apply_rotation(&mut m, &mut v, p, q, c, s);
            }
        }
    }

    // Diagonal is real by construction at this point.
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let eigenvalues = Array1::from_iter(pairs.iter().map(|&(val, _)| val));
    let mut eigenvectors = Array2::zeros((n, n));
    for (col, &(_, src)) in pairs.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, col)] = v[(row, src)];
        }
    }
    Ok((eigenvalues, eigenvectors))
}

/// Jacobi rotation `(c, s)` with real `c >= 0` and complex `s` such that the
/// unitary `[[c, s], [-conj(s), c]]` zeroes the `(p, q)` entry.
fn rotation(app: f64, aqq: f64, apq: C64) -> (f64, C64) {
    let abs_apq = apq.norm();
    let phase = apq / abs_apq;
    let tau = (aqq - app) / (2.0 * abs_apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = phase * (t * c);
    (c, s)
}

fn apply_rotation(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, c: f64, s: C64) {
    let n = m.nrows();
    // Columns: A <- A J with J[p,p]=c, J[p,q]=s, J[q,p]=-conj(s), J[q,q]=c.
    for i in 0..n {
        let aip = m[(i, p)];
        let aiq = m[(i, q)];
        m[(i, p)] = aip * c - aiq * s.conj();
        m[(i, q)] = aip * s + aiq * c;
    }
    // Rows: A <- J^dag A.
    for j in 0..n {
        let apj = m[(p, j)];
        let aqj = m[(q, j)];
        m[(p, j)] = apj * c - aqj * s;
        m[(q, j)] = apj * s.conj() + aqj * c;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c - viq * s.conj();
        v[(i, q)] = vip * s + viq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{complex_matrix, dagger, identity, max_diff, sigma_x};
    use crate::test_util::{random_hermitian, test_rng};

    #[test]
    fn identity_eigenvalues() {
        let (vals, _) = hermitian_eigen(&identity(2)).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_is_sorted_ascending() {
        let d = complex_matrix(&[[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (0.0, 0.0)]]);
        let (vals, _) = hermitian_eigen(&d).unwrap();
        assert!((vals[0] - 0.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sigma_x_spectrum() {
        // Characteristic polynomial lambda^2 - 1 = 0, roots -1 and 1.
        let (vals, vecs) = hermitian_eigen(&sigma_x()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        // Residual A v = lambda v per column.
        let a = sigma_x();
        for k in 0..2 {
            let v = vecs.column(k);
            let av = a.dot(&v);
            for i in 0..2 {
                assert!((av[i] - v[i] * vals[k]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian_and_rectangular() {
        let bad = complex_matrix(&[[(0.0, 0.0), (1.0, 0.0)], [(0.0, 0.0), (0.0, 0.0)]]);
        assert!(matches!(
            hermitian_eigen(&bad),
            Err(crate::error::Error::NotHermitian { .. })
        ));
        let rect: CMatrix = ndarray::Array2::zeros((3, 2));
        assert!(matches!(
            hermitian_eigen(&rect),
            Err(crate::error::Error::NotSquare { .. })
        ));
    }

    #[test]
    fn reconstructs_random_hermitian_up_to_dim_32() {
        let mut rng = test_rng();
        for &n in &[2usize, 3, 5, 8, 16, 32] {
            let a = random_hermitian(&mut rng, n);
            let (vals, vecs) = hermitian_eigen(&a).unwrap();
            // Orthonormality.
            let gram = dagger(&vecs).dot(&vecs);
            assert!(max_diff(&gram, &identity(n)) < 1e-9, "dim {n} gram");
            // V diag(vals) V^dag == A.
            let mut diag = CMatrix::zeros((n, n));
            for i in 0..n {
                diag[(i, i)] = C64::new(vals[i], 0.0);
            }
            let rebuilt = vecs.dot(&diag).dot(&dagger(&vecs));
            assert!(max_diff(&rebuilt, &a) < 1e-8, "dim {n} reconstruction");
            // Sorted ascending.
            for w in vals.windows(2) {
                assert!(w[0] <= w[1] + 1e-12);
            }
        }
    }
}
