//! N-level generalization of the probability map, and the truncated
//! harmonic-oscillator state with its Hermite-function position kernel.
//!
//! An N x N density matrix is parametrized by probabilities of dichotomic
//! random variables: one `(p1, p2)` pair per off-diagonal element above the
//! diagonal and one `p3` per diagonal element except the last, which is
//! fixed by the trace. The oscillator is the same parametrization in a
//! truncated Fock basis, plus the reconstruction of the position-space
//! kernel `rho(x, x')`.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen, hermiticity_defect, require_square, trace, CMatrix, C64};

/// Hermiticity tolerance accepted when reading probabilities off a matrix.
pub const QUDIT_HERMITICITY_TOL: f64 = 1e-10;

/// Trace tolerance for qudit and Fock density matrices.
pub const QUDIT_TRACE_TOL: f64 = 1e-10;

/// Spectrum tolerance for Fock density matrices after evolution.
pub const FOCK_POSITIVITY_TOL: f64 = -1e-8;

/// Round-off slack accepted at probability boundaries (matches the qubit
/// map).
const RANGE_SLACK: f64 = 1e-9;

/// Highest Hermite degree the recurrence is exposed for.
pub const MAX_HERMITE_DEGREE: usize = 200;

/// Position arguments beyond this underflow the Gaussian factor at the
/// default truncation.
pub const MAX_POSITION: f64 = 12.0;

/// Flat index of the ordered pair `(j, k)`, `j < k`, in row-major order.
fn pair_index(dim: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < dim);
    j * dim - j * (j + 1) / 2 + (k - j - 1)
}

/// Probabilities `{(p1, p2)}` for every ordered index pair and `{p3}` for
/// every diagonal except the last, parametrizing an N x N density matrix.
///
/// All entries lie in [0, 1] and the diagonal entries sum to at most 1.
/// Constructed through [`QuditProbFamily::new`] those bounds are enforced;
/// families read off non-positive Hermitian matrices can escape [0, 1] and
/// are flagged by [`qudit_rho_to_probs`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuditProbFamily {
    dim: usize,
    offdiag: Vec<(f64, f64)>,
    diag: Vec<f64>,
}

impl QuditProbFamily {
    /// `offdiag` holds `(p1, p2)` for pairs `(0,1), (0,2), .., (1,2), ..`
    /// in row-major order; `diag` holds `p3` for indices `0 .. dim-1`.
    pub fn new(dim: usize, offdiag: Vec<(f64, f64)>, diag: Vec<f64>) -> Result<Self> {
        let family = Self::new_unchecked(dim, offdiag, diag)?;
        for &(p1, p2) in &family.offdiag {
            check_range(p1)?;
            check_range(p2)?;
        }
        let mut sum = 0.0;
        for &p3 in &family.diag {
            check_range(p3)?;
            sum += p3;
        }
        if sum > 1.0 + 1e-12 {
            return Err(Error::DiagonalOverflow { sum });
        }
        Ok(family)
    }

    /// Shape validation only; range escapes are the caller's concern.
    fn new_unchecked(dim: usize, offdiag: Vec<(f64, f64)>, diag: Vec<f64>) -> Result<Self> {
        if dim < 2 || offdiag.len() != dim * (dim - 1) / 2 || diag.len() != dim - 1 {
            return Err(Error::WrongDimension {
                expected: dim,
                rows: diag.len() + 1,
                cols: dim,
            });
        }
        Ok(Self { dim, offdiag, diag })
    }

    /// The maximally mixed family: every pair at the center, uniform
    /// diagonal.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            dim,
            offdiag: vec![(0.5, 0.5); dim * (dim - 1) / 2],
            diag: vec![1.0 / dim as f64; dim - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(p1, p2)` of the pair `(j, k)`, `j < k`.
    pub fn offdiag_pair(&self, j: usize, k: usize) -> (f64, f64) {
        self.offdiag[pair_index(self.dim, j, k)]
    }

    /// `p3` of diagonal index `j < dim - 1`.
    pub fn diag_prob(&self, j: usize) -> f64 {
        self.diag[j]
    }

    pub fn offdiag(&self) -> &[(f64, f64)] {
        &self.offdiag
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Largest absolute difference over all stored probabilities.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (a, b) in self.offdiag.iter().zip(other.offdiag.iter()) {
            d = d.max((a.0 - b.0).abs()).max((a.1 - b.1).abs());
        }
        for (a, b) in self.diag.iter().zip(other.diag.iter()) {
            d = d.max((a - b).abs());
        }
        d
    }

    /// All stored probabilities in a fixed order: diagonal first, then the
    /// off-diagonal pairs interleaved `(p1, p2)`. Used by serialization.
    pub fn flattened(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.diag.len() + 2 * self.offdiag.len());
        out.extend_from_slice(&self.diag);
        for &(p1, p2) in &self.offdiag {
            out.push(p1);
            out.push(p2);
        }
        out
    }
}

fn check_range(value: f64) -> Result<f64> {
    if !value.is_finite() || !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&value) {
        return Err(Error::OutOfRangeProbability { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Density matrix of a probability family:
/// `rho_jk = (p1 - 1/2) - i (p2 - 1/2)` above the diagonal, `rho_jj = p3`,
/// and the last diagonal by trace completion. Hermitian with unit trace by
/// construction; positivity is the separate [`qudit_positivity`] query.
pub fn qudit_probs_to_rho(family: &QuditProbFamily) -> CMatrix {
    let n = family.dim;
    let mut m: CMatrix = Array2::zeros((n, n));
    let mut trace_head = 0.0;
    for j in 0..(n - 1) {
        m[(j, j)] = C64::new(family.diag[j], 0.0);
        trace_head += family.diag[j];
    }
    m[(n - 1, n - 1)] = C64::new(1.0 - trace_head, 0.0);
    for j in 0..n {
        for k in (j + 1)..n {
            let (p1, p2) = family.offdiag[pair_index(n, j, k)];
            let z = C64::new(p1 - 0.5, -(p2 - 0.5));
            m[(j, k)] = z;
            m[(k, j)] = z.conj();
        }
    }
    m
}

/// Probability family read off a Hermitian unit-trace matrix, with a flag
/// marking reads that escaped [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuditProbReadout {
    pub family: QuditProbFamily,
    /// True when some matrix element mapped outside [0, 1], which can
    /// happen for Hermitian inputs that are not positive semidefinite.
    pub out_of_range: bool,
}

/// Exact inverse of [`qudit_probs_to_rho`].
///
/// The input must be Hermitian with unit trace; positivity is not required,
/// but non-positive matrices can produce probabilities outside [0, 1],
/// reported through [`QuditProbReadout::out_of_range`].
pub fn qudit_rho_to_probs(rho: &CMatrix) -> Result<QuditProbReadout> {
    let n = require_square(rho).map_err(|_| Error::InvalidDensityMatrix {
        reason: format!("expected square, got {}x{}", rho.nrows(), rho.ncols()),
    })?;
    if n < 2 {
        return Err(Error::InvalidDensityMatrix {
            reason: "dimension must be at least 2".into(),
        });
    }
    let herm = hermiticity_defect(rho);
    if herm > QUDIT_HERMITICITY_TOL {
        return Err(Error::InvalidDensityMatrix {
            reason: format!("Hermiticity defect {herm:.3e}"),
        });
    }
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > QUDIT_TRACE_TOL || tr.im.abs() > QUDIT_TRACE_TOL {
        return Err(Error::InvalidDensityMatrix {
            reason: format!("trace {tr} differs from 1"),
        });
    }

    let mut out_of_range = false;
    let mut clamp_or_keep = |value: f64| -> f64 {
        match check_range(value) {
            Ok(clamped) => clamped,
            Err(_) => {
                out_of_range = true;
                value
            }
        }
    };

    let mut offdiag = Vec::with_capacity(n * (n - 1) / 2);
    for j in 0..n {
        for k in (j + 1)..n {
            let z = rho[(j, k)];
            offdiag.push((clamp_or_keep(z.re + 0.5), clamp_or_keep(-z.im + 0.5)));
        }
    }
    let diag: Vec<f64> = (0..(n - 1))
        .map(|j| clamp_or_keep(rho[(j, j)].re))
        .collect();

    let family = QuditProbFamily::new_unchecked(n, offdiag, diag)?;
    Ok(QuditProbReadout {
        family,
        out_of_range,
    })
}

/// Minimum eigenvalue of a Hermitian matrix; nonnegative (up to round-off)
/// exactly when the matrix is a valid state.
pub fn qudit_positivity(rho: &CMatrix) -> Result<f64> {
    let (vals, _) = hermitian_eigen(rho)?;
    Ok(vals[0])
}

/// Physicists' Hermite polynomial by the recurrence
/// `H_{n+1} = 2 x H_n - 2 n H_{n-1}`, `H_0 = 1`, `H_1 = 2x`.
pub fn hermite_poly(n: usize, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: n,
            max: MAX_HERMITE_DEGREE,
        });
    }
    Ok(hermite_values(n, x)[n])
}

fn hermite_values(n_max: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n_max + 1);
    h.push(1.0);
    if n_max >= 1 {
        h.push(2.0 * x);
    }
    for n in 1..n_max {
        let next = 2.0 * x * h[n] - 2.0 * n as f64 * h[n - 1];
        h.push(next);
    }
    h
}

/// Hermite-function values `psi_k(x) = (2^k k! sqrt(pi))^{-1/2} H_k(x)
/// e^{-x^2/2}` for `k = 0 ..= n_max`.
///
/// The normalizing constants are assembled in log space so the factorials
/// never overflow.
fn hermite_function_values(n_max: usize, x: f64) -> Vec<f64> {
    let h = hermite_values(n_max, x);
    let mut ln_factorial = 0.0;
    let ln2 = std::f64::consts::LN_2;
    let ln_pi = std::f64::consts::PI.ln();
    let mut out = Vec::with_capacity(n_max + 1);
    for (k, hk) in h.iter().enumerate() {
        if k > 0 {
            ln_factorial += (k as f64).ln();
        }
        let ln_weight = -0.5 * (ln_factorial + k as f64 * ln2) - 0.25 * ln_pi - 0.5 * x * x;
        out.push(hk * ln_weight.exp());
    }
    out
}

/// One sample of the position-space kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionKernelSample {
    pub x: f64,
    pub x_prime: f64,
    pub value: C64,
}

/// Density matrix in a truncated Fock basis: Hermitian, unit trace, and
/// positive semidefinite up to [`FOCK_POSITIVITY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    m: CMatrix,
}

impl FockDensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let n = require_square(&m).map_err(|_| Error::InvalidDensityMatrix {
            reason: format!("expected square, got {}x{}", m.nrows(), m.ncols()),
        })?;
        if n < 1 {
            return Err(Error::InvalidDensityMatrix {
                reason: "empty matrix".into(),
            });
        }
        let herm = hermiticity_defect(&m);
        if herm > 1e-12 {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("Hermiticity defect {herm:.3e}"),
            });
        }
        let tr = trace(&m);
        if (tr.re - 1.0).abs() > QUDIT_TRACE_TOL || tr.im.abs() > QUDIT_TRACE_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("trace {tr} differs from 1"),
            });
        }
        let min_eig = qudit_positivity(&m)?;
        if min_eig < FOCK_POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("negative eigenvalue {min_eig:.3e}"),
            });
        }
        Ok(Self { m })
    }

    /// The pure number state `|n><n|` at truncation `n_max`.
    pub fn number_state(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("number state {n} exceeds truncation {n_max}"),
            });
        }
        let mut m: CMatrix = Array2::zeros((n_max + 1, n_max + 1));
        m[(n, n)] = C64::new(1.0, 0.0);
        Ok(Self { m })
    }

    pub fn n_max(&self) -> usize {
        self.m.nrows() - 1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn entry(&self, k: usize, j: usize) -> C64 {
        self.m[(k, j)]
    }

    /// Free oscillator evolution in the Fock basis:
    /// `rho_kj(t) = e^{-i (k - j) t} rho_kj(0)`.
    ///
    /// The Hamiltonian is diagonal with eigenvalues `n + 1/2`; the constant
    /// shift cancels in the commutator, leaving only the `k - j` phases.
    /// Diagonal entries (and with them trace and spectrum) are untouched.
    pub fn evolve(&self, t: f64) -> Self {
        let n = self.m.nrows();
        let mut m = self.m.clone();
        for k in 0..n {
            for j in 0..n {
                if k != j {
                    let phase = C64::from_polar(1.0, -((k as f64) - (j as f64)) * t);
                    m[(k, j)] *= phase;
                }
            }
        }
        Self { m }
    }

    /// The position-representation kernel `rho(x, x') = sum_{k,j}
    /// psi_k(x) psi_j(x') rho_kj`, with the Gaussian-weighted Hermite
    /// functions `psi`.
    pub fn position_kernel(&self, x: f64, x_prime: f64) -> Result<C64> {
        for &value in &[x, x_prime] {
            if value.abs() > MAX_POSITION || !value.is_finite() {
                return Err(Error::RangeExceeded {
                    value,
                    max: MAX_POSITION,
                });
            }
        }
        let n_max = self.n_max();
        let psi_x = hermite_function_values(n_max, x);
        let psi_xp = hermite_function_values(n_max, x_prime);
        let mut sum = C64::new(0.0, 0.0);
        for (k, px) in psi_x.iter().enumerate() {
            for (j, pxp) in psi_xp.iter().enumerate() {
                sum += self.m[(k, j)] * (px * pxp);
            }
        }
        Ok(sum)
    }

    pub fn kernel_sample(&self, x: f64, x_prime: f64) -> Result<PositionKernelSample> {
        Ok(PositionKernelSample {
            x,
            x_prime,
            value: self.position_kernel(x, x_prime)?,
        })
    }

    /// `int rho(x, x) dx - 1` over [-10, 10] by composite Simpson with 2001
    /// nodes; the truncation-quality diagnostic surfaced in CLI metadata.
    pub fn normalization_residual(&self) -> f64 {
        let integral = simpson(|x| self.position_kernel(x, x).expect("|x| <= 10").re, -10.0, 10.0, 2001);
        integral - 1.0
    }
}

/// Composite Simpson rule with an odd number of nodes.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, nodes: usize) -> f64 {
    debug_assert!(nodes >= 3 && nodes % 2 == 1);
    let h = (b - a) / (nodes - 1) as f64;
    let mut sum = f(a) + f(b);
    for i in 1..nodes - 1 {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Free evolution of a Fock-basis state for time `t`.
pub fn oscillator_evolve(rho0: &FockDensityMatrix, t: f64) -> FockDensityMatrix {
    rho0.evolve(t)
}

/// Probability family of a Fock-basis state, the same parametrization as
/// [`qudit_rho_to_probs`] at dimension `n_max + 1`.
pub fn fock_probs(rho: &FockDensityMatrix) -> Result<QuditProbFamily> {
    Ok(qudit_rho_to_probs(rho.matrix())?.family)
}
