//! Unitary and dissipative evolution, in two equivalent forms: the matrix
//! flow (von Neumann / GKSL right-hand sides integrated directly) and the
//! linear kinetic equation `dP/dt = gen * P + affine` on probability
//! 6-vectors. The two routes are cross-checked against each other in the
//! acceptance suite.
//!
//! # 6-vector conventions
//!
//! A triple `(p1, p2, p3)` is carried by the 6-vector
//! `P = (1/3)(p1, 1-p1, p2, 1-p2, p3, 1-p3)`. Writing the flow on the
//! centered coordinates `r_a = 2 p_a - 1 = 3 (P_{2a} - P_{2a+1})` as
//! `dr/dt = A r + b`, the generator stored here is
//!
//! ```text
//! gen[2a][2b]   =  A[a][b] / 2      affine[2a]   =  b[a] / 6
//! gen[2a][2b+1] = -A[a][b] / 2      affine[2a+1] = -b[a] / 6
//! gen[2a+1][..] = -gen[2a][..]
//! ```
//!
//! Rows cancel pairwise, so the flow conserves both the total sum and each
//! `(p, 1-p)` pair sum for *every* 6-vector, not just valid ones. For
//! unitary dynamics `b = 0` and the affine term vanishes.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::numerics::{
    dagger, hermiticity_defect, kron, mat_exp, require_square, rk4_integrate, CMatrix, Trajectory,
    C64, HERMITICITY_TOL, UNITARITY_TOL,
};
use crate::qubit_map::{
    is_admissible, probs_to_rho, quantumness_defect, rho_to_probs, to_six_vector, ProbTriple,
    QubitDensityMatrix,
};

/// A Hermitian matrix generating unitary evolution, in units of inverse
/// time (hbar = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    m: CMatrix,
}

impl Hamiltonian {
    pub fn new(m: CMatrix) -> Result<Self> {
        require_square(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Pauli components `(h0, h1, h2, h3)` of a 2x2 Hamiltonian,
    /// `H = h0 I + h1 s1 + h2 s2 + h3 s3`.
    pub fn pauli_components(&self) -> Result<[f64; 4]> {
        if self.dim() != 2 {
            return Err(Error::WrongDimension {
                expected: 2,
                rows: self.m.nrows(),
                cols: self.m.ncols(),
            });
        }
        let h0 = 0.5 * (self.m[(0, 0)].re + self.m[(1, 1)].re);
        let h1 = self.m[(0, 1)].re;
        let h2 = -self.m[(0, 1)].im;
        let h3 = 0.5 * (self.m[(0, 0)].re - self.m[(1, 1)].re);
        Ok([h0, h1, h2, h3])
    }
}

/// Jump operators of a GKSL generator, in units of inverse square-root
/// time. The empty set reduces the dynamics to the von Neumann flow.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LindbladSet {
    ops: Vec<CMatrix>,
}

impl LindbladSet {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let mut dim = None;
        for op in &ops {
            let n = require_square(op)?;
            if !crate::numerics::all_finite(op) {
                return Err(Error::NonFiniteEntry);
            }
            match dim {
                None => dim = Some(n),
                Some(d) if d != n => {
                    return Err(Error::DimensionMismatch { left: d, right: n })
                }
                _ => {}
            }
        }
        Ok(Self { ops })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Affine generator of the kinetic equation `dP/dt = gen * P + affine` on
/// probability 6-vectors. See the module docs for the stored convention.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticGenerator {
    gen: [[f64; 6]; 6],
    affine: [f64; 6],
}

impl KineticGenerator {
    /// Builds the 6-vector generator from the centered Bloch-ball flow
    /// `dr/dt = A r + b`.
    fn from_bloch_flow(a: [[f64; 3]; 3], b: [f64; 3]) -> Self {
        let mut gen = [[0.0; 6]; 6];
        let mut affine = [0.0; 6];
        for ax in 0..3 {
            for bx in 0..3 {
                let half = 0.5 * a[ax][bx];
                gen[2 * ax][2 * bx] = half;
                gen[2 * ax][2 * bx + 1] = -half;
                gen[2 * ax + 1][2 * bx] = -half;
                gen[2 * ax + 1][2 * bx + 1] = half;
            }
            affine[2 * ax] = b[ax] / 6.0;
            affine[2 * ax + 1] = -b[ax] / 6.0;
        }
        Self { gen, affine }
    }

    pub fn matrix(&self) -> &[[f64; 6]; 6] {
        &self.gen
    }

    pub fn affine(&self) -> &[f64; 6] {
        &self.affine
    }

    /// `gen * p + affine`.
    pub fn rhs(&self, p: &[f64; 6]) -> [f64; 6] {
        let mut out = self.affine;
        for (row, gen_row) in self.gen.iter().enumerate() {
            for (col, g) in gen_row.iter().enumerate() {
                out[row] += g * p[col];
            }
        }
        out
    }

    /// Integrates the kinetic equation from `p0` with fixed-step RK4,
    /// returning the raw 6-vector at every accepted step.
    pub fn propagate(
        &self,
        p0: &ProbTriple,
        t: f64,
        step: f64,
    ) -> Result<Trajectory<[f64; 6]>> {
        let start = to_six_vector(p0).components();
        rk4_integrate(|p, _| self.rhs(p), start, 0.0, t, step)
    }
}

fn require_dims_match(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: b.nrows(),
        });
    }
    Ok(())
}

/// Right-hand side of the unitary evolution equation,
/// `-i (H rho - rho H)`. Traceless and Hermitian for Hermitian input.
pub fn von_neumann_rhs(h: &Hamiltonian, rho: &CMatrix) -> Result<CMatrix> {
    require_dims_match(h.matrix(), rho)?;
    let hr = h.matrix().dot(rho);
    let rh = rho.dot(h.matrix());
    Ok((hr - rh).mapv(|z| z * C64::new(0.0, -1.0)))
}

/// Right-hand side of the GKSL equation,
/// `-i [H, rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho})`.
pub fn gksl_rhs(h: &Hamiltonian, ls: &LindbladSet, rho: &CMatrix) -> Result<CMatrix> {
    let mut out = von_neumann_rhs(h, rho)?;
    for l in ls.ops() {
        require_dims_match(l, rho)?;
        let ldag = dagger(l);
        let ldag_l = ldag.dot(l);
        let jump = l.dot(rho).dot(&ldag);
        let anti = ldag_l.dot(rho) + rho.dot(&ldag_l);
        out = out + jump - anti.mapv(|z| z * 0.5);
    }
    Ok(out)
}

/// Integrates the matrix-valued GKSL flow (von Neumann when `ls` is empty)
/// with fixed-step RK4.
pub fn evolve_density(
    h: &Hamiltonian,
    ls: &LindbladSet,
    rho0: &CMatrix,
    t: f64,
    step: f64,
) -> Result<Trajectory<CMatrix>> {
    // Validate dimensions once; the rhs closure cannot report errors.
    gksl_rhs(h, ls, rho0)?;
    rk4_integrate(
        |rho, _| gksl_rhs(h, ls, rho).expect("dimensions were validated"),
        rho0.clone(),
        0.0,
        t,
        step,
    )
}

/// Derivative of the probability triple induced by a matrix-valued
/// derivative of rho, read through the inverse probability map.
fn probs_derivative(drho: &CMatrix) -> [f64; 3] {
    [drho[(0, 1)].re, -drho[(0, 1)].im, drho[(0, 0)].re]
}

/// The kinetic generator of unitary qubit evolution.
///
/// Derived in closed form through the Bloch picture: with
/// `H = h0 I + h.sigma` and `r = 2p - 1`, the commutator equation is
/// `dr/dt = 2 h x r`.
pub fn kinetic_generator(h: &Hamiltonian) -> Result<KineticGenerator> {
    let [_, h1, h2, h3] = h.pauli_components()?;
    // Cross-product matrix of 2h.
    let a = [
        [0.0, -2.0 * h3, 2.0 * h2],
        [2.0 * h3, 0.0, -2.0 * h1],
        [-2.0 * h2, 2.0 * h1, 0.0],
    ];
    Ok(KineticGenerator::from_bloch_flow(a, [0.0; 3]))
}

/// The kinetic generator of GKSL qubit evolution.
///
/// The map `p -> dp/dt` through [`gksl_rhs`] is exactly affine, so probing
/// it at the ball center and at three axis offsets reconstructs it without
/// any symbolic algebra.
pub fn gksl_kinetic_generator(h: &Hamiltonian, ls: &LindbladSet) -> Result<KineticGenerator> {
    if h.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            rows: h.dim(),
            cols: h.dim(),
        });
    }
    let flow = |p: &ProbTriple| -> Result<[f64; 3]> {
        let rho = probs_to_rho(p);
        let drho = gksl_rhs(h, ls, rho.matrix())?;
        Ok(probs_derivative(&drho))
    };

    let delta = 0.25;
    let center = ProbTriple::center();
    let f0 = flow(&center)?;

    let mut a = [[0.0; 3]; 3];
    for axis in 0..3 {
        let mut c = center.components();
        c[axis] += delta;
        let fa = flow(&ProbTriple::new(c[0], c[1], c[2])?)?;
        for row in 0..3 {
            // dp/dt is affine in p with Jacobian column A[:, axis]; the
            // centered flow dr/dt = A r + b shares that Jacobian.
            a[row][axis] = (fa[row] - f0[row]) / delta;
        }
    }
    // At the center r = 0, so dr/dt = b = 2 dp/dt.
    let b = [2.0 * f0[0], 2.0 * f0[1], 2.0 * f0[2]];
    Ok(KineticGenerator::from_bloch_flow(a, b))
}

fn require_admissible(p: &ProbTriple) -> Result<()> {
    if !is_admissible(p) {
        return Err(Error::NonAdmissibleState {
            defect: quantumness_defect(p),
        });
    }
    Ok(())
}

/// Finite-time unitary propagation through the density matrix:
/// `rho(t) = U rho(0) U^dag` with `U = exp(-i t H)`, read back as a triple.
pub fn propagate_unitary(h: &Hamiltonian, p0: &ProbTriple, t: f64) -> Result<ProbTriple> {
    if h.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            rows: h.dim(),
            cols: h.dim(),
        });
    }
    require_admissible(p0)?;
    let u = mat_exp(&h.matrix().mapv(|z| z * C64::new(0.0, -t)))?;
    let rho0 = probs_to_rho(p0);
    let rho_t = u.dot(rho0.matrix()).dot(&dagger(&u));
    rho_to_probs(&QubitDensityMatrix::new(rho_t)?)
}

/// Finite-time propagation through the kinetic equation on 6-vectors,
/// sampled at every integrator step.
pub fn propagate_kinetic(
    h: &Hamiltonian,
    p0: &ProbTriple,
    t: f64,
    step: f64,
) -> Result<Vec<(f64, ProbTriple)>> {
    require_admissible(p0)?;
    let generator = kinetic_generator(h)?;
    let traj = generator.propagate(p0, t, step)?;
    six_vector_trajectory_to_triples(&traj)
}

/// Reads each 6-vector sample back into a triple through the even
/// components.
pub fn six_vector_trajectory_to_triples(
    traj: &Trajectory<[f64; 6]>,
) -> Result<Vec<(f64, ProbTriple)>> {
    traj.iter()
        .map(|(t, p)| Ok((t, ProbTriple::new(3.0 * p[0], 3.0 * p[2], 3.0 * p[4])?)))
        .collect()
}

/// The 4x4 unitary `u (x) u*` acting on the column-stacked density matrix.
///
/// Stacking order is `(rho11, rho12, rho21, rho22)`; with that order,
/// un-stacking `(u (x) u*) vec(rho)` reproduces `u rho u^dag`.
pub fn vectorized_unitary(u: &CMatrix) -> Result<CMatrix> {
    let defect = crate::numerics::unitarity_defect(u);
    if defect > UNITARITY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    Ok(kron(u, &u.mapv(|z| z.conj())))
}

/// Stacks a 2x2 matrix into the 4-vector `(rho11, rho12, rho21, rho22)`.
pub fn vec_density(rho: &CMatrix) -> [C64; 4] {
    [rho[(0, 0)], rho[(0, 1)], rho[(1, 0)], rho[(1, 1)]]
}

/// Inverse of [`vec_density`].
pub fn unvec_density(v: &[C64; 4]) -> CMatrix {
    let mut m = Array2::zeros((2, 2));
    m[(0, 0)] = v[0];
    m[(0, 1)] = v[1];
    m[(1, 0)] = v[2];
    m[(1, 1)] = v[3];
    m
}

/// Applies a 4x4 superoperator to a stacked 2x2 matrix.
pub fn apply_superoperator(v: &CMatrix, rho: &CMatrix) -> CMatrix {
    let stacked = vec_density(rho);
    let mut out = [C64::new(0.0, 0.0); 4];
    for (row, out_v) in out.iter_mut().enumerate() {
        for (col, s) in stacked.iter().enumerate() {
            *out_v += v[(row, col)] * s;
        }
    }
    unvec_density(&out)
}
