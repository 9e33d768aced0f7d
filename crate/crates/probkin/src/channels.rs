//! Quantum channels on qubits: Kraus sets, their 4x4 superoperators
//! `V = sum_k S_k (x) S_k*`, and the pseudostochastic affine maps the
//! channels induce on probability 6-vectors.
//!
//! "Pseudostochastic" because the 6x6 matrix may carry negative entries;
//! normalization is still preserved and admissible inputs stay admissible.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::numerics::{dagger, identity, kron, max_diff, unitarity_defect, CMatrix, UNITARITY_TOL};
use crate::qubit_map::{
    is_admissible, probs_to_rho, quantumness_defect, rho_to_probs, ProbTriple, QubitDensityMatrix,
};

/// Completeness tolerance for `sum_k S_k^dag S_k = 1`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// `max |sum_k S_k^dag S_k - 1|` for a candidate list of 2x2 operators.
///
/// A valid Kraus set has defect at most [`COMPLETENESS_TOL`].
pub fn kraus_completeness_defect(ops: &[CMatrix]) -> Result<f64> {
    if ops.is_empty() {
        return Err(Error::EmptySet);
    }
    for op in ops {
        if op.nrows() != 2 || op.ncols() != 2 {
            return Err(Error::WrongDimension {
                expected: 2,
                rows: op.nrows(),
                cols: op.ncols(),
            });
        }
    }
    let mut sum: CMatrix = Array2::zeros((2, 2));
    for op in ops {
        sum += &dagger(op).dot(op);
    }
    Ok(max_diff(&sum, &identity(2)))
}

/// A finite list of 2x2 Kraus operators satisfying the completeness
/// condition, defining the channel `rho -> sum_k S_k rho S_k^dag`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    ops: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let defect = kraus_completeness_defect(&ops)?;
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvalidKrausSet { defect });
        }
        Ok(Self { ops })
    }

    pub fn identity() -> Self {
        Self {
            ops: vec![identity(2)],
        }
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    /// `rho -> sum_k S_k rho S_k^dag` on a raw 2x2 matrix.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out: CMatrix = Array2::zeros((2, 2));
        for s in &self.ops {
            out += &s.dot(rho).dot(&dagger(s));
        }
        out
    }

    /// The composed channel "`self` after `other`", with Kraus operators
    /// `{S_i T_j}`.
    pub fn after(&self, other: &KrausSet) -> KrausSet {
        let ops = self
            .ops
            .iter()
            .flat_map(|s| other.ops.iter().map(move |t| s.dot(t)))
            .collect();
        KrausSet { ops }
    }
}

/// Mixed-unitary channel data: weights `lambda_k` summing to 1 and matching
/// 2x2 unitaries `u_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedUnitarySpec {
    weights: Vec<f64>,
    unitaries: Vec<CMatrix>,
}

impl MixedUnitarySpec {
    pub fn new(weights: Vec<f64>, unitaries: Vec<CMatrix>) -> Result<Self> {
        if weights.len() != unitaries.len() || weights.is_empty() {
            return Err(Error::WeightsNotNormalized {
                sum: weights.iter().sum(),
            });
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(0.0..=1.0).contains(w)) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::WeightsNotNormalized { sum });
        }
        for u in &unitaries {
            if u.nrows() != 2 || u.ncols() != 2 {
                return Err(Error::WrongDimension {
                    expected: 2,
                    rows: u.nrows(),
                    cols: u.ncols(),
                });
            }
            let defect = unitarity_defect(u);
            if defect > UNITARITY_TOL {
                return Err(Error::NotUnitary { defect });
            }
        }
        Ok(Self { weights, unitaries })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }
}

/// Kraus set `{sqrt(lambda_k) u_k}` of a mixed-unitary channel. The
/// completeness defect vanishes automatically.
pub fn mixed_unitary_to_kraus(spec: &MixedUnitarySpec) -> KrausSet {
    let ops = spec
        .weights
        .iter()
        .zip(spec.unitaries.iter())
        .map(|(w, u)| u.mapv(|z| z * w.sqrt()))
        .collect();
    KrausSet { ops }
}

/// The 4x4 superoperator `V = sum_k S_k (x) S_k*`.
///
/// Acting on the column-stacked `(rho11, rho12, rho21, rho22)` it
/// reproduces `sum_k S_k rho S_k^dag` re-stacked, and it preserves the
/// stacked-trace functional.
pub fn channel_superoperator(ks: &KrausSet) -> CMatrix {
    let mut v: CMatrix = Array2::zeros((4, 4));
    for s in ks.ops() {
        v += &kron(s, &s.mapv(|z| z.conj()));
    }
    v
}

/// Sends a triple through the channel:
/// `rho_to_probs(sum_k S_k rho(p) S_k^dag)`.
///
/// Requires an admissible input; complete positivity then keeps the output
/// admissible.
pub fn apply_channel_probs(ks: &KrausSet, p: &ProbTriple) -> Result<ProbTriple> {
    if !is_admissible(p) {
        return Err(Error::NonAdmissibleState {
            defect: quantumness_defect(p),
        });
    }
    let rho = probs_to_rho(p);
    let moved = ks.apply(rho.matrix());
    rho_to_probs(&QubitDensityMatrix::new(moved)?)
}

/// The affine map `P -> M P + c` on probability 6-vectors through which
/// [`apply_channel_probs`] factorizes.
///
/// Constructed by probing the channel on four affinely independent triples
/// (the ball center plus three axis offsets) and converting the recovered
/// Bloch-ball affine action `r -> A r + b` into 6-vector coordinates:
///
/// ```text
/// M[2a][2b]   = (A[a][b] + delta_ab) / 2     c[2a]   =  b[a] / 6
/// M[2a][2b+1] = (delta_ab - A[a][b]) / 2     c[2a+1] = -b[a] / 6
/// M[2a+1][..] mirrored
/// ```
///
/// so the identity channel maps to exactly `(I6, 0)` and every column of
/// `M` sums to 1 (`c` sums to 0), which preserves normalization for every
/// input.
pub fn pseudostochastic_matrix(ks: &KrausSet) -> Result<([[f64; 6]; 6], [f64; 6])> {
    let delta = 0.25;
    let center = ProbTriple::center();
    let q0 = apply_channel_probs(ks, &center)?.components();

    // Bloch action: columns of A from the axis probes, offset b from the
    // center image.
    let mut a = [[0.0; 3]; 3];
    for axis in 0..3 {
        let mut c = center.components();
        c[axis] += delta;
        let qa = apply_channel_probs(ks, &ProbTriple::new(c[0], c[1], c[2])?)?.components();
        for row in 0..3 {
            a[row][axis] = (qa[row] - q0[row]) / delta;
        }
    }
    let b = [
        2.0 * q0[0] - 1.0,
        2.0 * q0[1] - 1.0,
        2.0 * q0[2] - 1.0,
    ];

    let mut m = [[0.0; 6]; 6];
    let mut c6 = [0.0; 6];
    for ax in 0..3 {
        for bx in 0..3 {
            let half_a = 0.5 * a[ax][bx];
            let half_d = if ax == bx { 0.5 } else { 0.0 };
            m[2 * ax][2 * bx] = half_d + half_a;
            m[2 * ax][2 * bx + 1] = half_d - half_a;
            m[2 * ax + 1][2 * bx] = half_d - half_a;
            m[2 * ax + 1][2 * bx + 1] = half_d + half_a;
        }
        c6[2 * ax] = b[ax] / 6.0;
        c6[2 * ax + 1] = -b[ax] / 6.0;
    }
    Ok((m, c6))
}

/// Applies an affine 6-vector map.
pub fn apply_affine_six(m: &[[f64; 6]; 6], c: &[f64; 6], p: &[f64; 6]) -> [f64; 6] {
    let mut out = *c;
    for (row, m_row) in m.iter().enumerate() {
        for (col, entry) in m_row.iter().enumerate() {
            out[row] += entry * p[col];
        }
    }
    out
}
