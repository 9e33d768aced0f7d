//! The invertible map between 2x2 density matrices and probability triples.
//!
//! A qubit state is encoded by the probabilities `(p1, p2, p3)` of finding
//! spin projection +1/2 along x, y and z: `rho11 = p3` and
//! `rho12 = (p1 - 1/2) - i (p2 - 1/2)`. Three independent classical coins
//! realize any triple in `[0,1]^3`; quantum states are exactly the triples
//! inside the ball `(p1-1/2)^2 + (p2-1/2)^2 + (p3-1/2)^2 <= 1/4`, so
//! admissibility is a separate query rather than a constructor restriction.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::numerics::{hermiticity_defect, require_square, CMatrix, C64};

/// Hermiticity/trace tolerance for density matrices after evolution steps.
pub const DENSITY_TOL: f64 = 1e-12;

/// Eigenvalues above this count as nonnegative, absorbing round-off.
pub const POSITIVITY_TOL: f64 = -1e-10;

/// Round-off slack accepted (and clamped away) at probability boundaries,
/// so propagated states that graze 0 or 1 survive the range check.
const RANGE_SLACK: f64 = 1e-9;

fn check_probability(value: f64) -> Result<f64> {
    if !value.is_finite() || !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&value) {
        return Err(Error::OutOfRangeProbability { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Probabilities of spin projection +1/2 along the x, y and z axes.
///
/// Each component lies in [0, 1]. The triple is quantum-admissible iff
/// [`quantumness_defect`] is nonnegative; classical-coin triples outside the
/// ball are representable on purpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbTriple {
    p1: f64,
    p2: f64,
    p3: f64,
}

impl ProbTriple {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        Ok(Self {
            p1: check_probability(p1)?,
            p2: check_probability(p2)?,
            p3: check_probability(p3)?,
        })
    }

    /// The maximally mixed state, center of the quantumness ball.
    pub fn center() -> Self {
        Self {
            p1: 0.5,
            p2: 0.5,
            p3: 0.5,
        }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p3(&self) -> f64 {
        self.p3
    }

    pub fn components(&self) -> [f64; 3] {
        [self.p1, self.p2, self.p3]
    }

    /// Largest absolute component difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (self.p1 - other.p1)
            .abs()
            .max((self.p2 - other.p2).abs())
            .max((self.p3 - other.p3).abs())
    }
}

/// A 2x2 Hermitian unit-trace matrix in the spin basis along z.
///
/// Hermiticity and unit trace are enforced on construction to
/// [`DENSITY_TOL`]. Positivity is *not* enforced: triples of independent
/// classical coins map to Hermitian unit-trace matrices with possibly
/// negative spectrum, and the library must represent both regimes. Query
/// positivity through [`QubitDensityMatrix::min_eigenvalue_closed_form`] or
/// [`quantumness_defect`].
#[derive(Debug, Clone, PartialEq)]
pub struct QubitDensityMatrix {
    m: CMatrix,
}

impl QubitDensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let n = require_square(&m).map_err(|_| Error::InvalidDensityMatrix {
            reason: format!("expected 2x2, got {}x{}", m.nrows(), m.ncols()),
        })?;
        if n != 2 {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("expected 2x2, got {n}x{n}"),
            });
        }
        let herm = hermiticity_defect(&m);
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("Hermiticity defect {herm:.3e}"),
            });
        }
        let trace = m[(0, 0)] + m[(1, 1)];
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("trace {trace} differs from 1"),
            });
        }
        Ok(Self { m })
    }

    /// Construction used by the probability map; Hermiticity and trace hold
    /// exactly by the formulas there, so no checks re-run.
    pub(crate) fn from_probs_unchecked(p: &ProbTriple) -> Self {
        let off = C64::new(p.p1 - 0.5, -(p.p2 - 0.5));
        let mut m = Array2::zeros((2, 2));
        m[(0, 0)] = C64::new(p.p3, 0.0);
        m[(0, 1)] = off;
        m[(1, 0)] = off.conj();
        m[(1, 1)] = C64::new(1.0 - p.p3, 0.0);
        Self { m }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn rho11(&self) -> C64 {
        self.m[(0, 0)]
    }

    pub fn rho12(&self) -> C64 {
        self.m[(0, 1)]
    }

    pub fn rho21(&self) -> C64 {
        self.m[(1, 0)]
    }

    pub fn rho22(&self) -> C64 {
        self.m[(1, 1)]
    }

    /// Smaller eigenvalue of the 2x2 Hermitian matrix,
    /// `1/2 - sqrt((rho11 - 1/2)^2 + |rho12|^2)` for unit trace.
    pub fn min_eigenvalue_closed_form(&self) -> f64 {
        let half_diff = 0.5 * (self.m[(0, 0)].re - self.m[(1, 1)].re);
        let radius = (half_diff * half_diff + self.m[(0, 1)].norm_sqr()).sqrt();
        0.5 * (self.m[(0, 0)].re + self.m[(1, 1)].re) - radius
    }

    /// `Tr(rho^2)`, equal to 1 exactly on pure states.
    pub fn purity(&self) -> f64 {
        self.m.dot(&self.m).diag().sum().re
    }
}

/// Joint distribution of (projection outcome, axis) under the uniform axis
/// marginal: `(1/3)(p1, 1-p1, p2, 1-p2, p3, 1-p3)`.
///
/// Components lie in [0, 1/3] and sum to 1. This display order is fixed;
/// all serialization uses it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbSixVector {
    components: [f64; 6],
}

impl ProbSixVector {
    /// Validates that the components encode some triple: pairwise sums of
    /// 1/3 and nonnegative entries (within round-off).
    pub fn new(components: [f64; 6]) -> Result<Self> {
        for axis in 0..3 {
            let a = components[2 * axis];
            let b = components[2 * axis + 1];
            if a < -1e-12 || b < -1e-12 || (a + b - 1.0 / 3.0).abs() > 1e-12 {
                return Err(Error::OutOfRangeProbability {
                    value: 3.0 * a.min(b),
                });
            }
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> [f64; 6] {
        self.components
    }

    pub fn sum(&self) -> f64 {
        self.components.iter().sum()
    }

    /// Reads the triple back out of the even components.
    pub fn to_triple(&self) -> Result<ProbTriple> {
        ProbTriple::new(
            3.0 * self.components[0],
            3.0 * self.components[2],
            3.0 * self.components[4],
        )
    }
}

/// Projectors onto spin +1/2 along x, y and z; the effects whose Born-rule
/// probabilities are exactly `(p1, p2, p3)`.
#[derive(Debug, Clone)]
pub struct MeasurementBasisStates {
    pub rho1: QubitDensityMatrix,
    pub rho2: QubitDensityMatrix,
    pub rho3: QubitDensityMatrix,
}

impl MeasurementBasisStates {
    pub fn standard() -> Self {
        let rho1 = QubitDensityMatrix::from_probs_unchecked(&ProbTriple {
            p1: 1.0,
            p2: 0.5,
            p3: 0.5,
        });
        let rho2 = QubitDensityMatrix::from_probs_unchecked(&ProbTriple {
            p1: 0.5,
            p2: 1.0,
            p3: 0.5,
        });
        let rho3 = QubitDensityMatrix::from_probs_unchecked(&ProbTriple {
            p1: 0.5,
            p2: 0.5,
            p3: 1.0,
        });
        Self { rho1, rho2, rho3 }
    }

    pub fn by_axis(&self, axis: usize) -> &QubitDensityMatrix {
        match axis {
            0 => &self.rho1,
            1 => &self.rho2,
            _ => &self.rho3,
        }
    }
}

/// Density matrix of a probability triple: `rho11 = p3`,
/// `rho12 = (p1 - 1/2) - i (p2 - 1/2)`, the rest by Hermiticity and trace.
///
/// Accepts every triple in `[0,1]^3`; positivity of the result is the
/// separate [`quantumness_defect`] query.
pub fn probs_to_rho(p: &ProbTriple) -> QubitDensityMatrix {
    QubitDensityMatrix::from_probs_unchecked(p)
}

/// Exact inverse of [`probs_to_rho`]: `p3 = Re rho11`,
/// `p1 = Re rho12 + 1/2`, `p2 = -Im rho12 + 1/2`.
pub fn rho_to_probs(rho: &QubitDensityMatrix) -> Result<ProbTriple> {
    ProbTriple::new(
        rho.rho12().re + 0.5,
        -rho.rho12().im + 0.5,
        rho.rho11().re,
    )
    .map_err(|e| match e {
        // Hermitian unit-trace matrices with large off-diagonals map outside
        // [0,1]; surface that as a density-matrix problem, not a probability
        // problem.
        Error::OutOfRangeProbability { value } => Error::InvalidDensityMatrix {
            reason: format!("matrix element maps to probability {value} outside [0,1]"),
        },
        other => other,
    })
}

/// `1/4 - sum_i (p_i - 1/2)^2`.
///
/// Nonnegative exactly when the triple encodes a positive-semidefinite
/// density matrix; zero exactly on pure states.
pub fn quantumness_defect(p: &ProbTriple) -> f64 {
    let dx = p.p1 - 0.5;
    let dy = p.p2 - 0.5;
    let dz = p.p3 - 0.5;
    0.25 - dx * dx - dy * dy - dz * dz
}

/// Whether the triple is inside the quantumness ball, up to round-off.
pub fn is_admissible(p: &ProbTriple) -> bool {
    quantumness_defect(p) >= POSITIVITY_TOL
}

/// Born-rule probability `Re Tr(rho * effect)`.
pub fn born_probability(rho: &QubitDensityMatrix, effect: &QubitDensityMatrix) -> f64 {
    rho.matrix().dot(effect.matrix()).diag().sum().re
}

/// Packs a triple into its probability 6-vector under the uniform marginal.
pub fn to_six_vector(p: &ProbTriple) -> ProbSixVector {
    let third = 1.0 / 3.0;
    ProbSixVector {
        components: [
            third * p.p1,
            third * (1.0 - p.p1),
            third * p.p2,
            third * (1.0 - p.p2),
            third * p.p3,
            third * (1.0 - p.p3),
        ],
    }
}

/// Joint distribution `P(m, j) = P(m|j) w(j)` over (outcome, axis) pairs,
/// ordered `(+,1), (-,1), (+,2), (-,2), (+,3), (-,3)`.
///
/// With the uniform marginal `w = (1/3, 1/3, 1/3)` this reproduces
/// [`to_six_vector`].
pub fn joint_distribution(p: &ProbTriple, marginal: &[f64; 3]) -> Result<[f64; 6]> {
    let sum: f64 = marginal.iter().sum();
    if marginal.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::InvalidMarginal {
            reason: "negative or non-finite weight".into(),
        });
    }
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidMarginal {
            reason: format!("weights sum to {sum}"),
        });
    }
    let cond = [p.p1, p.p2, p.p3];
    let mut out = [0.0; 6];
    for axis in 0..3 {
        out[2 * axis] = cond[axis] * marginal[axis];
        out[2 * axis + 1] = (1.0 - cond[axis]) * marginal[axis];
    }
    Ok(out)
}
