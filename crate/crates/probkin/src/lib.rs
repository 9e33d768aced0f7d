//! `probkin` represents quantum states as classical probability vectors of
//! dichotomic random variables and evolves them with kinetic equations that
//! are equivalent to the Schrodinger / von Neumann / GKSL dynamics.
//!
//! A qubit state is three probabilities `(p1, p2, p3)` of measuring spin
//! projection +1/2 along the x, y and z axes. That triple maps invertibly
//! onto the 2x2 density matrix, so unitary and dissipative evolution become
//! linear kinetic equations on probability 6-vectors. Every probability-side
//! computation is cross-checked against a direct density-matrix route.
//!
//! Modules:
//! - [`numerics`]: small dense complex linear algebra and a fixed-step RK4.
//! - [`qubit_map`]: the density-matrix <-> probability-triple map, Born-rule
//!   probabilities and the 6-vector encodings.
//! - [`dynamics`]: von Neumann and GKSL evolution, both as matrix flows and
//!   as affine kinetic generators on 6-vectors.
//! - [`channels`]: Kraus channels, their 4x4 superoperators and the induced
//!   pseudostochastic maps on probability vectors.
//! - [`qudit_osc`]: the N-level generalization and the truncated-oscillator
//!   state with Hermite-function position kernels.
//! - [`cli`]: run configurations and trajectory/report writers behind the
//!   `probkin` binary.

pub mod channels;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod numerics;
pub mod qubit_map;
pub mod qudit_osc;

#[cfg(test)]
pub(crate) mod test_util;

pub use error::{Error, Result};
