//! Fourier–Bessel spectral toolkit for the radial defocusing nonlinear wave
//! equation on the cylinder `B₂ × 𝕋` (unit disk times unit circle) with
//! Gaussian random initial data.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissibility;
pub mod bessel;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod grid;
pub mod highlow;
pub mod modes;
mod par;
pub mod propagator;
pub mod quadrature;
pub mod random;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use field::{CoeffField, PhysicalField};
pub use grid::Grid;
pub use modes::{build_modes, Mode, ModeSet};
pub use transform::Transform;
