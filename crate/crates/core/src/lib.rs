//! Measurement theory on symplectic supermanifolds at desk scale.
//!
//! The crate is `no_std` (with `alloc`) and contains only the algebraic and
//! numerical kernels:
//!
//! - [`grassmann`]: dense exterior algebra `ΛCᵐ` with the dagger involution
//!   and the Berezin integral.
//! - [`clifford`]: gamma-matrix representations, the `σ` map and the matrix
//!   star product used as a positivity oracle.
//! - [`superforms`]: polynomial superdifferential forms on `ℝⁿ|ᵐ`, the split
//!   `d_T = d + d̂`, the Euler-homotopy inverse of `d̂`, the Hodge-like
//!   decomposition of closed two-forms and the kernel lift of dynamics.
//! - [`measure`]: superdeterminants, the vertical volume field, the vertical
//!   Moyal star, laboratory inner products, probability cones and indicators.
//! - [`dynamics`]: the two-bit super phase-spacetime: evolution of state
//!   functions, probabilities and the transition matrix.
//!
//! IO, file formats and the command line live in the companion `supercone`
//! crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod clifford;
pub mod dynamics;
mod error;
pub mod grassmann;
pub mod linalg;
pub mod measure;
pub mod superforms;
pub mod supermatrix;

pub use error::{Error, Result};
pub use grassmann::Multivector;

/// Complex double-precision scalar used for every coefficient.
pub type Scalar = num_complex::Complex64;

/// Imaginary unit.
pub const I: Scalar = Scalar::new(0.0, 1.0);

#[inline]
pub(crate) fn re(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}
