//! Preconditioned steepest descent (PSD) solvers for fourth- and sixth-order
//! nonlinear elliptic equations with p-Laplacian terms on 2D periodic
//! domains, discretized with a staggered finite-difference calculus.
//!
//! The pieces, bottom to top:
//! - [`grid`]: periodic staggered fields, difference operators, inner
//!   products and norms;
//! - [`spectral`]: FFT diagonalization of the constant-coefficient operators
//!   (the inverse Laplacian and the fourth/sixth-order preconditioners);
//! - [`problems`]: the two discrete minimization problems (energies,
//!   residuals, preconditioner norms, convergence constants);
//! - [`psd`]: the solver loop with its exact/safeguarded line search;
//! - [`models`]: convex-splitting time steppers for thin-film epitaxy with
//!   slope selection and the square phase field crystal model;
//! - [`io`]: the plain-text field snapshot format.
//!
//! All numerics are generic over the working scalar (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the experiment harness uses.

pub mod error;
pub mod grid;
pub mod io;
pub mod models;
pub mod problems;
pub mod psd;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision aliases for the common types.
pub type GridSpec64 = grid::GridSpec<f64>;
pub type CellField64 = grid::CellField<f64>;
pub type VertexField64 = grid::VertexField<f64>;
pub type SpectralWorkspace64 = spectral::SpectralWorkspace<f64>;
pub type FourthOrderProblem64 = problems::FourthOrderProblem<f64>;
pub type SixthOrderProblem64 = problems::SixthOrderProblem<f64>;
pub type PsdConfig64 = psd::PsdConfig<f64>;
pub type PsdReport64 = psd::PsdReport<f64>;
