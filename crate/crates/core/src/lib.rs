//! Exact propagators for Schrödinger equations with quadratic Hamiltonians
//! iψ_t = −a ψ_xx + b x² ψ − i(c x ψ_x + d ψ), together with their
//! time-inversion duals, eigenfunction expansions, a class of nonlinear
//! solutions and a numerical verification harness.
//!
//! Every closed form in this crate has an independent numerical route
//! (finite differences, ODE integration, quadrature or a Crank–Nicolson
//! solver) so that formulas can be checked against each other.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characteristic;
pub mod classical;
pub mod eigen;
pub mod error;
pub mod evolution;
pub mod kernels;
pub mod nls;
pub mod phase;
pub mod quadrature;
pub mod special;
pub mod suite;

mod model;
mod ode;

pub use error::{Error, Result};
pub use model::{CoefficientSet, CoefficientValues, ModelId};
pub use num_complex::Complex64;
