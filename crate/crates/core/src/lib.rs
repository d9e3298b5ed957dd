//! Stationary mean field game equilibrium on the 1-D torus coupled to a
//! spatial SEIRD epidemic with nonlocal incidence.
//!
//! The library has two solvers and the glue between them:
//!
//! * [`mfg`] computes the stationary equilibrium of a mean field game in
//!   which agents choose a velocity across the torus and an investment rate
//!   in human capital. The coupled HJB / Fokker-Planck system is discretized
//!   with a monotone upwind scheme and solved by damped fixed-point
//!   iteration. Its output of interest is the spatial marginal of the
//!   stationary population density.
//!
//! * [`seird`] integrates a spatial SEIRD system on the same torus in which
//!   the incidence is nonlocal (a convolution of the infectious field with a
//!   compactly supported kernel) and modulated by an exogenous, time-constant
//!   population density — typically the MFG marginal.
//!
//! * [`scenario`] wires the two together behind a declarative config file and
//!   persists all run artifacts as CSV. The three built-in scenarios
//!   (`fig3`, `fig4`, `fig5`) cover a uniform density with constant
//!   transmission, the MFG density with constant transmission, and the MFG
//!   density with density-dependent transmission.
//!
//! Shared infrastructure lives in [`torus`] (periodic grids, kernels,
//! convolution quadrature) and [`numerics`] (exact summation, sparse
//! matrices, a Krylov solver). Everything is deterministic: identical inputs
//! produce identical outputs, bit for bit.

// Validation predicates use the `!(x > 0.0)` form on purpose: it rejects
// NaN along with out-of-range values, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod mfg;
pub mod numerics;
pub mod scenario;
pub mod seird;
pub mod torus;

pub use error::{Error, Result};
