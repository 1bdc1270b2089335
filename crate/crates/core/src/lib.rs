//! Axial motion of an electron in a mirror-image planar Penning trap.
//!
//! - [`electrostatics`]: on-axis potential from the electrode voltages and its
//!   quartic expansion about the trap center.
//! - [`wells`]: double-well geometry, classical per-well frequency, and the
//!   inverse problem for the ring voltage.
//! - [`eigensolver`]: lowest levels of the dimensionless 1D Schrödinger
//!   operator.
//! - [`tunneling`]: splitting, tunneling frequency, and left/right dynamics.
//! - [`cli`]: the `trap` command-line front end.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod cli;
pub mod eigensolver;
pub mod electrostatics;
pub mod error;
pub mod quadrature;
pub mod tunneling;
pub mod units;
pub mod wells;

pub use electrostatics::{QuarticCoefficients, TrapGeometry, VoltageSet};
pub use error::{Result, TrapError};
pub use wells::DoubleWellShape;
