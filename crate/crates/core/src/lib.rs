//! Digital differential analyzers (DDA) for circle generation.
//!
//! A DDA circular interpolator produces points of a circle through a fixed
//! linear recurrence, cheap enough for adder-and-shifter hardware. This crate
//! collects the classical one-step interpolators together with the exact
//! two-step family, and the machinery to analyze and execute them:
//!
//! - [`schemes`]: the scheme catalog with coefficients evaluable at a step
//!   size `h`, plus the sequential-from-simultaneous construction and the
//!   `delta` parameterizations of the two-step family.
//! - [`analysis`]: orbit geometry (spiral factor, per-step angle, pitch),
//!   eigenvalues, orbit classification, and the optimality solve for the
//!   best third-order interpolator.
//! - [`generator`]: floating-point trajectory generation for one-step and
//!   two-step schemes, including the square-root initialization of the
//!   two-step family.
//! - [`fixedpoint`]: bit-exact integer shift-add execution with instrumented
//!   operation counts.
//! - [`metrics`]: radial drift, period measurement, and the conserved
//!   quadratic-form triple of the two-step family with its 3x3 evolution
//!   matrix.

pub mod analysis;
pub mod fixedpoint;
pub mod generator;
pub mod metrics;
pub mod poly;
pub mod schemes;

mod angles;

pub use schemes::{DeltaSpec, Scheme, StepSize};
