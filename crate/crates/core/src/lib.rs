//! Numerical toolkit for the landing of periodic dynamic rays of exponential
//! maps `z ↦ λe^z` with bounded post-singular set.
//!
//! The crate is layered bottom-up:
//!
//! - [`hypgeo`]: exact hyperbolic densities, distances and lengths on the
//!   unit disk, the punctured unit disk and the right half-plane.
//! - [`bounds`]: contraction estimates `κ(d)`, puncture ladders and
//!   two-sided density bounds for sampled domains.
//! - [`expfield`]: the exponential family, its singular orbit, inverse
//!   branches, periodic points and the tract chart.
//! - [`rays`]: external addresses, the ray model `F(t) = e^t - 1`, ray
//!   tracing and fundamental segments.
//! - [`landing`]: iterated pullback of fundamental segments and landing
//!   certificates.
//! - [`cli`] and [`verify`]: command-line front end and property suites.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod expfield;
pub mod hypgeo;
pub mod landing;
pub mod output;
pub mod quad;
pub mod rays;
pub mod verify;

pub use error::{Error, ErrorClass, Result};
pub use num_complex::Complex64;

/// A point of the complex plane.
pub type Point = Complex64;
