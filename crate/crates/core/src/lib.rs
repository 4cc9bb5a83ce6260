//! Projective geometry of Poncelet polygons.
//!
//! The crate is organised bottom-up:
//!
//! - [`projective`]: homogeneous points, lines, conics and projective maps over
//!   the complex numbers, with join/meet, tangency and intersection primitives.
//! - [`rp1`]: transfer of conic points to the projective line and the 2×2
//!   bracket conditions for chains, heptagons, octagons and 9-gons.
//! - [`poly`]: exact univariate polynomials and a numerical root finder.
//! - [`engine`]: synthetic Poncelet chains, closure tests and the
//!   closure-polynomial solver.
//! - [`constructions`]: join/meet constructions of Poncelet polygons, each
//!   returning a replayable trace.
//! - [`configurations`]: ring operators and (N₄) incidence configurations.

pub mod configurations;
pub mod constructions;
pub mod engine;
mod error;
mod linalg;
pub mod poly;
pub mod projective;
pub mod rp1;
pub mod sample;
mod tolerance;

pub use error::{GeometryError, Result};
pub use tolerance::Tolerances;

/// Complex scalar used for every coordinate.
pub type Scalar = num_complex::Complex64;
