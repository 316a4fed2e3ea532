//! Boundary-integral solver for the axially symmetric displacement problem of a
//! transversely isotropic elastic solid of revolution.
//!
//! The displacement field is written through two quasi-harmonic potentials, one per
//! characteristic root, and the boundary data is matched by a second-kind system of
//! integral equations built from ring-source kernels in the two affinely stretched
//! meridional planes. A Hankel-transform half-plane solver is included as an
//! independent check of the sign conventions.

pub mod bie;
pub mod cli;
pub mod error;
pub mod field;
pub mod geometry;
pub mod halfplane;
pub mod kernels;
pub mod material;
pub mod quadrature;

pub use error::{Error, Result};
