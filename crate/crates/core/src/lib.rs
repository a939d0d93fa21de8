//! Numerical electromagnetics on uniform spacetime grids and in a spherical
//! cavity.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line
//! and worker parallelism live in the `emcavity` companion crate.
//!
//! Modules, bottom up:
//!
//! * [`units`], [`grid`], [`vec3`]: constants, spacetime grids and sampled fields.
//! * [`specfun`]: Legendre functions, spherical harmonics, spherical Bessel
//!   functions, their zeros and Gauss–Legendre rules.
//! * [`fields`]: finite-difference vector calculus and Maxwell residuals.
//! * [`jefimenko`]: retarded potentials and fields from a charge/current history.
//! * [`freespace`]: plane-wave solutions of the source-free equations.
//! * [`nonradiating`]: wave-equation sources and Lorentz boosts.
//! * [`cavity`]: spherical-cavity eigenmodes and their energy spectrum.

#![no_std]
// `!(x > 0.0)` also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

#[allow(unused_imports)]
mod prelude {
    pub(crate) use alloc::{format, string::String, vec, vec::Vec};
    // Unused whenever std gets linked (tests), since f64's inherent methods win.
    pub(crate) use num_traits::Float;
}

pub mod cavity;
pub mod dft;
pub mod error;
pub mod fields;
pub mod freespace;
pub mod grid;
pub mod jefimenko;
pub mod nonradiating;
pub mod specfun;
pub mod units;
pub mod vec3;

pub use error::{Error, Result};
pub use grid::{ScalarField, SpacetimeGrid, VectorField3};
pub use units::PhysicalConstants;
pub use vec3::CVec3;

pub use num_complex::Complex64;
