//! Special functions for the spherical cavity: Legendre functions, spherical
//! harmonics, spherical Bessel functions and their zeros, Gauss–Legendre
//! rules, and the radial normalisation constants.

mod bessel;
mod harmonics;
mod legendre;
mod polynomials;
mod quadrature;
mod radial;
mod zeros;

pub use bessel::{
    bessel_j_half, spherical_bessel_j, spherical_bessel_j_at_zero, spherical_bessel_jp,
    sph_j, sph_j_all, sph_jp,
};
pub use harmonics::{harmonic_index, spherical_harmonic, HarmonicTable};
pub use legendre::{assoc_legendre_p, legendre_p};
pub use polynomials::{eval_poly, rayleigh_p, rayleigh_q};
pub use quadrature::{GaussLegendre, SphereRule, BallRule};
pub use radial::{norm_constant, radial_norm_sq, tau, ZERO_TOL};
pub use zeros::{bessel_zeros, ZeroTable};
