use crate::prelude::*;
use core::f64::consts::{FRAC_2_PI, PI};

use super::bessel::{sph_j, sph_jp};
use crate::{Error, Result};

/// Relative residual below which k·r₀ counts as a zero of j_l.
pub const ZERO_TOL: f64 = 1e-10;

/// τ_{l,k}(r) = k·sqrt(2/π)·j_l(kr).
pub fn tau(l: usize, k: f64, r: f64) -> f64 {
    k * FRAC_2_PI.sqrt() * sph_j(l, k * r)
}

pub(crate) fn is_zero(l: usize, s: f64) -> bool {
    sph_j(l, s).abs() < ZERO_TOL * sph_jp(l, s).abs().max(1.0)
}

fn check(l: usize, k: f64, r0: f64) -> Result<()> {
    if !(k > 0.0) || !(r0 > 0.0) {
        return Err(Error::Domain(format!("need k > 0 and r0 > 0, got k={k}, r0={r0}")));
    }
    if !is_zero(l, k * r0) {
        return Err(Error::Precondition(format!(
            "k·r0 = {} is not a zero of j_{l} (residual {:e})",
            k * r0,
            sph_j(l, k * r0)
        )));
    }
    Ok(())
}

/// ‖τ_{l,k}‖² = ∫₀^{r₀} τ² r² dr = (k r₀²/2)·J²_{l+3/2}(k r₀) for k r₀ a zero of j_l.
pub fn radial_norm_sq(l: usize, k: f64, r0: f64) -> Result<f64> {
    let c = norm_constant(l, k, r0)?;
    Ok(c * c)
}

/// c_{l,k} = sqrt(k)·r₀/√2 · J_{l+3/2}(k r₀).
pub fn norm_constant(l: usize, k: f64, r0: f64) -> Result<f64> {
    check(l, k, r0)?;
    let s = k * r0;
    let j_next = (2.0 * s / PI).sqrt() * sph_j(l + 1, s);
    Ok(k.sqrt() * r0 / 2f64.sqrt() * j_next)
}
