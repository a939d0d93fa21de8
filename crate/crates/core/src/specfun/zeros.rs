use alloc::{format, vec::Vec};


use super::bessel::{sph_j, sph_jp};
use super::radial::ZERO_TOL;
use crate::{Error, Result};

/// Ascending positive k with j_l(k·r₀) = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    l: usize,
    r0: f64,
    zeros: Vec<f64>,
}

impl ZeroTable {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// j_l(k_n r₀) for each entry.
    pub fn residuals(&self) -> impl Iterator<Item = f64> + '_ {
        self.zeros.iter().map(|&k| sph_j(self.l, k * self.r0))
    }
}

const SCAN_STEP: f64 = 0.3;
const BISECT_TOL: f64 = 1e-6;
const MAX_NEWTON: usize = 50;

/// The first `count` zeros of j_l, scaled by 1/r₀.
///
/// Sign changes are found by scanning upward from s = l + ½ (no zero of j_l
/// lies below l) with a step well under the zero spacing, then bisected and
/// Newton-polished.
pub fn bessel_zeros(l: usize, r0: f64, count: usize) -> Result<ZeroTable> {
    if count == 0 {
        return Err(Error::Domain("bessel_zeros: count must be at least 1".into()));
    }
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(Error::Domain(format!("bessel_zeros: r0={r0} must be positive")));
    }
    let mut zeros = Vec::with_capacity(count);
    let mut a = l as f64 + 0.5;
    let mut fa = sph_j(l, a);
    while zeros.len() < count {
        let b = a + SCAN_STEP;
        let fb = sph_j(l, b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            let n = zeros.len() + 1;
            zeros.push(polish(l, n, a, b, fa)? / r0);
        }
        a = b;
        fa = fb;
    }
    Ok(ZeroTable { l, r0, zeros })
}

fn polish(l: usize, n: usize, mut a: f64, mut b: f64, fa: f64) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    let sa = fa.signum();
    while b - a > BISECT_TOL {
        let m = 0.5 * (a + b);
        if sph_j(l, m).signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    let (lo, hi) = (a, b);
    let mut s = 0.5 * (a + b);
    for _ in 0..MAX_NEWTON {
        let f = sph_j(l, s);
        let d = sph_jp(l, s);
        if f.abs() < 0.01 * ZERO_TOL * d.abs().max(1.0) {
            return Ok(s);
        }
        let step = f / d;
        let next = s - step;
        if !(lo - BISECT_TOL..=hi + BISECT_TOL).contains(&next) {
            break;
        }
        if step.abs() <= f64::EPSILON * s {
            s = next;
            break;
        }
        s = next;
    }
    let f = sph_j(l, s);
    if f.abs() < ZERO_TOL * sph_jp(l, s).abs().max(1.0) {
        Ok(s)
    } else {
        Err(Error::Convergence(format!("zero polish for l={l}, n={n} (residual {f:e})")))
    }
}
