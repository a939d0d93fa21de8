use crate::prelude::*;
use core::f64::consts::PI;

use crate::{Error, Result};

/// j_l(s) for s > 0.
///
/// Upward recurrence from j₀, j₁ when `s ≥ l`; Miller's downward recurrence,
/// normalised against j₀ or j₁, when `s < l`.
pub fn spherical_bessel_j(l: usize, s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("spherical_bessel_j({l}, {s}): need s > 0")));
    }
    Ok(sph_j(l, s))
}

/// The `s → 0⁺` limit of j_l: 1 for l = 0, 0 otherwise.
pub fn spherical_bessel_j_at_zero(l: usize) -> f64 {
    if l == 0 { 1.0 } else { 0.0 }
}

/// j_l′(s) = j_{l−1}(s) − (l+1)/s·j_l(s), with j₀′ = −j₁.
pub fn spherical_bessel_jp(l: usize, s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("spherical_bessel_jp({l}, {s}): need s > 0")));
    }
    Ok(sph_jp(l, s))
}

/// J_{l+1/2}(s) = sqrt(2s/π)·j_l(s).
pub fn bessel_j_half(l: usize, s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("bessel_j_half({l}, {s}): need s > 0")));
    }
    Ok((2.0 * s / PI).sqrt() * sph_j(l, s))
}

/// Unchecked j_l(s); `s = 0` returns the limit, negative `s` uses parity.
pub fn sph_j(l: usize, s: f64) -> f64 {
    if s == 0.0 {
        return spherical_bessel_j_at_zero(l);
    }
    if s < 0.0 {
        let v = sph_j(l, -s);
        return if l % 2 == 0 { v } else { -v };
    }
    if (l as f64) <= s {
        upward(l, s)
    } else {
        let mut out = vec![0.0; l + 1];
        miller(s, &mut out);
        out[l]
    }
}

/// Unchecked j_l′(s) for s > 0.
pub fn sph_jp(l: usize, s: f64) -> f64 {
    if l == 0 {
        -sph_j(1, s)
    } else {
        let mut v = vec![0.0; l + 1];
        sph_j_all(s, &mut v);
        v[l - 1] - (l as f64 + 1.0) / s * v[l]
    }
}

/// Fill `out[l] = j_l(s)` for `l < out.len()`.
pub fn sph_j_all(s: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let l_max = out.len() - 1;
    if s == 0.0 {
        out.fill(0.0);
        out[0] = 1.0;
        return;
    }
    if (l_max as f64) <= s {
        out[0] = s.sin() / s;
        if l_max >= 1 {
            out[1] = (out[0] - s.cos()) / s;
        }
        for l in 1..l_max {
            out[l + 1] = (2 * l + 1) as f64 / s * out[l] - out[l - 1];
        }
    } else {
        miller(s, out);
    }
}

fn upward(l: usize, s: f64) -> f64 {
    let j0 = s.sin() / s;
    if l == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = (j0 - s.cos()) / s;
    for k in 1..l {
        let next = (2 * k + 1) as f64 / s * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Downward recurrence from an order well above `max(l, s)`.
fn miller(s: f64, out: &mut [f64]) {
    let l_max = out.len() - 1;
    let start = l_max + 20 + (s as usize) + (2.0 * ((l_max + 1) as f64).sqrt()) as usize;
    let mut next = 0.0; // f_{k+1}
    let mut cur = 1e-300; // f_k
    for k in (1..=start).rev() {
        let prev = (2 * k + 1) as f64 / s * cur - next;
        next = cur;
        cur = prev;
        if k - 1 <= l_max {
            out[k - 1] = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            for v in out.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    // `next` holds f_1, `cur` holds f_0.
    let j0 = s.sin() / s;
    let scale = if s < 1.0 {
        j0 / cur
    } else {
        let j1 = (j0 - s.cos()) / s;
        if j0.abs() >= j1.abs() { j0 / cur } else { j1 / next }
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
}
