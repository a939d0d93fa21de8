use crate::prelude::*;

use crate::{Error, Result};

fn check_x(x: f64) -> Result<()> {
    if x.abs() > 1.0 || x.is_nan() {
        Err(Error::Domain(format!("Legendre argument {x} outside [-1, 1]")))
    } else {
        Ok(())
    }
}

/// P_l(x) by the three-term recurrence.
pub fn legendre_p(l: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(legendre_unchecked(l, x))
}

pub(crate) fn legendre_unchecked(l: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if l == 0 {
        return prev;
    }
    for k in 1..l {
        let next = ((2 * k + 1) as f64 * x * cur - k as f64 * prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// P_{l,m}(x) = (1 − x²)^{m/2} dᵐP_l/dxᵐ, without a Condon–Shortley phase.
pub fn assoc_legendre_p(l: usize, m: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    if m > l {
        return Err(Error::Domain(format!("assoc_legendre_p: m={m} > l={l}")));
    }
    Ok(assoc_unchecked(l, m, x))
}

pub(crate) fn assoc_unchecked(l: usize, m: usize, x: f64) -> f64 {
    // P_m^m = (2m−1)!! (1−x²)^{m/2}
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut out = 0.0;
    for ll in (m + 2)..=l {
        out = (x * (2 * ll - 1) as f64 * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = out;
    }
    out
}
