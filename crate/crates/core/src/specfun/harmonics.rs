use crate::prelude::*;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::legendre::assoc_unchecked;
use crate::{Error, Result};

/// Flat position of `(l, m)` in tables ordered `(0,0), (1,−1), (1,0), (1,1), …`.
pub fn harmonic_index(l: usize, m: i64) -> usize {
    (l * l) as usize + (l as i64 + m) as usize
}

/// sqrt((2l+1)/4π · (l−m)!/(l+m)!) for m ≥ 0.
fn norm(l: usize, m: usize) -> f64 {
    let mut ratio = 1.0;
    for k in (l - m + 1)..=(l + m) {
        ratio /= k as f64;
    }
    ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt()
}

const ANGLE_SLACK: f64 = 1e-12;

/// Y_{l,m}(θ, φ) with the (−1)ᵐ phase; negative m through
/// conj(Y_{l,m}) = (−1)ᵐ Y_{l,−m}.
pub fn spherical_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::Domain(format!("spherical_harmonic: |m|={} > l={l}", m.abs())));
    }
    if !(-ANGLE_SLACK..=PI + ANGLE_SLACK).contains(&theta) {
        return Err(Error::Domain(format!("theta={theta} outside [0, π]")));
    }
    if !(-PI - ANGLE_SLACK..=PI + ANGLE_SLACK).contains(&phi) {
        return Err(Error::Domain(format!("phi={phi} outside [−π, π]")));
    }
    Ok(ylm_unchecked(l, m, theta.cos(), phi))
}

fn ylm_unchecked(l: usize, m: i64, cos_theta: f64, phi: f64) -> Complex64 {
    let ma = m.unsigned_abs() as usize;
    let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
    let base = sign * norm(l, ma) * assoc_unchecked(l, ma, cos_theta.clamp(-1.0, 1.0));
    let pos = Complex64::from_polar(base, ma as f64 * phi);
    if m >= 0 { pos } else { pos.conj() * sign }
}

/// All Y_{l,m}(θ, φ) for `l ≤ l_max` at one direction.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    l_max: usize,
    values: Vec<Complex64>,
}

impl HarmonicTable {
    pub fn new(l_max: usize, cos_theta: f64, phi: f64) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); (l_max + 1) * (l_max + 1)];
        let x = cos_theta.clamp(-1.0, 1.0);
        let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
        let mut pmm = 1.0;
        for m in 0..=l_max {
            if m > 0 {
                pmm *= (2 * m - 1) as f64 * somx2;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let e = Complex64::from_polar(1.0, m as f64 * phi);
            // P_l^m for l = m, m+1, …
            let (mut a, mut b) = (pmm, x * (2 * m + 1) as f64 * pmm);
            for l in m..=l_max {
                let p = if l == m {
                    a
                } else if l == m + 1 {
                    b
                } else {
                    let next = (x * (2 * l - 1) as f64 * b - (l + m - 1) as f64 * a) / (l - m) as f64;
                    a = b;
                    b = next;
                    next
                };
                let y = e * (sign * norm(l, m) * p);
                values[harmonic_index(l, m as i64)] = y;
                if m > 0 {
                    values[harmonic_index(l, -(m as i64))] = y.conj() * sign;
                }
            }
        }
        Self { l_max, values }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        self.values[harmonic_index(l, m)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y00_constant() {
        let v = spherical_harmonic(0, 0, 1.0, -2.0).unwrap();
        assert!((v.re - 0.282_094_791_773_878_1).abs() < 1e-15 && v.im == 0.0);
        assert!((v.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn y10_at_pole() {
        let v = spherical_harmonic(1, 0, 0.0, 0.0).unwrap();
        assert!((v.re - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn conjugation_rule() {
        // deterministic pseudo-random angles
        let mut seed = 12345u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10 {
            let theta = PI * rnd();
            let phi = PI * (2.0 * rnd() - 1.0);
            for l in 0..6 {
                for m in 0..=l as i64 {
                    let a = spherical_harmonic(l, m, theta, phi).unwrap().conj();
                    let b = spherical_harmonic(l, -m, theta, phi).unwrap()
                        * if m % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((a - b).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn table_matches_pointwise() {
        let (theta, phi) = (0.7, 2.1);
        let t = HarmonicTable::new(7, theta.cos(), phi);
        for l in 0..=7 {
            for m in -(l as i64)..=l as i64 {
                let a = spherical_harmonic(l, m, theta, phi).unwrap();
                assert!((t.get(l, m) - a).norm() < 1e-13, "l={l} m={m}");
            }
        }
    }

    #[test]
    fn invalid_mode() {
        assert!(spherical_harmonic(1, 2, 0.1, 0.1).is_err());
        assert!(spherical_harmonic(1, 0, 4.0, 0.1).is_err());
        assert!(spherical_harmonic(1, 0, 1.0, 3.5).is_err());
    }
}
