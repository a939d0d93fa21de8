//! Coefficients of the polynomials in
//! j_l(s) = [P_l(1/s)·sin s − Q_{l−1}(1/s)·cos s] / s.
//!
//! Both families follow the spherical Bessel recurrence
//! X_{l+1}(x) = (2l+1)·x·X_l(x) − X_{l−1}(x).

use alloc::{vec, vec::Vec};


fn step(cur: &[f64], prev: &[f64], two_l_plus_one: f64) -> Vec<f64> {
    let mut next = vec![0.0; cur.len() + 1];
    for (i, &c) in cur.iter().enumerate() {
        next[i + 1] += two_l_plus_one * c;
    }
    for (i, &p) in prev.iter().enumerate() {
        next[i] -= p;
    }
    next
}

/// Ascending coefficients of P_l (degree l).
pub fn rayleigh_p(l: usize) -> Vec<f64> {
    let (mut prev, mut cur) = (vec![1.0], vec![0.0, 1.0]);
    if l == 0 {
        return prev;
    }
    for k in 1..l {
        let next = step(&cur, &prev, (2 * k + 1) as f64);
        prev = cur;
        cur = next;
    }
    cur
}

/// Ascending coefficients of Q_l (degree l), with Q₀ = 1.
pub fn rayleigh_q(l: usize) -> Vec<f64> {
    // Q_{−1} = 0, Q₀ = 1; Q_l pairs with order l+1 in the recurrence.
    let (mut prev, mut cur): (Vec<f64>, Vec<f64>) = (vec![0.0], vec![1.0]);
    for k in 1..=l {
        let next = step(&cur, &prev, (2 * k + 1) as f64);
        prev = cur;
        cur = next;
    }
    cur
}

pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::sph_j;


    #[test]
    fn known_coefficients() {
        assert_eq!(rayleigh_p(1), [0.0, 1.0]);
        assert_eq!(rayleigh_p(2), [-1.0, 0.0, 3.0]);
        assert_eq!(rayleigh_p(3), [0.0, -6.0, 0.0, 15.0]);
        assert_eq!(rayleigh_q(0), [1.0]);
        assert_eq!(rayleigh_q(1), [0.0, 3.0]);
        assert_eq!(rayleigh_q(2), [-1.0, 0.0, 15.0]);
        assert_eq!(rayleigh_q(4), [1.0, 0.0, -105.0, 0.0, 945.0]);
    }

    #[test]
    fn reproduces_spherical_bessel() {
        for l in 1..7 {
            let (p, q) = (rayleigh_p(l), rayleigh_q(l - 1));
            for &s in &[2.0, 5.5, 13.0] {
                let x = 1.0 / s;
                let v = (eval_poly(&p, x) * s.sin() - eval_poly(&q, x) * s.cos()) / s;
                assert!((v - sph_j(l, s)).abs() < 1e-12, "l={l} s={s}");
            }
        }
    }

    #[test]
    fn parity_up_to_four() {
        for l in 0..=4 {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            let (p, q) = (rayleigh_p(l), rayleigh_q(l));
            assert_eq!(eval_poly(&p, -1.0), sign * eval_poly(&p, 1.0));
            assert_eq!(eval_poly(&q, -1.0), sign * eval_poly(&q, 1.0));
        }
    }
}
