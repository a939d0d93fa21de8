use std::f64::consts::PI;

use emcavity_core::specfun::*;
use proptest::prelude::*;

#[test]
fn harmonics_orthonormal_under_default_rule() {
    let rule = SphereRule::default_orders();
    let l_max = 6;
    let n = (l_max + 1) * (l_max + 1);
    let mut g = vec![num_complex::Complex64::new(0.0, 0.0); n * n];
    for node in rule.nodes() {
        let t = HarmonicTable::new(l_max, node.cos_theta, node.phi);
        for l in 0..=l_max {
            for m in -(l as i64)..=(l as i64) {
                for l2 in 0..=l_max {
                    for m2 in -(l2 as i64)..=(l2 as i64) {
                        g[harmonic_index(l, m) * n + harmonic_index(l2, m2)] +=
                            t.get(l, m) * t.get(l2, m2).conj() * node.weight;
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((g[a * n + b] - want).norm() < 1e-12, "({a}, {b}): {}", g[a * n + b]);
        }
    }
}

#[test]
fn j0_zeros_are_multiples_of_pi() {
    let z = bessel_zeros(0, 1.0, 20).unwrap();
    for (i, k) in z.zeros().iter().enumerate() {
        assert!((k - PI * (i + 1) as f64).abs() < 1e-10);
    }
}

#[test]
fn fiftieth_zero_near_asymptote() {
    for l in 0..=3 {
        let z = bessel_zeros(l, 1.0, 50).unwrap();
        let k50 = z.zeros()[49];
        assert!((k50 - PI * (50.0 + l as f64 / 2.0)).abs() < 0.05 * PI, "l={l}: {k50}");
    }
}

#[test]
fn consecutive_orders_share_no_zero() {
    for l in 0..6 {
        let a = bessel_zeros(l, 1.0, 15).unwrap();
        let b = bessel_zeros(l + 1, 1.0, 15).unwrap();
        for ka in a.zeros() {
            for kb in b.zeros() {
                assert!((ka - kb).abs() > 1e-3, "j_{l} and j_{} share {ka}", l + 1);
            }
        }
        // zeros of j_{l+1} interlace those of j_l
        for w in a.zeros().windows(2) {
            assert_eq!(b.zeros().iter().filter(|&&k| k > w[0] && k < w[1]).count(), 1);
        }
    }
}

#[test]
fn lommel_norm_matches_quadrature() {
    let gl = GaussLegendre::new(96).unwrap();
    let pairs = [(0usize, 1usize, 1.0f64), (0, 4, 0.5), (1, 2, 1.0), (2, 3, 2.0), (3, 1, 1.0), (5, 6, 1.5)];
    for &(l, n, r0) in &pairs {
        let k = bessel_zeros(l, r0, n).unwrap().zeros()[n - 1];
        let num = gl.integrate(0.0, r0, |r| tau(l, k, r).powi(2) * r * r);
        let closed = radial_norm_sq(l, k, r0).unwrap();
        assert!((num - closed).abs() < 1e-8 * closed.max(1.0), "l={l}, n={n}: {num} vs {closed}");
    }
}

proptest! {
    #[test]
    fn three_term_recurrence(l in 1usize..25, s in 0.05f64..60.0) {
        let lhs = sph_j(l - 1, s) + sph_j(l + 1, s);
        let rhs = (2 * l + 1) as f64 / s * sph_j(l, s);
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn legendre_bounded(l in 0usize..40, x in -1.0f64..=1.0) {
        prop_assert!(legendre_p(l, x).unwrap().abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn harmonic_conjugation(l in 0usize..12, m in 0i64..12, th in 0.0f64..PI, ph in -PI..PI) {
        prop_assume!(m as usize <= l);
        let y = spherical_harmonic(l, m, th, ph).unwrap();
        let yn = spherical_harmonic(l, -m, th, ph).unwrap();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((y.conj() - yn * sign).norm() < 1e-12);
    }
}
