use std::f64::consts::PI;

use emcavity_core::cavity::*;
use emcavity_core::fields::convergence_order;
use emcavity_core::specfun::*;
use emcavity_core::{Complex64, Error, PhysicalConstants};

fn nat() -> PhysicalConstants {
    PhysicalConstants::natural()
}

fn zero(l: usize, n: usize, r0: f64) -> f64 {
    bessel_zeros(l, r0, n).unwrap().zeros()[n - 1]
}

#[test]
fn delta_family_is_orthonormal() {
    let cfg = CavityConfig::new(1.7, nat(), 3, 3).unwrap();
    let modes = cfg.modes();
    let g = gram_matrix(&modes, &BallRule::with_default_orders(1.7).unwrap()).unwrap();
    let n = modes.len();
    assert_eq!(n, 48);
    for a in 0..n {
        for b in 0..n {
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((g[a * n + b] - want).norm() < 1e-6, "{:?} {:?}", modes[a], modes[b]);
        }
    }
}

#[test]
fn laplacian_eigen_relation_is_second_order() {
    for (l, m, k) in [(0usize, 0i64, PI), (2, 1, 3.3), (1, -1, 7.1)] {
        let mode = ModeIndex::new(l, m, k).unwrap();
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for n in [9usize, 17, 33] {
            let (res, scale) = laplacian_eigen_check(mode, [0.45, 0.3, 0.2], 0.2, n).unwrap();
            hs.push(0.4 / (n - 1) as f64);
            errs.push(res / (k * k * scale));
        }
        let p = convergence_order(&hs, &errs).unwrap();
        assert!((1.8..=2.2).contains(&p), "l={l} k={k}: order {p}, errors {errs:?}");
    }
}

#[test]
fn computed_w_lives_on_l1() {
    let w = w_coefficients(6, &SphereRule::default_orders()).unwrap();
    assert!((w.total() - 4.0 * PI).abs() < 1e-8);
    assert!((w.beta(1) - 4.0 * PI).abs() < 1e-8);
    assert!(w.beta(0) < 1e-20);
    assert_eq!(w.reading(), BetaReading::Computed);
}

proptest::proptest! {
    #[test]
    fn ball_integral_matches_elementary_form(k in 0.1f64..20.1, r0 in 0.1f64..3.1) {
        let x = k * r0;
        let closed = 4.0 * PI / (k * k * k) * (x.sin() - x * x.cos());
        let v = ball_fourier_integral(k, r0).unwrap();
        proptest::prop_assert!((v - closed).abs() <= 1e-12 * closed.abs().max(1.0), "k={} r0={}", k, r0);
    }
}

#[test]
fn charge_formula_matches_density_quadrature() {
    // ρ(x, 0) = (k/c)(α − β)·4πk²·j₀(k|x|) for a radial-transform pair on S(k)
    let k = nat();
    let r0 = 1.0;
    let k0 = PI / r0;
    let one = Complex64::new(1.0, 0.0);
    let mut set = ModeAmplitudes::new();
    set.insert(ModeAmplitude::new(0, k0, r0, one, -one).unwrap()).unwrap();
    let q = charge_q(&set, r0, &k).unwrap();
    let gl = GaussLegendre::new(64).unwrap();
    let quad = 4.0 * PI * gl.integrate(0.0, r0, |r| k0 * 2.0 * 4.0 * PI * k0 * k0 * sph_j(0, k0 * r) * r * r);
    assert!((q.re - quad).abs() < 1e-10 * quad.abs(), "{q} vs {quad}");
    let by_hand = 2.0 * (2.0 * PI * r0).powf(1.5) * 4.0 * PI * PI.powf(1.5) * r0.powf(-1.5)
        * bessel_j_half(1, PI).unwrap();
    assert!((q.re - by_hand).abs() < 1e-12 * by_hand.abs());
}

fn field(q: f64, l0: usize, n: usize, w: &WCoefficients) -> FundamentalField {
    let k0 = zero(l0, n, 1.0);
    FundamentalField::new(&alpha_from_q(q, l0, k0, 1.0, &nat()).unwrap(), 1.0, &nat(), w).unwrap()
}

#[test]
fn energy_quadrature_matches_closed_form() {
    let w = WCoefficients::parametric(6, 1.3).unwrap();
    let rule = BallRule::with_default_orders(1.0).unwrap();
    for (l0, n) in [(0usize, 1usize), (2, 2), (4, 1), (6, 3)] {
        let f = field(0.8, l0, n, &w);
        for t in [0.0, 0.07, 0.31] {
            let quad = ball_energy(std::slice::from_ref(&f), t, &rule).unwrap();
            let closed = energy_instant(0.8, l0, f.k0(), 1.0, t, &nat(), &w).unwrap();
            assert!((quad - closed).abs() < 0.02 * closed, "l0={l0} t={t}: {quad} vs {closed}");
        }
    }
}

#[test]
fn computed_reading_energy_for_l1() {
    // alpha is free on the l0 = 1 lattice; use the amplitude form of the energy
    let k = nat();
    let w = w_coefficients(2, &SphereRule::default_orders()).unwrap();
    let rule = BallRule::with_default_orders(1.0).unwrap();
    let k0 = zero(1, 2, 1.0);
    let amp = ModeAmplitude::new(1, k0, 1.0, Complex64::new(0.4, 0.0), Complex64::new(-0.4, 0.0)).unwrap();
    let f = FundamentalField::new(&amp, 1.0, &k, &w).unwrap();
    for t in [0.0, 0.2] {
        let quad = ball_energy(std::slice::from_ref(&f), t, &rule).unwrap();
        let closed = energy_from_amplitude(&amp, 1.0, t, &k, &w);
        assert!((quad - closed).abs() < 1e-8 * closed, "{quad} vs {closed}");
    }
}

#[test]
fn computed_reading_kills_other_orders() {
    let w = w_coefficients(4, &SphereRule::default_orders()).unwrap();
    let f = field(1.0, 2, 1, &w);
    let e = f.e_spherical(0.5, 0.7, 0.2, 0.0);
    assert!(e.norm() < 1e-12);
    assert!(energy_mean(1.0, 2, f.k0(), 1.0, &nat(), &w).unwrap() < 1e-20);
}

#[test]
fn fields_are_real_up_to_a_global_phase() {
    let w = WCoefficients::parametric(4, 2.0).unwrap();
    let wc = w_coefficients(2, &SphereRule::default_orders()).unwrap();
    let k0 = zero(1, 1, 1.0);
    let l1 = ModeAmplitude::new(1, k0, 1.0, Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)).unwrap();
    let fields = [
        field(1.0, 0, 2, &w),
        field(1.0, 2, 1, &w),
        field(1.0, 3, 2, &w),
        FundamentalField::new(&l1, 1.0, &nat(), &wc).unwrap(),
    ];
    for f in &fields {
        let unphase = f.global_phase().conj();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for &(r, th, ph, t) in &[(0.3, 0.4, 1.0, 0.0), (0.8, 2.0, -2.5, 0.1), (0.55, 1.1, 0.3, 0.37)] {
            let e = f.e_spherical(r, th, ph, t) * unphase;
            worst = worst.max(e.im().iter().fold(0.0f64, |a, v| a.max(v.abs())));
            scale = scale.max(e.norm());
        }
        assert!(worst < 1e-10 * scale, "l0={}: {worst:e}", f.l0());
    }
}

#[test]
fn distinct_modes_are_orthogonal_and_energies_add() {
    let w = WCoefficients::parametric(4, 1.0).unwrap();
    let rule = BallRule::with_default_orders(1.0).unwrap();
    let a = field(1.0, 0, 1, &w);
    let b = field(0.5, 0, 3, &w);
    let c = field(1.0, 2, 1, &w);
    for (x, y) in [(&a, &b), (&a, &c), (&b, &c)] {
        let t = 0.13;
        let ip = ball_inner(x, y, t, &rule).unwrap();
        let nx = ball_inner(x, x, t, &rule).unwrap().re.sqrt();
        let ny = ball_inner(y, y, t, &rule).unwrap().re.sqrt();
        assert!(ip.norm() < 1e-6 * nx * ny, "{ip}");
    }
    let t = 0.21;
    let total = ball_energy(&[a.clone(), b.clone(), c.clone()], t, &rule).unwrap();
    let sum: f64 = [(1.0, 0, &a), (0.5, 0, &b), (1.0, 2, &c)]
        .iter()
        .map(|(q, l, f)| energy_instant(*q, *l, f.k0(), 1.0, t, &nat(), &w).unwrap())
        .sum();
    assert!((total - sum).abs() < 1e-6 * sum, "{total} vs {sum}");
}

fn simpson_mean(f: impl Fn(f64) -> f64, t0: f64, period: f64) -> f64 {
    let n = 64;
    let h = period / n as f64;
    let mut acc = f(t0) + f(t0 + period);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(t0 + i as f64 * h);
    }
    acc * h / 3.0 / period
}

#[test]
fn cycle_mean_is_closed_form_and_origin_free() {
    let k = nat();
    let w = WCoefficients::parametric(4, 1.0).unwrap();
    let k0 = zero(4, 2, 1.0);
    let mean = energy_mean(1.1, 4, k0, 1.0, &k, &w).unwrap();
    let period = PI / k0;
    for t0 in [0.0, 0.3, -1.7] {
        let m = simpson_mean(|t| energy_instant(1.1, 4, k0, 1.0, t, &k, &w).unwrap(), t0, period);
        assert!((m - mean).abs() < 1e-10 * mean);
        assert!((m - mean).abs() < 1e-12 * mean.max(1.0));
    }
}

#[test]
fn energy_scales_as_charge_squared() {
    let w = WCoefficients::parametric(4, 1.0).unwrap();
    for (l0, n) in [(0usize, 1usize), (2, 5), (4, 3)] {
        let k0 = zero(l0, n, 1.0);
        let u = energy_mean(0.37, l0, k0, 1.0, &nat(), &w).unwrap();
        let u2 = energy_mean(0.74, l0, k0, 1.0, &nat(), &w).unwrap();
        assert_eq!(u2, 4.0 * u);
    }
}

#[test]
fn first_l0_zero_energies_are_positive() {
    let w = WCoefficients::parametric(0, 1.0).unwrap();
    let s = energy_spectrum(1.0, &[0], 1..=3, 1.0, &nat(), &w).unwrap();
    assert!(s.rows.iter().all(|r| r.mean_energy > 0.0));
    let trend: Vec<f64> = s.rows.iter().map(|r| r.mean_energy).collect();
    println!("l0 = 0 mean energies for n = 1..3: {trend:?}");
}

#[test]
fn wall_flux_vanishes_over_a_period() {
    let w = WCoefficients::parametric(4, 1.0).unwrap();
    let rule = SphereRule::default_orders();
    for f in [field(1.0, 0, 1, &w), field(1.0, 2, 2, &w), field(1.0, 4, 1, &w)] {
        let period = 2.0 * PI / f.omega();
        for i in 0..32 {
            let rate = charge_rate(&f, period * i as f64 / 32.0, &rule);
            assert!(rate.norm() < 1e-10, "l0={} rate={rate}", f.l0());
        }
    }
}

#[test]
fn equal_indices_give_zero_difference() {
    let w = WCoefficients::parametric(4, 1.0).unwrap();
    let rows = balmer_differences(1.0, 4, 1.0, &nat(), &w, &[22, 22, 25]).unwrap();
    assert_eq!(rows[0].difference, 0.0);
}

#[test]
fn even_order_difference_sign_follows_model() {
    let w = WCoefficients::parametric(8, 1.0).unwrap();
    let idx: Vec<usize> = (20..=40).collect();
    for l0 in [4usize, 6, 8] {
        let (q0, q2) = (rayleigh_q(l0)[0], rayleigh_q(l0)[2]);
        assert!(q0 * q2 != 0.0);
        for r in balmer_differences(1.0, l0, 1.0, &nat(), &w, &idx).unwrap() {
            assert_eq!(r.difference.signum(), r.model.signum(), "l0={l0} n1={}", r.n1);
        }
    }
}

#[test]
fn low_even_orders_are_flat() {
    // J_{3/2}/J_{3/2} = 1 for l0 = 0, and J_{7/2} = −J_{3/2} at zeros of j_2
    let w = WCoefficients::parametric(2, 1.0).unwrap();
    for l0 in [0usize, 2] {
        let s = energy_spectrum(1.0, &[l0], 1..=30, 1.0, &nat(), &w).unwrap();
        let u0 = s.rows[0].mean_energy;
        for r in &s.rows {
            assert!((r.mean_energy - u0).abs() < 1e-12 * u0, "l0={l0} n={}", r.n);
        }
    }
}

#[test]
fn l1_lattice_cannot_be_fixed_by_charge() {
    let k0 = zero(1, 4, 1.0);
    let w = WCoefficients::parametric(1, 1.0).unwrap();
    assert!(matches!(alpha_from_q(1.0, 1, k0, 1.0, &nat()), Err(Error::Precondition(_))));
    assert!(matches!(energy_mean(1.0, 1, k0, 1.0, &nat(), &w), Err(Error::Precondition(_))));
}

#[test]
fn projection_error_is_monotone() {
    let gl = GaussLegendre::new(200).unwrap();
    for l in [0usize, 1, 2] {
        let errs = radial_projection_errors(|r| r.powi(l as i32) * (1.0 - r * r) * (1.0 + r), l, 1.0, 20, &gl).unwrap();
        for p in errs.windows(2) {
            assert!(p[1] <= p[0] * (1.0 + 1e-12), "l={l}: {errs:?}");
        }
        assert!(errs[19] < 0.02 * errs[0], "l={l}: {errs:?}");
    }
}
