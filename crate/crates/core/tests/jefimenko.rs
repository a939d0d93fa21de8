use emcavity_core::jefimenko::*;
use emcavity_core::vec3::{self, CVec3};
use emcavity_core::{Complex64, PhysicalConstants, ScalarField, SpacetimeGrid, VectorField3};

#[test]
fn coarse_coulomb_oracle() {
    let k = PhysicalConstants::natural();
    let lattice = SpacetimeGrid::cube([0.0; 3], 1.0, 24, 0.0, 1.0, 1).unwrap();
    let src = GaussianCharge::new(1.0, 0.2, [0.0; 3], &lattice).unwrap();
    for x in [[0.9, 0.1, 0.0], [0.0, -1.3, 0.4], [0.7, 0.7, 0.7]] {
        let (e, b) = fields_at(&src, x, 0.0, &k).unwrap();
        let want = src.field(x, &k);
        let err = vec3::norm(&vec3::sub(&e.re(), &want));
        assert!(err < 1e-2 * vec3::norm(&want), "{x:?}: {err:e}");
        assert!(e.im().iter().all(|v| *v == 0.0));
        assert_eq!(b, CVec3::ZERO);
    }
}

#[test]
fn retarded_potentials_obey_lorentz_gauge() {
    let k = PhysicalConstants::natural();
    let lattice = SpacetimeGrid::cube([0.0; 3], 0.6, 17, 0.0, 1.0, 1).unwrap();
    let src = OscillatingDipole::new(1.0, 2.0 * std::f64::consts::PI, 0.1, [0.0; 3], &lattice).unwrap();
    let mut res = Vec::new();
    for n in [5usize, 9] {
        let h = 0.1 / (n - 1) as f64;
        let grid = SpacetimeGrid::cube([0.8, 0.25, 0.15], 0.05, n, 0.3 - h / 2.0, h / 2.0, 3).unwrap();
        let (v, a) = retarded_potentials(&src, &grid, &k).unwrap();
        let scale = emcavity_core::fields::scalar_interior_max(&emcavity_core::fields::time_derivative(&v).unwrap(), 1);
        res.push(lorentz_gauge_residual(&v, &a, &k).unwrap() / scale);
    }
    assert!(res[0] < 1e-2, "{res:?}");
    assert!(res[1] < res[0] / 3.0, "{res:?}");
}

fn pulse_history(scale_late: Option<usize>) -> SourceHistory {
    let grid = SpacetimeGrid::cube([0.0; 3], 1.0, 12, 0.0, 0.1, 60).unwrap();
    let mut rho = ScalarField::sample(grid, |t, x| {
        Complex64::new(gaussian(x, [0.0; 3], 0.15) * (1.0 + 0.5 * (3.0 * t).sin()), 0.0)
    })
    .unwrap()
    .into_values();
    let mut j = VectorField3::sample(grid, |t, x| {
        CVec3::from_real([0.0, 0.0, gaussian(x, [0.0; 3], 0.15) * t.cos()])
    })
    .unwrap()
    .into_values();
    if let Some(from) = scale_late {
        let s = grid.spatial_len();
        for v in &mut rho[from * s..] {
            *v *= 2.0;
        }
        for v in &mut j[from * s..] {
            *v = *v * 2.0;
        }
    }
    let tol = HistoryTolerances { continuity: f64::INFINITY, decay: 1e-6 };
    SourceHistory::new(
        ScalarField::from_values(grid, rho).unwrap(),
        VectorField3::from_values(grid, j).unwrap(),
        0.9,
        &tol,
    )
    .unwrap()
}

#[test]
fn fields_ignore_the_future_bitwise() {
    let k = PhysicalConstants::natural();
    let (x, t) = ([3.0, 0.0, 0.0], 5.0);
    // retarded times lie in [5 − 3.9, 5 − 2.1] = [1.1, 2.9], so levels past 30 are unused
    let a = pulse_history(None);
    let b = pulse_history(Some(31));
    assert_eq!(fields_at(&a, x, t, &k).unwrap(), fields_at(&b, x, t, &k).unwrap());
    assert_eq!(potentials_at(&a, x, t, &k).unwrap(), potentials_at(&b, x, t, &k).unwrap());
    // and they do see the change once it is in the past light cone
    assert_ne!(fields_at(&a, x, 5.9, &k).unwrap(), fields_at(&b, x, 5.9, &k).unwrap());
}

#[test]
fn history_outside_coverage_is_an_error() {
    let k = PhysicalConstants::natural();
    let a = pulse_history(None);
    assert!(matches!(
        fields_at(&a, [3.0, 0.0, 0.0], 1.0, &k),
        Err(emcavity_core::Error::Coverage(_))
    ));
}
