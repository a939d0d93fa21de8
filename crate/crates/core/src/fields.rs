//! Finite-difference vector calculus on [`SpacetimeGrid`]s and the Maxwell
//! residual checks built from it.
//!
//! First derivatives use second-order central differences at interior nodes
//! and second-order one-sided differences on the boundary. Second derivatives
//! use the compact three-point form. A time axis with a single level is a
//! static snapshot: its time derivatives are zero.
//!
//! Residual norms are maxima of the Euclidean node norm over interior nodes
//! only, so the one-sided boundary stencils never enter them.

use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::prelude::*;
use crate::vec3::CVec3;
use crate::{Error, PhysicalConstants, Result, ScalarField, SpacetimeGrid, VectorField3};

/// Values a stencil can combine.
pub trait Node: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    const ZERO: Self;
}

impl Node for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
}

impl Node for CVec3 {
    const ZERO: Self = CVec3::ZERO;
}

/// Axis of a spacetime array: 0 is time, 1..=3 are x, y, z.
fn axis_geometry(grid: &SpacetimeGrid, axis: usize) -> (usize, usize, f64) {
    let n = grid.n();
    match axis {
        0 => (grid.nt(), grid.spatial_len(), grid.dt()),
        1 => (n[0], n[1] * n[2], grid.h()),
        2 => (n[1], n[2], grid.h()),
        3 => (n[2], 1, grid.h()),
        _ => unreachable!("axis index {axis}"),
    }
}

fn check_time_axis(grid: &SpacetimeGrid) -> Result<()> {
    if grid.nt() == 2 {
        return Err(Error::Shape("time derivatives need nt = 1 (static) or nt ≥ 3".into()));
    }
    Ok(())
}

/// First derivative along `axis`.
pub fn diff1<T: Node>(v: &[T], grid: &SpacetimeGrid, axis: usize) -> Result<Vec<T>> {
    if axis == 0 {
        check_time_axis(grid)?;
    }
    let (len, stride, d) = axis_geometry(grid, axis);
    if len == 1 {
        return Ok(vec![T::ZERO; v.len()]);
    }
    let inv = 0.5 / d;
    Ok((0..v.len())
        .map(|idx| {
            let p = (idx / stride) % len;
            if p == 0 {
                (v[idx + stride] * 4.0 - v[idx] * 3.0 - v[idx + 2 * stride]) * inv
            } else if p == len - 1 {
                (v[idx] * 3.0 - v[idx - stride] * 4.0 + v[idx - 2 * stride]) * inv
            } else {
                (v[idx + stride] - v[idx - stride]) * inv
            }
        })
        .collect())
}

/// Second derivative along `axis`.
pub fn diff2<T: Node>(v: &[T], grid: &SpacetimeGrid, axis: usize) -> Result<Vec<T>> {
    if axis == 0 {
        check_time_axis(grid)?;
    }
    let (len, stride, d) = axis_geometry(grid, axis);
    if len == 1 {
        return Ok(vec![T::ZERO; v.len()]);
    }
    let inv = 1.0 / (d * d);
    Ok((0..v.len())
        .map(|idx| {
            let p = (idx / stride) % len;
            let s = stride;
            if p == 0 && len >= 4 {
                (v[idx] * 2.0 - v[idx + s] * 5.0 + v[idx + 2 * s] * 4.0 - v[idx + 3 * s]) * inv
            } else if p == len - 1 && len >= 4 {
                (v[idx] * 2.0 - v[idx - s] * 5.0 + v[idx - 2 * s] * 4.0 - v[idx - 3 * s]) * inv
            } else {
                // interior, or the shifted three-point form on a 3-node axis
                let c = p.clamp(1, len - 2);
                let m = idx + c * s - p * s;
                (v[m + s] - v[m] * 2.0 + v[m - s]) * inv
            }
        })
        .collect())
}

fn components(f: &VectorField3) -> [Vec<Complex64>; 3] {
    let v = f.values();
    [0, 1, 2].map(|a| v.iter().map(|x| x.0[a]).collect())
}

pub fn grad(f: &ScalarField) -> Result<VectorField3> {
    let g = *f.grid();
    let [dx, dy, dz] = [1, 2, 3].map(|a| diff1(f.values(), &g, a));
    let (dx, dy, dz) = (dx?, dy?, dz?);
    let values = (0..dx.len()).map(|i| CVec3([dx[i], dy[i], dz[i]])).collect();
    Ok(VectorField3::from_values_unchecked(g, values))
}

pub fn div(f: &VectorField3) -> Result<ScalarField> {
    let g = *f.grid();
    let c = components(f);
    let mut out = diff1(&c[0], &g, 1)?;
    for a in 1..3 {
        for (o, d) in out.iter_mut().zip(diff1(&c[a], &g, a + 1)?) {
            *o += d;
        }
    }
    Ok(ScalarField::from_values_unchecked(g, out))
}

pub fn curl(f: &VectorField3) -> Result<VectorField3> {
    let g = *f.grid();
    let [fx, fy, fz] = components(f);
    let dy_fz = diff1(&fz, &g, 2)?;
    let dz_fy = diff1(&fy, &g, 3)?;
    let dz_fx = diff1(&fx, &g, 3)?;
    let dx_fz = diff1(&fz, &g, 1)?;
    let dx_fy = diff1(&fy, &g, 1)?;
    let dy_fx = diff1(&fx, &g, 2)?;
    let values = (0..fx.len())
        .map(|i| CVec3([dy_fz[i] - dz_fy[i], dz_fx[i] - dx_fz[i], dx_fy[i] - dy_fx[i]]))
        .collect();
    Ok(VectorField3::from_values_unchecked(g, values))
}

fn laplacian_values<T: Node>(v: &[T], g: &SpacetimeGrid) -> Result<Vec<T>> {
    let mut out = diff2(v, g, 1)?;
    for a in 2..=3 {
        for (o, d) in out.iter_mut().zip(diff2(v, g, a)?) {
            *o = *o + d;
        }
    }
    Ok(out)
}

pub fn laplacian(f: &ScalarField) -> Result<ScalarField> {
    Ok(ScalarField::from_values_unchecked(*f.grid(), laplacian_values(f.values(), f.grid())?))
}

pub fn vector_laplacian(f: &VectorField3) -> Result<VectorField3> {
    Ok(VectorField3::from_values_unchecked(*f.grid(), laplacian_values(f.values(), f.grid())?))
}

pub fn time_derivative(f: &ScalarField) -> Result<ScalarField> {
    Ok(ScalarField::from_values_unchecked(*f.grid(), diff1(f.values(), f.grid(), 0)?))
}

pub fn vector_time_derivative(f: &VectorField3) -> Result<VectorField3> {
    Ok(VectorField3::from_values_unchecked(*f.grid(), diff1(f.values(), f.grid(), 0)?))
}

fn dalembertian_values<T: Node>(v: &[T], g: &SpacetimeGrid, consts: &PhysicalConstants) -> Result<Vec<T>> {
    if g.nt() < 3 {
        return Err(Error::Shape(format!("d'Alembertian needs nt ≥ 3, got {}", g.nt())));
    }
    let mut out = laplacian_values(v, g)?;
    let k = consts.inv_c2();
    for (o, d) in out.iter_mut().zip(diff2(v, g, 0)?) {
        *o = *o - d * k;
    }
    Ok(out)
}

/// □²f = ∇²f − μ₀ε₀ ∂²f/∂t².
pub fn dalembertian(f: &ScalarField, consts: &PhysicalConstants) -> Result<ScalarField> {
    Ok(ScalarField::from_values_unchecked(*f.grid(), dalembertian_values(f.values(), f.grid(), consts)?))
}

pub fn vector_dalembertian(f: &VectorField3, consts: &PhysicalConstants) -> Result<VectorField3> {
    Ok(VectorField3::from_values_unchecked(*f.grid(), dalembertian_values(f.values(), f.grid(), consts)?))
}

/// Iterator over flat indices of nodes at least `margin` nodes from every
/// spatial face. In time, the first and last levels are skipped when nt ≥ 3.
pub fn interior_indices(grid: &SpacetimeGrid, margin: usize) -> impl Iterator<Item = usize> + '_ {
    let n = grid.n();
    let tm = if grid.nt() >= 3 { 1 } else { 0 };
    let r = move |len: usize| margin.min(len / 2)..len.saturating_sub(margin.min(len / 2));
    (tm..grid.nt() - tm).flat_map(move |t| {
        r(n[0]).flat_map(move |i| {
            r(n[1]).flat_map(move |j| r(n[2]).map(move |k| grid.index(t, i, j, k)))
        })
    })
}

/// Max over interior nodes of |v|; `norm` maps a node to its magnitude.
pub fn interior_max<T: Copy>(v: &[T], grid: &SpacetimeGrid, margin: usize, norm: impl Fn(T) -> f64) -> f64 {
    interior_indices(grid, margin).fold(0.0, |m, i| m.max(norm(v[i])))
}

pub fn scalar_interior_max(f: &ScalarField, margin: usize) -> f64 {
    interior_max(f.values(), f.grid(), margin, |z| z.norm())
}

pub fn vector_interior_max(f: &VectorField3, margin: usize) -> f64 {
    interior_max(f.values(), f.grid(), margin, |v| v.norm())
}

/// Max-norm residuals of the four Maxwell equations over interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MaxwellResidual {
    /// ∇·E − ρ/ε₀
    pub gauss_e: f64,
    /// ∇·B
    pub gauss_b: f64,
    /// ∇×E + ∂B/∂t
    pub faraday: f64,
    /// ∇×B − μ₀J − μ₀ε₀∂E/∂t
    pub ampere: f64,
}

impl MaxwellResidual {
    pub fn as_array(&self) -> [f64; 4] {
        [self.gauss_e, self.gauss_b, self.faraday, self.ampere]
    }

    pub const NAMES: [&'static str; 4] = ["gauss_E", "gauss_B", "faraday", "ampere"];
}

fn check_all(grids: &[&SpacetimeGrid]) -> Result<()> {
    for g in &grids[1..] {
        grids[0].check_congruent(g)?;
    }
    Ok(())
}

pub fn maxwell_residual(
    e: &VectorField3,
    b: &VectorField3,
    rho: &ScalarField,
    j: &VectorField3,
    consts: &PhysicalConstants,
) -> Result<MaxwellResidual> {
    check_all(&[e.grid(), b.grid(), rho.grid(), j.grid()])?;
    let g = *e.grid();
    let div_e = div(e)?;
    let div_b = div(b)?;
    let curl_e = curl(e)?;
    let curl_b = curl(b)?;
    let db = diff1(b.values(), &g, 0)?;
    let de = diff1(e.values(), &g, 0)?;
    let (eps, mu) = (consts.epsilon0(), consts.mu0());
    let mut r = MaxwellResidual::default();
    for i in interior_indices(&g, 1) {
        r.gauss_e = r.gauss_e.max((div_e.values()[i] - rho.values()[i] / eps).norm());
        r.gauss_b = r.gauss_b.max(div_b.values()[i].norm());
        r.faraday = r.faraday.max((curl_e.values()[i] + db[i]).norm());
        let amp = curl_b.values()[i] - j.values()[i] * mu - de[i] * (mu * eps);
        r.ampere = r.ampere.max(amp.norm());
    }
    Ok(r)
}

/// Max-norms of □²E − ∇ρ/ε₀ − μ₀∂J/∂t and □²B + μ₀∇×J.
pub fn source_dalembertian_identity(
    e: &VectorField3,
    b: &VectorField3,
    rho: &ScalarField,
    j: &VectorField3,
    consts: &PhysicalConstants,
) -> Result<(f64, f64)> {
    check_all(&[e.grid(), b.grid(), rho.grid(), j.grid()])?;
    let g = *e.grid();
    let box_e = dalembertian_values(e.values(), &g, consts)?;
    let box_b = dalembertian_values(b.values(), &g, consts)?;
    let grad_rho = grad(rho)?;
    let dj = diff1(j.values(), &g, 0)?;
    let curl_j = curl(j)?;
    let (eps, mu) = (consts.epsilon0(), consts.mu0());
    let (mut re, mut rb) = (0.0f64, 0.0f64);
    for i in interior_indices(&g, 1) {
        re = re.max((box_e[i] - grad_rho.values()[i] * (1.0 / eps) - dj[i] * mu).norm());
        rb = rb.max((box_b[i] + curl_j.values()[i] * mu).norm());
    }
    Ok((re, rb))
}

/// ∂ρ/∂t + ∇·J at every node.
pub fn continuity_field(rho: &ScalarField, j: &VectorField3) -> Result<ScalarField> {
    rho.grid().check_congruent(j.grid())?;
    let drho = diff1(rho.values(), rho.grid(), 0)?;
    let div_j = div(j)?;
    let v = drho.iter().zip(div_j.values()).map(|(a, b)| a + b).collect();
    Ok(ScalarField::from_values_unchecked(*rho.grid(), v))
}

/// Max-norm of ∂ρ/∂t + ∇·J over interior nodes.
pub fn continuity_residual(rho: &ScalarField, j: &VectorField3) -> Result<f64> {
    Ok(scalar_interior_max(&continuity_field(rho, j)?, 1))
}

/// Max over spatially interior nodes of one time level.
pub fn level_max<T: Copy>(v: &[T], grid: &SpacetimeGrid, ti: usize, margin: usize, norm: impl Fn(T) -> f64) -> f64 {
    let s = grid.spatial_len();
    let frame = grid.with_time(grid.time(ti), grid.dt(), 1).expect("grid already validated");
    interior_max(&v[ti * s..(ti + 1) * s], &frame, margin, norm)
}

/// S = (1/μ₀) E×B, node by node (plain, unconjugated cross product).
pub fn poynting(e: &VectorField3, b: &VectorField3, consts: &PhysicalConstants) -> Result<VectorField3> {
    let inv_mu = 1.0 / consts.mu0();
    e.zip_map(b, |a, c| a.cross(&c) * inv_mu)
}

pub fn poynting_divergence(
    e: &VectorField3,
    b: &VectorField3,
    consts: &PhysicalConstants,
) -> Result<ScalarField> {
    div(&poynting(e, b, consts)?)
}

/// Least-squares slope of ln(err) against ln(h).
pub fn convergence_order(h: &[f64], err: &[f64]) -> Result<f64> {
    if h.len() != err.len() || h.len() < 2 {
        return Err(Error::Shape("convergence fit needs ≥ 2 paired samples".into()));
    }
    if h.iter().chain(err).any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Domain(format!("convergence fit needs positive finite data: h={h:?}, err={err:?}")));
    }
    let n = h.len() as f64;
    let xs: Vec<f64> = h.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|x| x.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3::Vec3;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn grid(n: usize, nt: usize) -> SpacetimeGrid {
        SpacetimeGrid::new([-0.5, -0.3, 0.1], [n; 3], 0.1, 0.0, 0.05, nt).unwrap()
    }

    #[test]
    fn grad_of_constant_is_zero() {
        let f = ScalarField::sample(grid(5, 1), |_, _| c(2.5)).unwrap();
        assert_eq!(grad(&f).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn div_of_position_is_three() {
        let f = VectorField3::sample(grid(5, 1), |_, x| CVec3::from_real(x)).unwrap();
        let d = div(&f).unwrap();
        assert!(d.values().iter().all(|z| (z - c(3.0)).norm() < 1e-12));
    }

    #[test]
    fn curl_of_rotation() {
        let f = VectorField3::sample(grid(5, 1), |_, x| CVec3::from_real([-x[1], x[0], 0.0])).unwrap();
        let r = curl(&f).unwrap();
        for v in r.values() {
            assert!((*v - CVec3::from_real([0.0, 0.0, 2.0])).norm() < 1e-12);
        }
    }

    #[test]
    fn exact_on_quadratics_everywhere() {
        let q = |x: Vec3| 1.0 + x[0] - 2.0 * x[1] * x[2] + 0.5 * x[0] * x[0] + 3.0 * x[2] * x[2];
        let f = ScalarField::sample(grid(4, 1), |_, x| c(q(x))).unwrap();
        let g = grad(&f).unwrap();
        let l = laplacian(&f).unwrap();
        for (idx, (gv, lv)) in g.values().iter().zip(l.values()).enumerate() {
            let (_, i, j, k) = f.grid().unravel(idx);
            let x = f.grid().point(i, j, k);
            let want = CVec3::from_real([1.0 + x[0], -2.0 * x[2], -2.0 * x[1] + 6.0 * x[2]]);
            assert!((*gv - want).norm() < 1e-11);
            assert!((lv - c(7.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn dalembertian_of_plane_waves() {
        let consts = PhysicalConstants::natural();
        let k = [1.0, 0.5, -0.3];
        let kn = crate::vec3::norm(&k);
        let wave = |w: f64| {
            move |t: f64, x: Vec3| Complex64::from_polar(1.0, crate::vec3::dot(&k, &x) - w * t)
        };
        let mut errs = [0.0; 2];
        let mut hs = [0.0; 2];
        for (s, n) in [9usize, 17].into_iter().enumerate() {
            let h = 0.8 / (n - 1) as f64;
            let g = SpacetimeGrid::new([0.0; 3], [n; 3], h, 0.0, h / 2.0, 5).unwrap();
            let f = ScalarField::sample(g, wave(kn)).unwrap();
            errs[s] = scalar_interior_max(&dalembertian(&f, &consts).unwrap(), 1);
            // ω = 2c|k| gives □² = −3|k|²
            let f2 = ScalarField::sample(g, wave(2.0 * kn)).unwrap();
            let d2 = dalembertian(&f2, &consts).unwrap();
            let rel = interior_max(d2.values(), &g, 1, |z| z.norm());
            assert!((rel - 3.0 * kn * kn).abs() < 0.05);
            hs[s] = h;
        }
        assert!(errs[0] < 1e-2);
        let p = convergence_order(&hs, &errs).unwrap();
        assert!((1.8..2.2).contains(&p), "order {p}");
    }

    #[test]
    fn dalembertian_needs_three_levels() {
        let f = ScalarField::zeros(grid(3, 2));
        assert!(matches!(dalembertian(&f, &PhysicalConstants::natural()), Err(Error::Shape(_))));
        let f = ScalarField::zeros(grid(3, 1));
        assert!(dalembertian(&f, &PhysicalConstants::natural()).is_err());
    }

    #[test]
    fn zero_fields_have_zero_residual() {
        let g = grid(4, 3);
        let z = VectorField3::zeros(g);
        let r = maxwell_residual(&z, &z, &ScalarField::zeros(g), &z, &PhysicalConstants::natural()).unwrap();
        assert_eq!(r.as_array(), [0.0; 4]);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let z = VectorField3::zeros(grid(4, 3));
        let w = VectorField3::zeros(grid(5, 3));
        assert!(matches!(curl(&z).and_then(|_| poynting(&z, &w, &PhysicalConstants::natural())), Err(Error::Shape(_))));
    }

    #[test]
    fn poynting_parallel_and_zero() {
        let g = grid(3, 1);
        let e = VectorField3::sample(g, |_, x| CVec3::from_real([x[0], 1.0, 2.0])).unwrap();
        let b = e.map(|v| v * 3.0);
        let consts = PhysicalConstants::natural();
        assert_eq!(poynting(&e, &b, &consts).unwrap().max_norm(), 0.0);
        assert_eq!(poynting(&e, &VectorField3::zeros(g), &consts).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn convergence_fit() {
        let h = [0.1, 0.05, 0.025];
        let e: Vec<f64> = h.iter().map(|x| 3.0 * x * x).collect();
        assert!((convergence_order(&h, &e).unwrap() - 2.0).abs() < 1e-12);
        assert!(convergence_order(&h, &[1.0, 0.0, 1.0]).is_err());
    }
}
