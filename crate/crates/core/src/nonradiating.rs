//! Wave-equation sources (ρ solving □²ρ = 0 and J = −c²∫₀ᵗ∇ρ ds) and Lorentz
//! boosts of sources and fields.

use num_complex::Complex64;

use crate::dft::{dft3, wavenumber};
use crate::fields::{continuity_residual, curl, diff1, grad, interior_max, Node};
use crate::prelude::*;
use crate::vec3::{self, CVec3, Vec3};
use crate::{Error, PhysicalConstants, Result, ScalarField, SpacetimeGrid, VectorField3};

/// Velocity of S′ relative to S, with γ = 1/sqrt(1 − v²/c²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParams {
    v: Vec3,
    gamma: f64,
}

impl BoostParams {
    pub fn new(v: Vec3, consts: &PhysicalConstants) -> Result<Self> {
        let beta2 = vec3::dot(&v, &v) * consts.inv_c2();
        if !(beta2 < 1.0) {
            return Err(Error::Domain(format!("boost speed |v| = {} must be below c", vec3::norm(&v))));
        }
        Ok(Self { v, gamma: 1.0 / (1.0 - beta2).sqrt() })
    }

    /// Velocity given as a fraction of c.
    pub fn from_beta(beta: Vec3, consts: &PhysicalConstants) -> Result<Self> {
        Self::new(vec3::scale(&beta, consts.c()), consts)
    }

    pub fn v(&self) -> Vec3 {
        self.v
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Unit vector along v, or zero for the identity boost.
    pub fn v_hat(&self) -> Vec3 {
        let n = vec3::norm(&self.v);
        if n == 0.0 { [0.0; 3] } else { vec3::scale(&self.v, 1.0 / n) }
    }

    pub fn inverse(&self) -> Self {
        Self { v: vec3::scale(&self.v, -1.0), gamma: self.gamma }
    }

    /// Coordinates in S′ of the event (x, t) in S.
    pub fn event(&self, x: Vec3, t: f64, consts: &PhysicalConstants) -> (Vec3, f64) {
        let n = self.v_hat();
        let xp = vec3::dot(&x, &n);
        let shift = (self.gamma - 1.0) * xp - self.gamma * vec3::norm(&self.v) * t;
        let x2 = [0, 1, 2].map(|a| x[a] + shift * n[a]);
        let t2 = self.gamma * (t - vec3::dot(&self.v, &x) * consts.inv_c2());
        (x2, t2)
    }
}

/// Largest |ρ₀| on the outer faces relative to max |ρ₀|.
fn boundary_level(rho0: &[Complex64], grid: &SpacetimeGrid) -> f64 {
    let n = grid.n();
    let max = rho0.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if max == 0.0 {
        return 0.0;
    }
    let mut edge = 0.0f64;
    for s in 0..grid.spatial_len() {
        let k = s % n[2];
        let j = (s / n[2]) % n[1];
        let i = s / (n[1] * n[2]);
        if i == 0 || j == 0 || k == 0 || i == n[0] - 1 || j == n[1] - 1 || k == n[2] - 1 {
            edge = edge.max(rho0[s].norm());
        }
    }
    edge / max
}

/// Default bound on the boundary level of ρ₀ accepted by [`evolve_rho`].
pub const DEFAULT_DECAY_TOL: f64 = 1e-6;

/// ρ(·, t) for every time level of `grid`, solving □²ρ = 0 with ρ(·, 0) = ρ₀
/// and ∂ₜρ(·, 0) = 0 on the periodic extension of the box.
///
/// `rho0` is read from its first time level and must share the spatial layout
/// of `grid`. Each discrete Fourier coefficient is multiplied by cos(c|k|t).
pub fn evolve_rho(
    rho0: &ScalarField,
    grid: &SpacetimeGrid,
    consts: &PhysicalConstants,
    decay_tol: f64,
) -> Result<ScalarField> {
    let g0 = rho0.grid();
    if g0.n() != grid.n() || g0.origin() != grid.origin() || g0.h() != grid.h() {
        return Err(Error::Shape("initial density and target grid differ in space".into()));
    }
    let frame = rho0.frame(0);
    let level = boundary_level(frame, grid);
    if level > decay_tol {
        return Err(Error::Precondition(format!(
            "initial density not decayed at the boundary: relative level {level:e} > {decay_tol:e} (periodic wrap-around)"
        )));
    }
    let n = grid.n();
    let mut spec = frame.to_vec();
    dft3(&mut spec, n, false);
    let kmag: Vec<f64> = (0..grid.spatial_len())
        .map(|s| {
            let k = s % n[2];
            let j = (s / n[2]) % n[1];
            let i = s / (n[1] * n[2]);
            let kv = [wavenumber(i, n[0], grid.h()), wavenumber(j, n[1], grid.h()), wavenumber(k, n[2], grid.h())];
            vec3::norm(&kv)
        })
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    for ti in 0..grid.nt() {
        let t = grid.time(ti);
        let mut f: Vec<Complex64> = spec.iter().zip(&kmag).map(|(z, k)| z * (consts.c() * k * t).cos()).collect();
        dft3(&mut f, n, true);
        values.extend(f);
    }
    ScalarField::from_values(*grid, values)
}

/// J(t) = −(1/ε₀μ₀) ∫₀ᵗ ∇ρ ds by the cumulative trapezoid rule; J(0) = 0.
pub fn build_j(rho: &ScalarField, consts: &PhysicalConstants) -> Result<VectorField3> {
    let g = *rho.grid();
    if g.t0().abs() > 1e-12 * g.dt() {
        return Err(Error::Precondition(format!("history must start at t = 0, starts at {}", g.t0())));
    }
    let grad_rho = grad(rho)?;
    let gv = grad_rho.values();
    let s = g.spatial_len();
    let k = -0.5 * g.dt() * consts.c() * consts.c();
    let mut out = vec![CVec3::ZERO; g.len()];
    for ti in 1..g.nt() {
        for p in 0..s {
            let i = ti * s + p;
            out[i] = out[i - s] + (gv[i] + gv[i - s]) * k;
        }
    }
    Ok(VectorField3::from_values_unchecked(g, out))
}

/// A (ρ, J) pair from [`evolve_rho`] and [`build_j`].
#[derive(Debug, Clone)]
pub struct WaveSource {
    pub rho: ScalarField,
    pub j: VectorField3,
    /// Radius of the cavity this source is meant to sit in, if any.
    pub r0_ref: Option<f64>,
}

impl WaveSource {
    pub fn new(rho0: &ScalarField, grid: &SpacetimeGrid, consts: &PhysicalConstants) -> Result<Self> {
        let rho = evolve_rho(rho0, grid, consts, DEFAULT_DECAY_TOL)?;
        let j = build_j(&rho, consts)?;
        Ok(Self { rho, j, r0_ref: None })
    }

    pub fn continuity_residual(&self) -> Result<f64> {
        continuity_residual(&self.rho, &self.j)
    }

    pub fn relation_residual(&self, consts: &PhysicalConstants) -> Result<f64> {
        relation_residual(&self.rho, &self.j, consts)
    }

    /// Max |∇×J| at nodes two or more layers from the faces.
    pub fn curl_j(&self) -> Result<f64> {
        let c = curl(&self.j)?;
        Ok(interior_max(c.values(), c.grid(), 2, |v| v.norm()))
    }
}

/// ∇ρ/ε₀ + μ₀ ∂ₜJ at every node.
pub fn relation_field(rho: &ScalarField, j: &VectorField3, consts: &PhysicalConstants) -> Result<VectorField3> {
    rho.grid().check_congruent(j.grid())?;
    let g = grad(rho)?;
    let dj = diff1(j.values(), j.grid(), 0)?;
    let (ie, mu) = (1.0 / consts.epsilon0(), consts.mu0());
    let r = g.values().iter().zip(&dj).map(|(a, b)| *a * ie + *b * mu).collect();
    Ok(VectorField3::from_values_unchecked(*rho.grid(), r))
}

/// Max-norm of ∇ρ/ε₀ + μ₀ ∂ₜJ over interior nodes.
pub fn relation_residual(rho: &ScalarField, j: &VectorField3, consts: &PhysicalConstants) -> Result<f64> {
    let r = relation_field(rho, j, consts)?;
    Ok(interior_max(r.values(), r.grid(), 1, |v| v.norm()))
}

fn split(v: CVec3, n: &Vec3) -> (CVec3, CVec3) {
    let par = CVec3::from_real(*n) * v.dot_real(n);
    (par, v - par)
}

/// ρ′ = γ(ρ − v·J/c²), J′ = γ(J∥ − ρv) + J⊥, at unchanged event labels.
pub fn boost_source(
    rho: &ScalarField,
    j: &VectorField3,
    boost: &BoostParams,
    consts: &PhysicalConstants,
) -> Result<(ScalarField, VectorField3)> {
    rho.grid().check_congruent(j.grid())?;
    let (g, v, n) = (boost.gamma, boost.v, boost.v_hat());
    let vc = CVec3::from_real(v);
    let k = consts.inv_c2();
    let rho2 = rho.values().iter().zip(j.values()).map(|(r, jv)| (r - jv.dot_real(&v) * k) * g).collect();
    let j2 = rho
        .values()
        .iter()
        .zip(j.values())
        .map(|(r, jv)| {
            let (par, perp) = split(*jv, &n);
            (par - vc * *r) * g + perp
        })
        .collect();
    Ok((
        ScalarField::from_values_unchecked(*rho.grid(), rho2),
        VectorField3::from_values_unchecked(*rho.grid(), j2),
    ))
}

/// E″ = E∥ + γ(E⊥ + v×B), B″ = B∥ + γ(B⊥ − v×E/c²).
pub fn boost_fields(
    e: &VectorField3,
    b: &VectorField3,
    boost: &BoostParams,
    consts: &PhysicalConstants,
) -> Result<(VectorField3, VectorField3)> {
    e.grid().check_congruent(b.grid())?;
    let (g, n) = (boost.gamma, boost.v_hat());
    let vc = CVec3::from_real(boost.v);
    let k = consts.inv_c2();
    let mut e2 = Vec::with_capacity(e.values().len());
    let mut b2 = Vec::with_capacity(e.values().len());
    for (ev, bv) in e.values().iter().zip(b.values()) {
        let (ep, eq) = split(*ev, &n);
        let (bp, bq) = split(*bv, &n);
        e2.push(ep + (eq + vc.cross(bv)) * g);
        b2.push(bp + (bq - vc.cross(ev) * k) * g);
    }
    Ok((
        VectorField3::from_values_unchecked(*e.grid(), e2),
        VectorField3::from_values_unchecked(*e.grid(), b2),
    ))
}

/// Both sides of ∇′×J′ = γ v×(∇ρ + c⁻²∂ₜJ) and their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostedCurl {
    /// max |∇′×J′|
    pub lhs: f64,
    /// max |γ v×(∇ρ + c⁻²∂ₜJ)|
    pub rhs: f64,
    /// max |∇′×J′ − γ v×(∇ρ + c⁻²∂ₜJ)|
    pub residual: f64,
}

/// Nodes this many layers from a face are skipped, so that composed
/// stencils never touch a one-sided boundary difference.
pub const BOOST_MARGIN: usize = 2;

/// ∇′f = ∇f + (γ−1) v̂(v̂·∇f) + γ(v/c²) ∂ₜf, the derivative in S′ at fixed event.
fn boosted_derivatives<T: Node>(
    v: &[T],
    grid: &SpacetimeGrid,
    boost: &BoostParams,
    consts: &PhysicalConstants,
) -> Result<[Vec<T>; 3]> {
    let d = [diff1(v, grid, 1)?, diff1(v, grid, 2)?, diff1(v, grid, 3)?];
    let dt = diff1(v, grid, 0)?;
    let (g, n, vel) = (boost.gamma, boost.v_hat(), boost.v);
    let k = consts.inv_c2();
    Ok([0, 1, 2].map(|a| {
        (0..v.len())
            .map(|i| {
                let along = d[0][i] * n[0] + d[1][i] * n[1] + d[2][i] * n[2];
                d[a][i] + along * ((g - 1.0) * n[a]) + dt[i] * (g * vel[a] * k)
            })
            .collect()
    }))
}

/// Evaluates the boosted-curl identity on interior nodes.
pub fn boosted_curl_identity(
    rho: &ScalarField,
    j: &VectorField3,
    boost: &BoostParams,
    consts: &PhysicalConstants,
) -> Result<BoostedCurl> {
    let grid = *rho.grid();
    let (_, j2) = boost_source(rho, j, boost, consts)?;
    let dj = boosted_derivatives(j2.values(), &grid, boost, consts)?;
    let curl2: Vec<CVec3> = (0..grid.len())
        .map(|i| {
            CVec3([
                dj[1][i].0[2] - dj[2][i].0[1],
                dj[2][i].0[0] - dj[0][i].0[2],
                dj[0][i].0[1] - dj[1][i].0[0],
            ])
        })
        .collect();
    let grad_rho = grad(rho)?;
    let dtj = diff1(j.values(), &grid, 0)?;
    let vc = CVec3::from_real(boost.v);
    let k = consts.inv_c2();
    let rhs: Vec<CVec3> = (0..grid.len())
        .map(|i| vc.cross(&(grad_rho.values()[i] + dtj[i] * k)) * boost.gamma)
        .collect();
    let diff: Vec<CVec3> = curl2.iter().zip(&rhs).map(|(a, b)| *a - *b).collect();
    let norm = |v: CVec3| v.norm();
    Ok(BoostedCurl {
        lhs: interior_max(&curl2, &grid, BOOST_MARGIN, norm),
        rhs: interior_max(&rhs, &grid, BOOST_MARGIN, norm),
        residual: interior_max(&diff, &grid, BOOST_MARGIN, norm),
    })
}

/// Linear interpolation in t, x, y, z of samples on `grid`.
fn interpolate<T: Node>(v: &[T], grid: &SpacetimeGrid, x: Vec3, t: f64) -> Option<T> {
    let n = grid.n();
    let o = grid.origin();
    let mut base = [0usize; 4];
    let mut frac = [0.0f64; 4];
    let coords = [t, x[0], x[1], x[2]];
    let starts = [grid.t0(), o[0], o[1], o[2]];
    let steps = [grid.dt(), grid.h(), grid.h(), grid.h()];
    let lens = [grid.nt(), n[0], n[1], n[2]];
    for a in 0..4 {
        let u = (coords[a] - starts[a]) / steps[a];
        let tol = 1e-9;
        if u < -tol || u > (lens[a] - 1) as f64 + tol {
            return None;
        }
        let u = u.clamp(0.0, (lens[a] - 1) as f64);
        let b = (u.floor() as usize).min(lens[a].saturating_sub(2));
        base[a] = b;
        frac[a] = if lens[a] == 1 { 0.0 } else { u - b as f64 };
    }
    let mut acc = T::ZERO;
    for corner in 0..16usize {
        let mut w = 1.0;
        let mut idx = [0usize; 4];
        for a in 0..4 {
            let up = (corner >> a) & 1 == 1;
            if up && lens[a] == 1 {
                w = 0.0;
                break;
            }
            idx[a] = base[a] + up as usize;
            w *= if up { frac[a] } else { 1.0 - frac[a] };
        }
        if w != 0.0 {
            acc = acc + v[grid.index(idx[0], idx[1], idx[2], idx[3])] * w;
        }
    }
    Some(acc)
}

/// Resamples a scalar field given in S onto event labels of S′.
///
/// Each node (x′, t′) of `target` is mapped back to S with the inverse boost
/// and the source field is interpolated there.
pub fn remap_scalar(
    f: &ScalarField,
    boost: &BoostParams,
    target: &SpacetimeGrid,
    consts: &PhysicalConstants,
) -> Result<ScalarField> {
    let inv = boost.inverse();
    let mut out = Vec::with_capacity(target.len());
    for ti in 0..target.nt() {
        for s in 0..target.spatial_len() {
            let (x, t) = inv.event(target.spatial_point(s), target.time(ti), consts);
            out.push(interpolate(f.values(), f.grid(), x, t).ok_or_else(|| {
                Error::Coverage(format!("boosted event maps to ({x:?}, {t}) outside the source grid"))
            })?);
        }
    }
    ScalarField::from_values(*target, out)
}
