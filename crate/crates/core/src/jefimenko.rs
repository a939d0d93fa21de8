//! Retarded potentials and Jefimenko fields of a localized charge/current
//! distribution, by midpoint quadrature over source cells.
//!
//! Sources implement [`SourceModel`]: either a sampled [`SourceHistory`]
//! (linear interpolation in retarded time) or an analytic model evaluated
//! exactly at the retarded time.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::fields::{continuity_residual, diff1, div, interior_max};
use crate::prelude::*;
use crate::vec3::{self, CVec3, Vec3};
use crate::{Error, PhysicalConstants, Result, ScalarField, SpacetimeGrid, VectorField3};

/// ρ, J and their time derivatives at one cell and instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSample {
    pub rho: Complex64,
    pub rho_dot: Complex64,
    pub j: CVec3,
    pub j_dot: CVec3,
}

impl SourceSample {
    pub const ZERO: Self = Self {
        rho: Complex64::new(0.0, 0.0),
        rho_dot: Complex64::new(0.0, 0.0),
        j: CVec3::ZERO,
        j_dot: CVec3::ZERO,
    };
}

/// A charge/current distribution on a lattice of cubic cells.
pub trait SourceModel {
    /// Cell centres.
    fn cells(&self) -> &[Vec3];
    /// Cell edge length.
    fn spacing(&self) -> f64;
    /// Closed interval of retarded times `sample` accepts.
    fn coverage(&self) -> (f64, f64);
    fn sample(&self, cell: usize, t: f64) -> Result<SourceSample>;
}

/// Tolerances checked when a [`SourceHistory`] is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryTolerances {
    /// Bound on max |∂ρ/∂t + ∇·J| over interior nodes.
    pub continuity: f64,
    /// Bound on |ρ| and |J| outside the support sphere, relative to their maxima.
    pub decay: f64,
}

impl Default for HistoryTolerances {
    fn default() -> Self {
        Self { continuity: 1e-2, decay: 1e-6 }
    }
}

/// Sampled ρ and J on a spacetime grid, with backward-difference time
/// derivatives so every sample depends only on the past.
#[derive(Debug, Clone)]
pub struct SourceHistory {
    rho: ScalarField,
    j: VectorField3,
    rho_dot: Vec<Complex64>,
    j_dot: Vec<CVec3>,
    support_radius: f64,
    cell_nodes: Vec<usize>,
    cells: Vec<Vec3>,
}

/// Fractions this close to a frame snap onto it.
const SNAP: f64 = 1e-9;

/// Second-order backward difference, first order on the second level and
/// zero on the first. Levels before the third are outside the coverage.
fn backward<T: crate::fields::Node>(v: &[T], grid: &SpacetimeGrid) -> Vec<T> {
    let s = grid.spatial_len();
    let dt = grid.dt();
    (0..v.len())
        .map(|idx| match idx / s {
            0 => T::ZERO,
            1 => (v[idx] - v[idx - s]) * (1.0 / dt),
            _ => (v[idx] * 3.0 - v[idx - s] * 4.0 + v[idx - 2 * s]) * (0.5 / dt),
        })
        .collect()
}

impl SourceHistory {
    pub fn new(
        rho: ScalarField,
        j: VectorField3,
        support_radius: f64,
        tol: &HistoryTolerances,
    ) -> Result<Self> {
        let g = *rho.grid();
        g.check_congruent(j.grid())?;
        if g.nt() == 2 {
            return Err(Error::Shape("source history needs nt = 1 (static) or nt ≥ 3".into()));
        }
        if !(support_radius > 0.0) {
            return Err(Error::Domain(format!("support radius {support_radius} must be positive")));
        }
        let c = g.center();
        let inside = |s: usize| vec3::norm(&vec3::sub(&g.spatial_point(s), &c)) <= support_radius;

        let (rho_max, j_max) = (rho.max_abs(), j.max_norm());
        let mut leak = 0.0f64;
        for idx in 0..g.len() {
            if !inside(idx % g.spatial_len()) {
                if rho_max > 0.0 {
                    leak = leak.max(rho.values()[idx].norm() / rho_max);
                }
                if j_max > 0.0 {
                    leak = leak.max(j.values()[idx].norm() / j_max);
                }
            }
        }
        if leak > tol.decay {
            return Err(Error::Precondition(format!(
                "sources not decayed outside support radius {support_radius}: relative level {leak:e} > {:e}",
                tol.decay
            )));
        }

        let cont = if g.nt() >= 3 {
            continuity_residual(&rho, &j)?
        } else {
            let d = div(&j)?;
            interior_max(d.values(), &g, 1, |z| z.norm())
        };
        if cont > tol.continuity {
            return Err(Error::Precondition(format!(
                "continuity residual {cont:e} exceeds {:e}",
                tol.continuity
            )));
        }

        let cell_nodes: Vec<usize> = (0..g.spatial_len()).filter(|&s| inside(s)).collect();
        let cells = cell_nodes.iter().map(|&s| g.spatial_point(s)).collect();
        let (rho_dot, j_dot) = if g.nt() == 1 {
            (vec![Complex64::new(0.0, 0.0); g.len()], vec![CVec3::ZERO; g.len()])
        } else {
            (backward(rho.values(), &g), backward(j.values(), &g))
        };
        Ok(Self { rho, j, rho_dot, j_dot, support_radius, cell_nodes, cells })
    }

    pub fn rho(&self) -> &ScalarField {
        &self.rho
    }

    pub fn j(&self) -> &VectorField3 {
        &self.j
    }

    pub fn rho_dot(&self) -> ScalarField {
        ScalarField::from_values_unchecked(*self.rho.grid(), self.rho_dot.clone())
    }

    pub fn j_dot(&self) -> VectorField3 {
        VectorField3::from_values_unchecked(*self.rho.grid(), self.j_dot.clone())
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        self.rho.grid()
    }

    /// Frame index and interpolation weight for retarded time `t`.
    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let g = self.grid();
        if g.nt() == 1 {
            return Ok((0, 0.0));
        }
        let u = (t - g.t0()) / g.dt();
        let mut a = u.floor();
        let mut f = u - a;
        if f < SNAP {
            f = 0.0;
        } else if f > 1.0 - SNAP {
            a += 1.0;
            f = 0.0;
        }
        let last = (g.nt() - 1) as f64;
        if a < 2.0 || a > last || (a == last && f > 0.0) {
            let (lo, hi) = self.coverage();
            return Err(Error::Coverage(format!("retarded time {t} outside recorded history [{lo}, {hi}]")));
        }
        Ok((a as usize, f))
    }
}

impl SourceModel for SourceHistory {
    fn cells(&self) -> &[Vec3] {
        &self.cells
    }

    fn spacing(&self) -> f64 {
        self.grid().h()
    }

    fn coverage(&self) -> (f64, f64) {
        let g = self.grid();
        if g.nt() == 1 {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            (g.time(2), g.time(g.nt() - 1))
        }
    }

    fn sample(&self, cell: usize, t: f64) -> Result<SourceSample> {
        let (a, f) = self.locate(t)?;
        let s = self.grid().spatial_len();
        let i0 = a * s + self.cell_nodes[cell];
        let (r, j) = (self.rho.values(), self.j.values());
        if f == 0.0 {
            return Ok(SourceSample { rho: r[i0], rho_dot: self.rho_dot[i0], j: j[i0], j_dot: self.j_dot[i0] });
        }
        let i1 = i0 + s;
        let w = 1.0 - f;
        Ok(SourceSample {
            rho: r[i0] * w + r[i1] * f,
            rho_dot: self.rho_dot[i0] * w + self.rho_dot[i1] * f,
            j: j[i0] * w + j[i1] * f,
            j_dot: self.j_dot[i0] * w + self.j_dot[i1] * f,
        })
    }
}

fn lattice_cells(lattice: &SpacetimeGrid) -> Vec<Vec3> {
    (0..lattice.spatial_len()).map(|s| lattice.spatial_point(s)).collect()
}

/// Normalised Gaussian (2πσ²)^{-3/2} exp(−|x−c|²/2σ²).
pub fn gaussian(x: Vec3, center: Vec3, sigma: f64) -> f64 {
    let d = vec3::sub(&x, &center);
    let norm = 1.0 / (2.0 * PI * sigma * sigma).powf(1.5);
    norm * (-vec3::dot(&d, &d) / (2.0 * sigma * sigma)).exp()
}

/// Static Gaussian charge of total charge `q`, no current.
#[derive(Debug, Clone)]
pub struct GaussianCharge {
    q: f64,
    sigma: f64,
    center: Vec3,
    h: f64,
    cells: Vec<Vec3>,
    density: Vec<f64>,
}

impl GaussianCharge {
    /// Cells are the spatial nodes of `lattice`.
    pub fn new(q: f64, sigma: f64, center: Vec3, lattice: &SpacetimeGrid) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::Domain(format!("sigma={sigma} must be positive")));
        }
        let cells = lattice_cells(lattice);
        let density = cells.iter().map(|&x| q * gaussian(x, center, sigma)).collect();
        Ok(Self { q, sigma, center, h: lattice.h(), cells, density })
    }

    pub fn rho_at(&self, x: Vec3) -> f64 {
        self.q * gaussian(x, self.center, self.sigma)
    }

    /// Exact potential: Q·erf(r/(√2σ)) / (4πε₀ r).
    pub fn potential(&self, x: Vec3, consts: &PhysicalConstants) -> f64 {
        let r = vec3::norm(&vec3::sub(&x, &self.center));
        let k = self.q / (4.0 * PI * consts.epsilon0());
        if r < 1e-12 * self.sigma {
            return k * (2.0 / PI).sqrt() / self.sigma;
        }
        k * libm::erf(r / (2f64.sqrt() * self.sigma)) / r
    }

    /// Exact field: Q/(4πε₀r²)·[erf(r/√2σ) − √(2/π)(r/σ)e^{−r²/2σ²}]·r̂.
    pub fn field(&self, x: Vec3, consts: &PhysicalConstants) -> Vec3 {
        let d = vec3::sub(&x, &self.center);
        let r = vec3::norm(&d);
        if r == 0.0 {
            return [0.0; 3];
        }
        let s = self.sigma;
        let enclosed = libm::erf(r / (2f64.sqrt() * s)) - (2.0 / PI).sqrt() * (r / s) * (-r * r / (2.0 * s * s)).exp();
        vec3::scale(&d, self.q * enclosed / (4.0 * PI * consts.epsilon0() * r * r * r))
    }
}

impl SourceModel for GaussianCharge {
    fn cells(&self) -> &[Vec3] {
        &self.cells
    }

    fn spacing(&self) -> f64 {
        self.h
    }

    fn coverage(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn sample(&self, cell: usize, _t: f64) -> Result<SourceSample> {
        Ok(SourceSample { rho: Complex64::new(self.density[cell], 0.0), ..SourceSample::ZERO })
    }
}

/// Gaussian-smeared dipole p(t) = p₀ sin(ωt) ẑ:
/// ρ = −p(t) ∂_z g, J = p′(t) g ẑ, which satisfy continuity exactly.
#[derive(Debug, Clone)]
pub struct OscillatingDipole {
    p0: f64,
    omega: f64,
    sigma: f64,
    center: Vec3,
    h: f64,
    cells: Vec<Vec3>,
    g: Vec<f64>,
    dz_g: Vec<f64>,
}

impl OscillatingDipole {
    pub fn new(p0: f64, omega: f64, sigma: f64, center: Vec3, lattice: &SpacetimeGrid) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::Domain(format!("sigma={sigma} must be positive")));
        }
        let cells = lattice_cells(lattice);
        let g: Vec<f64> = cells.iter().map(|&x| gaussian(x, center, sigma)).collect();
        let dz_g = cells
            .iter()
            .zip(&g)
            .map(|(x, gv)| -(x[2] - center[2]) / (sigma * sigma) * gv)
            .collect();
        Ok(Self { p0, omega, sigma, center, h: lattice.h(), cells, g, dz_g })
    }

    fn moments(&self, t: f64) -> (f64, f64, f64) {
        let (s, c) = (self.omega * t).sin_cos();
        (self.p0 * s, self.p0 * self.omega * c, -self.p0 * self.omega * self.omega * s)
    }

    pub fn rho_at(&self, x: Vec3, t: f64) -> f64 {
        let g = gaussian(x, self.center, self.sigma);
        let dz = -(x[2] - self.center[2]) / (self.sigma * self.sigma) * g;
        -self.moments(t).0 * dz
    }

    pub fn j_at(&self, x: Vec3, t: f64) -> Vec3 {
        [0.0, 0.0, self.moments(t).1 * gaussian(x, self.center, self.sigma)]
    }
}

impl SourceModel for OscillatingDipole {
    fn cells(&self) -> &[Vec3] {
        &self.cells
    }

    fn spacing(&self) -> f64 {
        self.h
    }

    fn coverage(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn sample(&self, cell: usize, t: f64) -> Result<SourceSample> {
        let (p, pd, pdd) = self.moments(t);
        let (g, dz) = (self.g[cell], self.dz_g[cell]);
        let z = |v: f64| CVec3::from_real([0.0, 0.0, v]);
        Ok(SourceSample {
            rho: Complex64::new(-p * dz, 0.0),
            rho_dot: Complex64::new(-pd * dz, 0.0),
            j: z(pd * g),
            j_dot: z(pdd * g),
        })
    }
}

/// Distances below this fraction of the cell size count as the self-cell.
const SELF_CELL: f64 = 1e-9;

/// Spherical average of 1/𝔯 over a ball of volume h³.
fn self_cell_inv_r(h: f64) -> f64 {
    let a = (3.0 * h * h * h / (4.0 * PI)).cbrt();
    1.5 / a
}

/// Visits (retarded sample, 𝔯 vector, 𝔯) per cell; `r == 0` marks the self-cell.
fn for_each_cell<S: SourceModel + ?Sized>(
    src: &S,
    x: Vec3,
    t: f64,
    consts: &PhysicalConstants,
    mut f: impl FnMut(&SourceSample, Vec3, f64),
) -> Result<()> {
    let h = src.spacing();
    let inv_c = 1.0 / consts.c();
    for (cell, xp) in src.cells().iter().enumerate() {
        let d = vec3::sub(&x, xp);
        let r = vec3::norm(&d);
        if r < SELF_CELL * h {
            f(&src.sample(cell, t)?, [0.0; 3], 0.0);
        } else {
            f(&src.sample(cell, t - r * inv_c)?, d, r);
        }
    }
    Ok(())
}

/// (V, A) at one event.
pub fn potentials_at<S: SourceModel + ?Sized>(
    src: &S,
    x: Vec3,
    t: f64,
    consts: &PhysicalConstants,
) -> Result<(Complex64, CVec3)> {
    let h = src.spacing();
    let self_inv = self_cell_inv_r(h);
    let mut v = Complex64::new(0.0, 0.0);
    let mut a = CVec3::ZERO;
    for_each_cell(src, x, t, consts, |s, _, r| {
        let inv = if r == 0.0 { self_inv } else { 1.0 / r };
        v += s.rho * inv;
        a += s.j * inv;
    })?;
    let vol = h * h * h;
    Ok((v * (vol / (4.0 * PI * consts.epsilon0())), a * (vol * consts.mu0() / (4.0 * PI))))
}

/// (E, B) at one event from Jefimenko's integrands.
pub fn fields_at<S: SourceModel + ?Sized>(
    src: &S,
    x: Vec3,
    t: f64,
    consts: &PhysicalConstants,
) -> Result<(CVec3, CVec3)> {
    let h = src.spacing();
    let self_inv = self_cell_inv_r(h);
    let (inv_c, inv_c2) = (1.0 / consts.c(), consts.inv_c2());
    let mut e = CVec3::ZERO;
    let mut b = CVec3::ZERO;
    for_each_cell(src, x, t, consts, |s, d, r| {
        if r == 0.0 {
            // 𝔯̂ terms average to zero over the cell
            e -= s.j_dot * (inv_c2 * self_inv);
            return;
        }
        let inv = 1.0 / r;
        let u = vec3::scale(&d, inv);
        let radial = s.rho * (inv * inv) + s.rho_dot * (inv * inv_c);
        let jt = s.j * (inv * inv) + s.j_dot * (inv * inv_c);
        for a in 0..3 {
            e.0[a] += radial * u[a] - s.j_dot.0[a] * (inv_c2 * inv);
        }
        // jt × 𝔯̂ with 𝔯̂ real
        b.0[0] += jt.0[1] * u[2] - jt.0[2] * u[1];
        b.0[1] += jt.0[2] * u[0] - jt.0[0] * u[2];
        b.0[2] += jt.0[0] * u[1] - jt.0[1] * u[0];
    })?;
    let vol = h * h * h;
    Ok((e * (vol / (4.0 * PI * consts.epsilon0())), b * (vol * consts.mu0() / (4.0 * PI))))
}

fn eval_nodes<T>(grid: &SpacetimeGrid, mut f: impl FnMut(f64, Vec3) -> Result<T>) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(grid.len());
    for ti in 0..grid.nt() {
        let t = grid.time(ti);
        for s in 0..grid.spatial_len() {
            out.push(f(t, grid.spatial_point(s))?);
        }
    }
    Ok(out)
}

pub fn retarded_potentials<S: SourceModel + ?Sized>(
    src: &S,
    eval_grid: &SpacetimeGrid,
    consts: &PhysicalConstants,
) -> Result<(ScalarField, VectorField3)> {
    let va = eval_nodes(eval_grid, |t, x| potentials_at(src, x, t, consts))?;
    let (v, a): (Vec<_>, Vec<_>) = va.into_iter().unzip();
    Ok((ScalarField::from_values(*eval_grid, v)?, VectorField3::from_values(*eval_grid, a)?))
}

/// E and B in one pass over the sources.
pub fn jefimenko_fields<S: SourceModel + ?Sized>(
    src: &S,
    eval_grid: &SpacetimeGrid,
    consts: &PhysicalConstants,
) -> Result<(VectorField3, VectorField3)> {
    let eb = eval_nodes(eval_grid, |t, x| fields_at(src, x, t, consts))?;
    let (e, b): (Vec<_>, Vec<_>) = eb.into_iter().unzip();
    Ok((VectorField3::from_values(*eval_grid, e)?, VectorField3::from_values(*eval_grid, b)?))
}

pub fn jefimenko_e<S: SourceModel + ?Sized>(
    src: &S,
    eval_grid: &SpacetimeGrid,
    consts: &PhysicalConstants,
) -> Result<VectorField3> {
    Ok(jefimenko_fields(src, eval_grid, consts)?.0)
}

pub fn jefimenko_b<S: SourceModel + ?Sized>(
    src: &S,
    eval_grid: &SpacetimeGrid,
    consts: &PhysicalConstants,
) -> Result<VectorField3> {
    Ok(jefimenko_fields(src, eval_grid, consts)?.1)
}

/// Max-norm of ∇·A + μ₀ε₀ ∂V/∂t over interior nodes.
pub fn lorentz_gauge_residual(v: &ScalarField, a: &VectorField3, consts: &PhysicalConstants) -> Result<f64> {
    v.grid().check_congruent(a.grid())?;
    let div_a = div(a)?;
    let dv = diff1(v.values(), v.grid(), 0)?;
    let k = consts.inv_c2();
    let r: Vec<Complex64> = div_a.values().iter().zip(&dv).map(|(x, y)| x + y * k).collect();
    Ok(interior_max(&r, v.grid(), 1, |z| z.norm()))
}
