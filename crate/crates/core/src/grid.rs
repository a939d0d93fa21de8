//! Uniform spacetime grids and complex-valued samples on them.

use alloc::{format, vec::Vec};

use num_complex::Complex64;

use crate::vec3::{CVec3, Vec3};
use crate::{Error, Result};

/// Uniform Cartesian grid in space (identical spacing `h` on all axes) times a
/// uniform time axis `t0 + i·dt`, `i < nt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeGrid {
    origin: Vec3,
    n: [usize; 3],
    h: f64,
    t0: f64,
    dt: f64,
    nt: usize,
}

impl SpacetimeGrid {
    pub fn new(origin: Vec3, n: [usize; 3], h: f64, t0: f64, dt: f64, nt: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) || !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Shape(format!("spacing must be positive (h={h}, dt={dt})")));
        }
        if n.iter().any(|&k| k < 3) {
            return Err(Error::Shape(format!("need at least 3 nodes per axis, got {n:?}")));
        }
        if nt == 0 {
            return Err(Error::Shape("need at least one time level".into()));
        }
        if !origin.iter().all(|x| x.is_finite()) || !t0.is_finite() {
            return Err(Error::Shape("origin must be finite".into()));
        }
        Ok(Self { origin, n, h, t0, dt, nt })
    }

    /// Cube of `n` nodes per axis centred on `center`.
    pub fn cube(center: Vec3, half_width: f64, n: usize, t0: f64, dt: f64, nt: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Shape(format!("need at least 3 nodes per axis, got {n}")));
        }
        let h = 2.0 * half_width / (n - 1) as f64;
        let origin = [center[0] - half_width, center[1] - half_width, center[2] - half_width];
        Self::new(origin, [n; 3], h, t0, dt, nt)
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn n(&self) -> [usize; 3] {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    /// `(n − 1)·h` per axis.
    pub fn extent(&self) -> Vec3 {
        self.n.map(|k| (k - 1) as f64 * self.h)
    }

    pub fn spatial_len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn len(&self) -> usize {
        self.nt * self.spatial_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, ti: usize) -> f64 {
        self.t0 + ti as f64 * self.dt
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> Vec3 {
        [
            self.origin[0] + i as f64 * self.h,
            self.origin[1] + j as f64 * self.h,
            self.origin[2] + k as f64 * self.h,
        ]
    }

    /// Position of the node with flat spatial index `s`.
    pub fn spatial_point(&self, s: usize) -> Vec3 {
        let k = s % self.n[2];
        let j = (s / self.n[2]) % self.n[1];
        let i = s / (self.n[1] * self.n[2]);
        self.point(i, j, k)
    }

    pub fn center(&self) -> Vec3 {
        let e = self.extent();
        [0, 1, 2].map(|a| self.origin[a] + 0.5 * e[a])
    }

    pub fn spatial_index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n[1] + j) * self.n[2] + k
    }

    pub fn index(&self, ti: usize, i: usize, j: usize, k: usize) -> usize {
        ti * self.spatial_len() + self.spatial_index(i, j, k)
    }

    /// Inverse of [`index`](Self::index): `(t, i, j, k)`.
    pub fn unravel(&self, idx: usize) -> (usize, usize, usize, usize) {
        let s = self.spatial_len();
        let (ti, r) = (idx / s, idx % s);
        let k = r % self.n[2];
        let j = (r / self.n[2]) % self.n[1];
        let i = r / (self.n[1] * self.n[2]);
        (ti, i, j, k)
    }

    /// Same node layout in space and time, up to rounding in the metadata.
    pub fn congruent(&self, o: &SpacetimeGrid) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
        self.n == o.n
            && self.nt == o.nt
            && close(self.h, o.h)
            && close(self.dt, o.dt)
            && close(self.t0, o.t0)
            && (0..3).all(|a| close(self.origin[a], o.origin[a]))
    }

    pub fn check_congruent(&self, o: &SpacetimeGrid) -> Result<()> {
        if self.congruent(o) {
            Ok(())
        } else {
            Err(Error::Shape(format!("grid mismatch: {self:?} vs {o:?}")))
        }
    }

    /// Same spatial lattice, with a different time axis.
    pub fn with_time(&self, t0: f64, dt: f64, nt: usize) -> Result<Self> {
        Self::new(self.origin, self.n, self.h, t0, dt, nt)
    }
}

/// Complex scalar samples indexed `(t, x, y, z)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: SpacetimeGrid,
    values: Vec<Complex64>,
}

/// Complex 3-vector samples indexed `(t, x, y, z)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField3 {
    grid: SpacetimeGrid,
    values: Vec<CVec3>,
}

fn node_label(grid: &SpacetimeGrid, idx: usize) -> alloc::string::String {
    let (t, i, j, k) = grid.unravel(idx);
    format!("(t={t}, x={i}, y={j}, z={k})")
}

impl ScalarField {
    pub fn from_values(grid: SpacetimeGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(idx) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(node_label(&grid, idx)));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: SpacetimeGrid) -> Self {
        Self { grid, values: alloc::vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// `values[t, x] = f(t, x)` at every node.
    pub fn sample(grid: SpacetimeGrid, f: impl Fn(f64, Vec3) -> Complex64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for ti in 0..grid.nt() {
            let t = grid.time(ti);
            for i in 0..grid.n[0] {
                for j in 0..grid.n[1] {
                    for k in 0..grid.n[2] {
                        values.push(f(t, grid.point(i, j, k)));
                    }
                }
            }
        }
        Self::from_values(grid, values)
    }

    pub(crate) fn from_values_unchecked(grid: SpacetimeGrid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, ti: usize, i: usize, j: usize, k: usize) -> Complex64 {
        self.values[self.grid.index(ti, i, j, k)]
    }

    pub fn frame(&self, ti: usize) -> &[Complex64] {
        let s = self.grid.spatial_len();
        &self.values[ti * s..(ti + 1) * s]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest imaginary part magnitude.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_values_unchecked(self.grid, self.values.iter().map(|&z| f(z)).collect())
    }

    pub fn zip_map(&self, o: &ScalarField, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.grid.check_congruent(&o.grid)?;
        Ok(Self::from_values_unchecked(
            self.grid,
            self.values.iter().zip(&o.values).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }
}

impl VectorField3 {
    pub fn from_values(grid: SpacetimeGrid, values: Vec<CVec3>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(node_label(&grid, idx)));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: SpacetimeGrid) -> Self {
        Self { grid, values: alloc::vec![CVec3::ZERO; grid.len()] }
    }

    pub fn sample(grid: SpacetimeGrid, f: impl Fn(f64, Vec3) -> CVec3) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for ti in 0..grid.nt() {
            let t = grid.time(ti);
            for i in 0..grid.n[0] {
                for j in 0..grid.n[1] {
                    for k in 0..grid.n[2] {
                        values.push(f(t, grid.point(i, j, k)));
                    }
                }
            }
        }
        Self::from_values(grid, values)
    }

    pub(crate) fn from_values_unchecked(grid: SpacetimeGrid, values: Vec<CVec3>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    /// Assemble from three component fields on congruent grids.
    pub fn from_components(x: &ScalarField, y: &ScalarField, z: &ScalarField) -> Result<Self> {
        x.grid.check_congruent(&y.grid)?;
        x.grid.check_congruent(&z.grid)?;
        let values = (0..x.values.len())
            .map(|i| CVec3([x.values[i], y.values[i], z.values[i]]))
            .collect();
        Ok(Self::from_values_unchecked(x.grid, values))
    }

    pub fn component(&self, a: usize) -> ScalarField {
        ScalarField::from_values_unchecked(self.grid, self.values.iter().map(|v| v.0[a]).collect())
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[CVec3] {
        &self.values
    }

    pub fn into_values(self) -> Vec<CVec3> {
        self.values
    }

    pub fn get(&self, ti: usize, i: usize, j: usize, k: usize) -> CVec3 {
        self.values[self.grid.index(ti, i, j, k)]
    }

    pub fn frame(&self, ti: usize) -> &[CVec3] {
        let s = self.grid.spatial_len();
        &self.values[ti * s..(ti + 1) * s]
    }

    /// Largest Euclidean norm over nodes.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_imag(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|v| v.0.iter())
            .fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    pub fn map(&self, f: impl Fn(CVec3) -> CVec3) -> Self {
        Self::from_values_unchecked(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, o: &VectorField3, f: impl Fn(CVec3, CVec3) -> CVec3) -> Result<Self> {
        self.grid.check_congruent(&o.grid)?;
        Ok(Self::from_values_unchecked(
            self.grid,
            self.values.iter().zip(&o.values).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }
}
