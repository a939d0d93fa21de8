//! Spherical-cavity eigenmodes and the energy spectrum they carry.
//!
//! Conventions: the plane-wave normaliser η is taken to be 1, ω = c·k, and
//! the fundamental field of a mode `(l₀, k₀)` is
//!
//! ```text
//! E(x, t) = −(1/ε₀) Σ_m [U_m/(−iω) e^{−iωt} + V_m/(iω) e^{iωt}] Y_{l₀,m}(θ, φ) τ_{l₀,k₀}(r)
//! U_m = α √(2/π) i^{l₀} k₀²/(4π) conj(W(l₀, m)),   V_m the same with β.
//! ```
//!
//! `W` comes in two readings, see [`BetaReading`].

use crate::prelude::*;
use core::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use crate::fields::{interior_indices, laplacian};
use crate::specfun::{
    bessel_zeros, harmonic_index, norm_constant, rayleigh_p, rayleigh_q, sph_j,
    sph_jp, tau, BallRule, GaussLegendre, HarmonicTable, SphereRule, ZeroTable, ZERO_TOL,
};
use crate::vec3::{CVec3, Vec3};
use crate::{Error, PhysicalConstants, Result, ScalarField, SpacetimeGrid, VectorField3};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A cavity radius with the zero tables of j_l for `l ≤ l_max`.
#[derive(Debug, Clone)]
pub struct CavityConfig {
    r0: f64,
    consts: PhysicalConstants,
    l_max: usize,
    zeros_per_l: usize,
    tables: Vec<ZeroTable>,
}

impl CavityConfig {
    pub fn new(r0: f64, consts: PhysicalConstants, l_max: usize, zeros_per_l: usize) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::Config(format!("cavity radius {r0} must be positive")));
        }
        if zeros_per_l == 0 {
            return Err(Error::Config("zeros_per_l must be at least 1".into()));
        }
        let tables = (0..=l_max)
            .map(|l| bessel_zeros(l, r0, zeros_per_l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { r0, consts, l_max, zeros_per_l, tables })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn consts(&self) -> &PhysicalConstants {
        &self.consts
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn zeros_per_l(&self) -> usize {
        self.zeros_per_l
    }

    /// Admissible wavenumbers S_l/r₀, ascending.
    pub fn wavenumbers(&self, l: usize) -> Option<&[f64]> {
        self.tables.get(l).map(|t| t.zeros())
    }

    /// Every (l, m, k) with `l ≤ l_max`, ordered by l, then k, then m.
    pub fn modes(&self) -> Vec<ModeIndex> {
        let mut out = Vec::new();
        for (l, t) in self.tables.iter().enumerate() {
            for &k in t.zeros() {
                for m in -(l as i64)..=(l as i64) {
                    out.push(ModeIndex { l, m, k });
                }
            }
        }
        out
    }
}

/// One element (l, m, k) of the γ or δ family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIndex {
    pub l: usize,
    pub m: i64,
    pub k: f64,
}

impl ModeIndex {
    pub fn new(l: usize, m: i64, k: f64) -> Result<Self> {
        let mode = Self { l, m, k };
        mode.validate()?;
        Ok(mode)
    }

    fn validate(&self) -> Result<()> {
        if self.m.unsigned_abs() as usize > self.l {
            return Err(Error::Domain(format!("mode |m|={} exceeds l={}", self.m.abs(), self.l)));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(Error::Domain(format!("mode wavenumber {} must be positive", self.k)));
        }
        Ok(())
    }
}

/// `(r, θ, φ)` of a Cartesian point, with θ = 0 at the origin.
pub fn to_spherical(x: Vec3) -> (f64, f64, f64) {
    let r = libm::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if r == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let theta = libm::acos((x[2] / r).clamp(-1.0, 1.0));
    let phi = libm::atan2(x[1], x[0]);
    (r, theta, phi)
}

fn ylm(l: usize, m: i64, theta: f64, phi: f64) -> Complex64 {
    HarmonicTable::new(l, libm::cos(theta), phi).get(l, m)
}

fn check_angles(r: f64, theta: f64, phi: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    if !(0.0..=PI).contains(&theta) || !(-PI..=PI).contains(&phi) {
        return Err(Error::Domain(format!("angles (θ={theta}, φ={phi}) out of range")));
    }
    Ok(())
}

/// γ_{l,m,k} = Y_{l,m}(θ, φ)·τ_{l,k}(r).
pub fn mode_gamma(mode: ModeIndex, r: f64, theta: f64, phi: f64) -> Result<Complex64> {
    mode.validate()?;
    check_angles(r, theta, phi)?;
    Ok(ylm(mode.l, mode.m, theta, phi) * tau(mode.l, mode.k, r))
}

/// δ_{l,m,k} = γ_{l,m,k}/c_{l,k}; `k·r₀` must be a zero of j_l.
pub fn mode_delta(mode: ModeIndex, r: f64, theta: f64, phi: f64, r0: f64) -> Result<Complex64> {
    mode.validate()?;
    check_angles(r, theta, phi)?;
    let c = norm_constant(mode.l, mode.k, r0)?;
    Ok(ylm(mode.l, mode.m, theta, phi) * (tau(mode.l, mode.k, r) / c))
}

/// Gram matrix `G[a][b] = ∫_B δ_a conj(δ_b)` under a product ball rule,
/// row-major. The rule factorises, so the angular and radial sums are
/// formed separately.
pub fn gram_matrix(modes: &[ModeIndex], rule: &BallRule) -> Result<Vec<Complex64>> {
    let r0 = rule.r0();
    let mut norms = Vec::with_capacity(modes.len());
    for m in modes {
        m.validate()?;
        norms.push(norm_constant(m.l, m.k, r0)?);
    }
    let l_max = modes.iter().map(|m| m.l).max().unwrap_or(0);
    let n = modes.len();

    let mut ang = vec![Complex64::new(0.0, 0.0); n * n];
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for node in rule.sphere().nodes() {
        let table = HarmonicTable::new(l_max, node.cos_theta, node.phi);
        for (a, m) in modes.iter().enumerate() {
            y[a] = table.get(m.l, m.m);
        }
        for a in 0..n {
            let ya = y[a] * node.weight;
            for b in 0..n {
                ang[a * n + b] += ya * y[b].conj();
            }
        }
    }

    let mut rad = vec![0.0; n * n];
    let mut s = vec![0.0; n];
    for (r, w) in rule.radial() {
        for (a, m) in modes.iter().enumerate() {
            s[a] = tau(m.l, m.k, r) / norms[a];
        }
        for a in 0..n {
            for b in 0..n {
                rad[a * n + b] += w * s[a] * s[b];
            }
        }
    }
    Ok(ang.iter().zip(&rad).map(|(a, r)| a * r).collect())
}

/// max |∇²γ + k²γ| over a Cartesian cube, by second-order differences.
/// Nodes within 2h of the origin and the outer stencil layer are skipped.
/// Returns the residual and max |γ| over the same nodes.
pub fn laplacian_eigen_check(mode: ModeIndex, center: Vec3, half_width: f64, n: usize) -> Result<(f64, f64)> {
    mode.validate()?;
    let grid = SpacetimeGrid::cube(center, half_width, n, 0.0, 1.0, 1)?;
    let f = ScalarField::sample(grid, |_, x| {
        let (r, th, ph) = to_spherical(x);
        ylm(mode.l, mode.m, th, ph) * tau(mode.l, mode.k, r)
    })?;
    let lap = laplacian(&f)?;
    let k2 = mode.k * mode.k;
    let h = grid.h();
    let (mut res, mut scale) = (0.0f64, 0.0f64);
    for idx in interior_indices(&grid, 1) {
        let x = grid.spatial_point(idx % grid.spatial_len());
        if libm::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) < 2.0 * h {
            continue;
        }
        let v = f.values()[idx];
        res = res.max((lap.values()[idx] + v * k2).norm());
        scale = scale.max(v.norm());
    }
    Ok((res, scale))
}

/// Which β_l the energy formulas use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaReading {
    /// W(l, m) by quadrature of the unit direction vector. Only l = 1 survives.
    Computed,
    /// W(l, 0) = √β·ẑ for every l, all other entries zero, so β_l = β.
    Parametric(f64),
}

/// Coefficients of `n̂ = Σ W(l, m)·Y_{l,m}(n̂)`, i.e. `W(l, m) = ∫ n̂ conj(Y_{l,m}) dΩ`.
#[derive(Debug, Clone)]
pub struct WCoefficients {
    l_max: usize,
    w: Vec<CVec3>,
    beta: Vec<f64>,
    reading: BetaReading,
}

impl WCoefficients {
    /// The parametric reading; `beta` must be positive.
    pub fn parametric(l_max: usize, beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Config(format!("parametric beta {beta} must be positive")));
        }
        let mut w = vec![CVec3::ZERO; (l_max + 1) * (l_max + 1)];
        for l in 0..=l_max {
            w[harmonic_index(l, 0)] = CVec3::from_real([0.0, 0.0, beta.sqrt()]);
        }
        Ok(Self { l_max, w, beta: vec![beta; l_max + 1], reading: BetaReading::Parametric(beta) })
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn reading(&self) -> BetaReading {
        self.reading
    }

    /// W(l, m); zero beyond `l_max`.
    pub fn get(&self, l: usize, m: i64) -> CVec3 {
        if l > self.l_max || m.unsigned_abs() as usize > l {
            return CVec3::ZERO;
        }
        self.w[harmonic_index(l, m)]
    }

    /// β_l = Σ_m |W(l, m)|²; zero beyond `l_max`.
    pub fn beta(&self, l: usize) -> f64 {
        self.beta.get(l).copied().unwrap_or(0.0)
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    /// Σ_{l,m} |W(l, m)|².
    pub fn total(&self) -> f64 {
        self.beta.iter().sum()
    }
}

/// The computed reading of W by quadrature on the unit sphere.
///
/// The rule must integrate degree `l_max + 1` exactly, which needs at least
/// `l_max + 2` nodes in each of θ and φ.
pub fn w_coefficients(l_max: usize, rule: &SphereRule) -> Result<WCoefficients> {
    if l_max == 0 {
        return Err(Error::Config("w_coefficients needs l_max >= 1".into()));
    }
    if rule.n_theta() < l_max + 2 || rule.n_phi() < l_max + 2 {
        return Err(Error::Config(format!(
            "sphere rule ({}, {}) too coarse for l_max = {l_max}; need at least {} in each direction",
            rule.n_theta(),
            rule.n_phi(),
            l_max + 2
        )));
    }
    let mut w = vec![CVec3::ZERO; (l_max + 1) * (l_max + 1)];
    for node in rule.nodes() {
        let st = libm::sqrt((1.0 - node.cos_theta * node.cos_theta).max(0.0));
        let n_hat = [st * libm::cos(node.phi), st * libm::sin(node.phi), node.cos_theta];
        let table = HarmonicTable::new(l_max, node.cos_theta, node.phi);
        for l in 0..=l_max {
            for m in -(l as i64)..=(l as i64) {
                let y = table.get(l, m).conj() * node.weight;
                w[harmonic_index(l, m)] += CVec3::from_real(n_hat) * y;
            }
        }
    }
    let beta = (0..=l_max)
        .map(|l| (-(l as i64)..=(l as i64)).map(|m| w[harmonic_index(l, m)].norm_sqr()).sum())
        .collect();
    Ok(WCoefficients { l_max, w, beta, reading: BetaReading::Computed })
}

/// `(f, g) ↦ (F_scale, G_scale) = (c·f, −c·g)`, where `F(k̄) = F_scale·k̂`.
pub fn amplitude_relations(f: Complex64, g: Complex64, k: f64, consts: &PhysicalConstants) -> Result<(Complex64, Complex64)> {
    check_k(k)?;
    let c = consts.c();
    Ok((f * c, -g * c))
}

/// Inverse of [`amplitude_relations`]: `f = (k̂·F)/c`, `g = −(k̂·G)/c`.
pub fn amplitude_relations_inverse(
    f_scale: Complex64,
    g_scale: Complex64,
    k: f64,
    consts: &PhysicalConstants,
) -> Result<(Complex64, Complex64)> {
    check_k(k)?;
    let c = consts.c();
    Ok((f_scale / c, -g_scale / c))
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("wavenumber {k} must be positive")));
    }
    Ok(())
}

/// Radial-transform amplitudes at one admissible (l₀, k₀). `f` and `g` are
/// always derived from α and β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAmplitude {
    l0: usize,
    k0: f64,
    alpha: Complex64,
    beta: Complex64,
}

impl ModeAmplitude {
    /// `k0·r0` must be a zero of j_{l0}.
    pub fn new(l0: usize, k0: f64, r0: f64, alpha: Complex64, beta: Complex64) -> Result<Self> {
        check_zero(l0, k0, r0)?;
        Ok(Self { l0, k0, alpha, beta })
    }

    pub fn l0(&self) -> usize {
        self.l0
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// f = α·k/c.
    pub fn f(&self, consts: &PhysicalConstants) -> Complex64 {
        self.alpha * (self.k0 / consts.c())
    }

    /// g = −β·k/c.
    pub fn g(&self, consts: &PhysicalConstants) -> Complex64 {
        -self.beta * (self.k0 / consts.c())
    }
}

/// Amplitudes keyed by (l₀, k₀), at most one entry per key.
#[derive(Debug, Clone, Default)]
pub struct ModeAmplitudes {
    entries: Vec<ModeAmplitude>,
}

impl ModeAmplitudes {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, amp: ModeAmplitude) -> Result<()> {
        if self.get(amp.l0, amp.k0).is_some() {
            return Err(Error::Precondition(format!(
                "duplicate amplitude key (l0={}, k0={})",
                amp.l0, amp.k0
            )));
        }
        self.entries.push(amp);
        Ok(())
    }

    pub fn get(&self, l0: usize, k0: f64) -> Option<&ModeAmplitude> {
        self.entries
            .iter()
            .find(|a| a.l0 == l0 && (a.k0 - k0).abs() <= 1e-12 * k0.abs().max(1.0))
    }

    pub fn entries(&self) -> &[ModeAmplitude] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_zero(l: usize, k: f64, r0: f64) -> Result<()> {
    norm_constant(l, k, r0).map(|_| ())
}

/// `∫_{B(r₀)} e^{ik̄·x̄} dx̄ = (2πr₀/k)^{3/2} J_{3/2}(k r₀)` for `|k̄| = k`.
///
/// Small `k·r₀` switches to the series of `(4π/k³)(sin s − s cos s)`.
pub fn ball_fourier_integral(k: f64, r0: f64) -> Result<f64> {
    if !(k >= 0.0) || !(r0 > 0.0) || !k.is_finite() || !r0.is_finite() {
        return Err(Error::Domain(format!("ball_fourier_integral: need k >= 0, r0 > 0 (k={k}, r0={r0})")));
    }
    let s = k * r0;
    if s < 1e-2 {
        let s2 = s * s;
        // (sin s − s cos s)/s³ = 1/3 − s²/30 + s⁴/840 − s⁶/45360 + …
        let series = 1.0 / 3.0 - s2 / 30.0 + s2 * s2 / 840.0 - s2 * s2 * s2 / 45360.0;
        return Ok(4.0 * PI * r0 * r0 * r0 * series);
    }
    let j32 = j_three_halves(s);
    Ok((2.0 * PI * r0 / k).powf(1.5) * j32)
}

fn j_three_halves(s: f64) -> f64 {
    (2.0 * s / PI).sqrt() * sph_j(1, s)
}

/// J_{l+3/2}(s) = sqrt(2s/π)·j_{l+1}(s).
fn j_next(l: usize, s: f64) -> f64 {
    (2.0 * s / PI).sqrt() * sph_j(l + 1, s)
}

fn charge_factor(amp: &ModeAmplitude, r0: f64, consts: &PhysicalConstants) -> f64 {
    let k = amp.k0;
    (2.0 * PI * r0).powf(1.5) / consts.c() * 4.0 * PI * k.powf(1.5) * j_three_halves(k * r0)
}

/// Relative tolerance on `α + β = 0`.
pub const STATIONARITY_TOL: f64 = 1e-12;

/// Total charge `Q = (α − β)(2πr₀)^{3/2}/c · 4π k₀^{3/2} J_{3/2}(k₀r₀)` of a
/// single-key amplitude set.
///
/// `dQ/dt` at t = 0 is proportional to `α + β`; amplitudes with `α ≠ −β`
/// are reported as a precondition violation.
pub fn charge_q(amps: &ModeAmplitudes, r0: f64, consts: &PhysicalConstants) -> Result<Complex64> {
    let amp = match amps.entries() {
        [a] => a,
        e => {
            return Err(Error::Precondition(format!(
                "charge_q needs exactly one (l0, k0) key, got {}",
                e.len()
            )))
        }
    };
    let drift = (amp.alpha + amp.beta).norm();
    if drift > STATIONARITY_TOL * (amp.alpha.norm() + amp.beta.norm()) {
        let rate = -I * consts.c() * amp.k0 * (amp.alpha + amp.beta) * charge_factor(amp, r0, consts);
        return Err(Error::Precondition(format!(
            "charge not stationary: alpha + beta = {} gives dQ/dt(0) = {}",
            amp.alpha + amp.beta,
            rate
        )));
    }
    Ok(charge_at(amp, r0, 0.0, consts))
}

/// `∫_B ρ(t)` for the plane-wave charge density of one key:
/// `(α e^{−iωt} − β e^{iωt})·(2πr₀)^{3/2}/c · 4π k₀^{3/2} J_{3/2}(k₀r₀)`.
pub fn charge_at(amp: &ModeAmplitude, r0: f64, t: f64, consts: &PhysicalConstants) -> Complex64 {
    let wt = consts.c() * amp.k0 * t;
    let ph = Complex64::from_polar(1.0, -wt);
    (amp.alpha * ph - amp.beta * ph.conj()) * charge_factor(amp, r0, consts)
}

/// α from the charge; β = −α and f = g = αk₀/c.
///
/// Fails with a precondition error when `J_{3/2}(k₀r₀) = 0`, which is the
/// whole l₀ = 1 lattice.
pub fn alpha_from_q(q: f64, l0: usize, k0: f64, r0: f64, consts: &PhysicalConstants) -> Result<ModeAmplitude> {
    check_zero(l0, k0, r0)?;
    let s = k0 * r0;
    if sph_j(1, s).abs() < ZERO_TOL * sph_jp(1, s).abs().max(1.0) {
        return Err(Error::Precondition(format!(
            "J_3/2(k0 r0) vanishes at k0 r0 = {s}: the charge does not fix alpha (l0 = {l0})"
        )));
    }
    let alpha = q * consts.c() / (8.0 * PI * (2.0 * PI * r0).powf(1.5) * k0.powf(1.5) * j_three_halves(s));
    let alpha = Complex64::new(alpha, 0.0);
    Ok(ModeAmplitude { l0, k0, alpha, beta: -alpha })
}

fn energy_scale(q: f64, l0: usize, k0: f64, r0: f64, consts: &PhysicalConstants, w: &WCoefficients) -> Result<f64> {
    alpha_from_q(q, l0, k0, r0, consts)?;
    let s = k0 * r0;
    let ratio = j_next(l0, s) / j_three_halves(s);
    let pi8 = PI.powi(8);
    Ok(q * q * (w.beta(l0) * ratio * ratio / (8192.0 * pi8 * consts.epsilon0() * r0)))
}

/// `U(t) = Q² β_{l₀} (1 + cos 2ωt)/(8192 π⁸ ε₀ r₀) · J²_{l₀+3/2}/J²_{3/2}` at `k₀r₀`.
pub fn energy_instant(
    q: f64,
    l0: usize,
    k0: f64,
    r0: f64,
    t: f64,
    consts: &PhysicalConstants,
    w: &WCoefficients,
) -> Result<f64> {
    let mean = energy_scale(q, l0, k0, r0, consts, w)?;
    Ok(mean * (1.0 + libm::cos(2.0 * consts.c() * k0 * t)))
}

/// Cycle mean of [`energy_instant`].
pub fn energy_mean(q: f64, l0: usize, k0: f64, r0: f64, consts: &PhysicalConstants, w: &WCoefficients) -> Result<f64> {
    energy_scale(q, l0, k0, r0, consts, w)
}

/// Field energy of one key for arbitrary (α, β):
/// `r₀² k³ J²_{l₀+3/2} β_{l₀}/(32 ε₀ c² π³) · (|α|² + |β|² − 2 Re(α conj(β) e^{−2iωt}))`.
pub fn energy_from_amplitude(
    amp: &ModeAmplitude,
    r0: f64,
    t: f64,
    consts: &PhysicalConstants,
    w: &WCoefficients,
) -> f64 {
    let (k, c) = (amp.k0, consts.c());
    let jn = j_next(amp.l0, k * r0);
    let cross = amp.alpha * amp.beta.conj() * Complex64::from_polar(1.0, -2.0 * c * k * t);
    let mix = amp.alpha.norm_sqr() + amp.beta.norm_sqr() - 2.0 * cross.re;
    r0 * r0 * k * k * k * jn * jn * w.beta(amp.l0) / (32.0 * consts.epsilon0() * c * c * PI.powi(3)) * mix
}

/// One row of an [`EnergySpectrum`]; `n` counts zeros from 1 and `m = 2n + l₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub l0: usize,
    pub n: usize,
    pub m: usize,
    pub k0: f64,
    pub mean_energy: f64,
    /// Angular frequency of the `1 + cos 2ωt` oscillation is 2ω.
    pub omega: f64,
}

impl SpectrumRow {
    pub fn instant(&self, t: f64) -> f64 {
        self.mean_energy * (1.0 + libm::cos(2.0 * self.omega * t))
    }
}

#[derive(Debug, Clone)]
pub struct EnergySpectrum {
    pub q: f64,
    pub reading: BetaReading,
    pub rows: Vec<SpectrumRow>,
}

/// Mean energies for each `l₀` and zero index in `n_range` (1-based).
pub fn energy_spectrum(
    q: f64,
    l0s: &[usize],
    n_range: core::ops::RangeInclusive<usize>,
    r0: f64,
    consts: &PhysicalConstants,
    w: &WCoefficients,
) -> Result<EnergySpectrum> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo == 0 || hi < lo {
        return Err(Error::Config(format!("zero index range {lo}..={hi} must start at 1 and be non-empty")));
    }
    let mut l0s = l0s.to_vec();
    l0s.sort_unstable();
    l0s.dedup();
    let mut rows = Vec::new();
    for &l0 in &l0s {
        let table = bessel_zeros(l0, r0, hi)?;
        for n in lo..=hi {
            let k0 = table.zeros()[n - 1];
            rows.push(SpectrumRow {
                l0,
                n,
                m: 2 * n + l0,
                k0,
                mean_energy: energy_mean(q, l0, k0, r0, consts, w)?,
                omega: consts.c() * k0,
            });
        }
    }
    Ok(EnergySpectrum { q, reading: w.reading(), rows })
}

/// One line of [`balmer_differences`], comparing index `n0` with `n1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalmerRow {
    pub n0: usize,
    pub n1: usize,
    pub m0: usize,
    pub m1: usize,
    /// ⟨U⟩(k₀) − ⟨U⟩(k₁).
    pub difference: f64,
    /// `A/(m₀² − m₁²)`, A the asymptotic prefactor.
    pub model: f64,
    /// `A·(1/m₀² − 1/m₁²)`, the leading-order expansion in `1/(k r₀)²`.
    pub balmer_form: f64,
    /// `difference / first difference` of the table.
    pub observed_ratio: f64,
    /// The same ratio predicted by `model`.
    pub model_ratio: f64,
    /// `|observed_ratio/model_ratio − 1|`.
    pub relative_deviation: f64,
}

/// Prefactor `A` of the asymptotic energy difference:
/// `Q² c₀c₂ β/(1024 π¹⁰ ε₀ d² r₀)`, with `c₀c₂ = Q_{l₀,0}Q_{l₀,2}`, `d = Q_{0,0}`
/// for even l₀ and `c₀c₂ = P_{l₀+1,1}P_{l₀+1,3}`, `d = P_{1,1}` for odd l₀.
pub fn balmer_prefactor(q: f64, l0: usize, r0: f64, consts: &PhysicalConstants, w: &WCoefficients) -> f64 {
    let coef = |p: &[f64], i: usize| p.get(i).copied().unwrap_or(0.0);
    let (prod, lead) = if l0 % 2 == 0 {
        let ql = rayleigh_q(l0);
        (coef(&ql, 0) * coef(&ql, 2), coef(&rayleigh_q(0), 0))
    } else {
        let pl = rayleigh_p(l0 + 1);
        (coef(&pl, 1) * coef(&pl, 3), coef(&rayleigh_p(1), 1))
    };
    q * q * prod * w.beta(l0) / (1024.0 * PI.powi(10) * consts.epsilon0() * lead * lead * r0)
}

/// Energy differences of the first listed zero index against each of the
/// others, next to the asymptotic model.
pub fn balmer_differences(
    q: f64,
    l0: usize,
    r0: f64,
    consts: &PhysicalConstants,
    w: &WCoefficients,
    zero_indices: &[usize],
) -> Result<Vec<BalmerRow>> {
    if zero_indices.len() < 2 || zero_indices.contains(&0) {
        return Err(Error::Config("balmer_differences needs at least two 1-based zero indices".into()));
    }
    let top = *zero_indices.iter().max().unwrap_or(&1);
    let table = bessel_zeros(l0, r0, top)?;
    let mean = |n: usize| energy_mean(q, l0, table.zeros()[n - 1], r0, consts, w);
    let a = balmer_prefactor(q, l0, r0, consts, w);
    let n0 = zero_indices[0];
    let u0 = mean(n0)?;
    let m0 = 2 * n0 + l0;
    let inv_gap = |m1: usize| 1.0 / ((m0 * m0) as f64 - (m1 * m1) as f64);

    let mut rows = Vec::with_capacity(zero_indices.len() - 1);
    let (mut first_diff, mut first_gap) = (0.0, 0.0);
    for (i, &n1) in zero_indices[1..].iter().enumerate() {
        let m1 = 2 * n1 + l0;
        let difference = u0 - mean(n1)?;
        let gap = if m0 == m1 { 0.0 } else { inv_gap(m1) };
        if i == 0 {
            first_diff = difference;
            first_gap = gap;
        }
        let observed_ratio = difference / first_diff;
        let model_ratio = gap / first_gap;
        rows.push(BalmerRow {
            n0,
            n1,
            m0,
            m1,
            difference,
            model: a * gap,
            balmer_form: a * (1.0 / (m0 * m0) as f64 - 1.0 / (m1 * m1) as f64),
            observed_ratio,
            model_ratio,
            relative_deviation: (observed_ratio / model_ratio - 1.0).abs(),
        });
    }
    Ok(rows)
}

/// The electric field of one (l₀, k₀) key, together with its current
/// `J = −ε₀ ∂E/∂t`.
#[derive(Debug, Clone)]
pub struct FundamentalField {
    l0: usize,
    k0: f64,
    r0: f64,
    omega: f64,
    epsilon0: f64,
    u: Vec<CVec3>,
    v: Vec<CVec3>,
}

impl FundamentalField {
    pub fn new(amp: &ModeAmplitude, r0: f64, consts: &PhysicalConstants, w: &WCoefficients) -> Result<Self> {
        check_zero(amp.l0, amp.k0, r0)?;
        let l = amp.l0;
        let pre = FRAC_2_PI.sqrt() * I.powu(l as u32) * (amp.k0 * amp.k0 / (4.0 * PI));
        let (mut u, mut v) = (Vec::with_capacity(2 * l + 1), Vec::with_capacity(2 * l + 1));
        for m in -(l as i64)..=(l as i64) {
            let wc = w.get(l, m).conj();
            u.push(wc * (amp.alpha * pre));
            v.push(wc * (amp.beta * pre));
        }
        Ok(Self { l0: l, k0: amp.k0, r0, omega: consts.c() * amp.k0, epsilon0: consts.epsilon0(), u, v })
    }

    pub fn l0(&self) -> usize {
        self.l0
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `i^{l₀−1}`: with α = −β the field is this phase times a real vector.
    pub fn global_phase(&self) -> Complex64 {
        I.powi(self.l0 as i32 - 1)
    }

    /// Σ_m [U_m/(−iω) e^{−iωt} + V_m/(iω) e^{iωt}] Y_m.
    fn angular_e(&self, table: &HarmonicTable, t: f64) -> CVec3 {
        let ph = Complex64::from_polar(1.0, -self.omega * t);
        let cu = ph / (-I * self.omega);
        let cv = ph.conj() / (I * self.omega);
        self.angular(table, cu, cv)
    }

    fn angular_j(&self, table: &HarmonicTable, t: f64) -> CVec3 {
        let ph = Complex64::from_polar(1.0, -self.omega * t);
        self.angular(table, ph, ph.conj())
    }

    fn angular(&self, table: &HarmonicTable, cu: Complex64, cv: Complex64) -> CVec3 {
        let l = self.l0;
        let mut acc = CVec3::ZERO;
        for (i, m) in (-(l as i64)..=(l as i64)).enumerate() {
            acc += (self.u[i] * cu + self.v[i] * cv) * table.get(l, m);
        }
        acc
    }

    /// E at spherical coordinates; zero outside the ball.
    pub fn e_spherical(&self, r: f64, theta: f64, phi: f64, t: f64) -> CVec3 {
        if r > self.r0 {
            return CVec3::ZERO;
        }
        let table = HarmonicTable::new(self.l0, libm::cos(theta), phi);
        self.angular_e(&table, t) * (-tau(self.l0, self.k0, r) / self.epsilon0)
    }

    pub fn e_at(&self, x: Vec3, t: f64) -> CVec3 {
        let (r, th, ph) = to_spherical(x);
        self.e_spherical(r, th, ph, t)
    }

    /// J = Σ_m (U_m e^{−iωt} + V_m e^{iωt}) γ_m; zero outside the ball.
    pub fn j_spherical(&self, r: f64, theta: f64, phi: f64, t: f64) -> CVec3 {
        if r > self.r0 {
            return CVec3::ZERO;
        }
        let table = HarmonicTable::new(self.l0, libm::cos(theta), phi);
        self.angular_j(&table, t) * tau(self.l0, self.k0, r)
    }

    /// E sampled on a Cartesian spacetime grid (zero outside the ball).
    pub fn sample(&self, grid: &SpacetimeGrid) -> Result<VectorField3> {
        VectorField3::sample(*grid, |t, x| self.e_at(x, t))
    }
}

/// [`alpha_from_q`] followed by sampling the fundamental field.
pub fn synthesize_fundamental_e(
    q: f64,
    l0: usize,
    k0: f64,
    r0: f64,
    consts: &PhysicalConstants,
    w: &WCoefficients,
    grid: &SpacetimeGrid,
) -> Result<VectorField3> {
    let amp = alpha_from_q(q, l0, k0, r0, consts)?;
    FundamentalField::new(&amp, r0, consts, w)?.sample(grid)
}

fn check_ball(fields: &[&FundamentalField], rule: &BallRule) -> Result<()> {
    for f in fields {
        if (f.r0 - rule.r0()).abs() > 1e-12 * f.r0 {
            return Err(Error::Shape(format!("field radius {} differs from rule radius {}", f.r0, rule.r0())));
        }
    }
    Ok(())
}

/// `∫_B E_a · conj(E_b)` at time t.
pub fn ball_inner(a: &FundamentalField, b: &FundamentalField, t: f64, rule: &BallRule) -> Result<Complex64> {
    check_ball(&[a, b], rule)?;
    let l_max = a.l0.max(b.l0);
    let mut ang = Complex64::new(0.0, 0.0);
    for node in rule.sphere().nodes() {
        let table = HarmonicTable::new(l_max, node.cos_theta, node.phi);
        ang += a.angular_e(&table, t).dot(&b.angular_e(&table, t).conj()) * node.weight;
    }
    let rad: f64 = rule
        .radial()
        .map(|(r, w)| w * tau(a.l0, a.k0, r) * tau(b.l0, b.k0, r))
        .sum();
    Ok(ang * rad / (a.epsilon0 * b.epsilon0))
}

/// `(ε₀/2) ∫_B |Σ E_i|²` at time t.
pub fn ball_energy(fields: &[FundamentalField], t: f64, rule: &BallRule) -> Result<f64> {
    let Some(first) = fields.first() else {
        return Ok(0.0);
    };
    let refs: Vec<&FundamentalField> = fields.iter().collect();
    check_ball(&refs, rule)?;
    let radial: Vec<(f64, f64)> = rule.radial().collect();
    let l_max = fields.iter().map(|f| f.l0).max().unwrap_or(0);
    let mut ang = vec![CVec3::ZERO; fields.len()];
    let mut total = 0.0;
    for node in rule.sphere().nodes() {
        let table = HarmonicTable::new(l_max, node.cos_theta, node.phi);
        for (a, f) in ang.iter_mut().zip(fields) {
            *a = f.angular_e(&table, t) * (-1.0 / f.epsilon0);
        }
        let mut inner = 0.0;
        for &(r, w) in &radial {
            let mut e = CVec3::ZERO;
            for (a, f) in ang.iter().zip(fields) {
                e += *a * tau(f.l0, f.k0, r);
            }
            inner += w * e.norm_sqr();
        }
        total += node.weight * inner;
    }
    Ok(0.5 * first.epsilon0 * total)
}

/// `dQ/dt = −∮_{S(r₀)} J·n̂ dS` by quadrature on the cavity wall.
pub fn charge_rate(field: &FundamentalField, t: f64, rule: &SphereRule) -> Complex64 {
    let r0 = field.r0;
    let mut acc = Complex64::new(0.0, 0.0);
    for node in rule.nodes() {
        let st = libm::sqrt((1.0 - node.cos_theta * node.cos_theta).max(0.0));
        let n_hat = [st * libm::cos(node.phi), st * libm::sin(node.phi), node.cos_theta];
        acc += field.j_spherical(r0, node.theta, node.phi, t).dot_real(&n_hat) * node.weight;
    }
    -acc * (r0 * r0)
}

/// L² errors of reconstructing `f(r)` from its first `1..=n_max` radial
/// coefficients against `s_{l,k_n} = τ_{l,k_n}/c_{l,k_n}` (weight r²).
pub fn radial_projection_errors(
    f: impl Fn(f64) -> f64,
    l: usize,
    r0: f64,
    n_max: usize,
    rule: &GaussLegendre,
) -> Result<Vec<f64>> {
    let table = bessel_zeros(l, r0, n_max)?;
    let nodes: Vec<(f64, f64)> = rule.on(0.0, r0).map(|(r, w)| (r, w * r * r)).collect();
    let mut basis = Vec::with_capacity(n_max);
    for &k in table.zeros() {
        let c = norm_constant(l, k, r0)?;
        basis.push(nodes.iter().map(|&(r, _)| tau(l, k, r) / c).collect::<Vec<f64>>());
    }
    let target: Vec<f64> = nodes.iter().map(|&(r, _)| f(r)).collect();
    let mut resid = target.clone();
    let mut out = Vec::with_capacity(n_max);
    for s in &basis {
        let a: f64 = nodes.iter().zip(s).zip(&target).map(|((&(_, w), si), fi)| w * si * fi).sum();
        for (ri, si) in resid.iter_mut().zip(s) {
            *ri -= a * si;
        }
        let err: f64 = nodes.iter().zip(&resid).map(|(&(_, w), ri)| w * ri * ri).sum();
        out.push(err.sqrt());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> PhysicalConstants {
        PhysicalConstants::natural()
    }

    #[test]
    fn gamma_l0_angular_factor() {
        let mode = ModeIndex::new(0, 0, 2.0).unwrap();
        let r = 0.7;
        for &(th, ph) in &[(0.1, 0.3), (1.2, -2.0), (3.0, 3.1)] {
            let g = mode_gamma(mode, r, th, ph).unwrap();
            let expect = tau(0, 2.0, r) / (4.0 * PI).sqrt();
            assert!((g - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn delta_vanishes_on_wall() {
        let cfg = CavityConfig::new(1.3, nat(), 3, 3).unwrap();
        for mode in cfg.modes() {
            let d = mode_delta(mode, 1.3, 0.8, 0.4, 1.3).unwrap();
            assert!(d.norm() < 1e-9, "{mode:?}: {d}");
        }
    }

    #[test]
    fn delta_rejects_non_zero_k() {
        let mode = ModeIndex::new(1, 0, 2.0).unwrap();
        assert!(matches!(mode_delta(mode, 0.5, 1.0, 0.0, 1.0), Err(Error::Precondition(_))));
        assert!(ModeIndex::new(1, 2, 2.0).is_err());
        assert!(mode_gamma(mode, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn w_sum_and_support() {
        let w = w_coefficients(4, &SphereRule::new(16, 16).unwrap()).unwrap();
        assert!((w.total() - 4.0 * PI).abs() < 1e-8);
        assert!((w.beta(1) - 4.0 * PI).abs() < 1e-8);
        assert!(w.beta(0) < 1e-20);
        for l in 2..=4 {
            assert!(w.beta(l) < 1e-20, "beta_{l} = {}", w.beta(l));
        }
        assert!(matches!(w_coefficients(10, &SphereRule::new(8, 32).unwrap()), Err(Error::Config(_))));
    }

    #[test]
    fn amplitude_round_trip_and_sign() {
        let k = nat();
        let f = Complex64::new(0.3, -1.2);
        let (fs, gs) = amplitude_relations(f, Complex64::new(1.0, 0.0), 2.0, &k).unwrap();
        assert_eq!(gs, Complex64::new(-1.0, 0.0));
        let (f2, g2) = amplitude_relations_inverse(fs, gs, 2.0, &k).unwrap();
        assert!((f2 - f).norm() < 1e-14 && (g2 - 1.0).norm() < 1e-14);
        let (z, _) = amplitude_relations(Complex64::new(0.0, 0.0), f, 2.0, &k).unwrap();
        assert_eq!(z, Complex64::new(0.0, 0.0));
        assert!(amplitude_relations(f, f, 0.0, &k).is_err());
    }

    #[test]
    fn ball_integral_limits() {
        let r0 = 0.9;
        let vol = 4.0 / 3.0 * PI * r0 * r0 * r0;
        assert!((ball_fourier_integral(1e-9, r0).unwrap() - vol).abs() < 1e-8);
        assert_eq!(ball_fourier_integral(0.0, r0).unwrap(), vol);
        let v = ball_fourier_integral(PI / r0, r0).unwrap();
        assert!((v - 4.0 * r0 * r0 * r0 / PI).abs() < 1e-12);
        // both branches agree across the switch
        let s = 1e-2 * (1.0 + 1e-9);
        let k = s / r0;
        let closed = 4.0 * PI / (k * k * k) * (s.sin() - s * s.cos());
        assert!((ball_fourier_integral(k, r0).unwrap() - closed).abs() < 1e-10 * vol);
    }

    #[test]
    fn alpha_charge_round_trip() {
        let k = nat();
        let r0 = 1.0;
        let amp = alpha_from_q(2.5, 0, 2.0 * PI, r0, &k).unwrap();
        assert_eq!(amp.beta(), -amp.alpha());
        assert!((amp.f(&k) - amp.g(&k)).norm() < 1e-15);
        let mut set = ModeAmplitudes::new();
        set.insert(amp).unwrap();
        let q = charge_q(&set, r0, &k).unwrap();
        assert!((q.re - 2.5).abs() < 1e-12 && q.im.abs() < 1e-12);
        assert_eq!(alpha_from_q(0.0, 0, PI, r0, &k).unwrap().alpha(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn l1_lattice_is_degenerate() {
        let k = nat();
        let z = bessel_zeros(1, 1.0, 3).unwrap();
        for &k0 in z.zeros() {
            assert!(matches!(alpha_from_q(1.0, 1, k0, 1.0, &k), Err(Error::Precondition(_))));
            let one = Complex64::new(1.0, 0.0);
            let mut set = ModeAmplitudes::new();
            set.insert(ModeAmplitude::new(1, k0, 1.0, one, -one).unwrap()).unwrap();
            let scale = 2.0 * (2.0 * PI).powf(1.5) * 4.0 * PI * k0.powf(1.5);
            assert!(charge_q(&set, 1.0, &k).unwrap().norm() < 1e-14 * scale);
        }
    }

    #[test]
    fn non_stationary_amplitudes_reported() {
        let one = Complex64::new(1.0, 0.0);
        let mut set = ModeAmplitudes::new();
        set.insert(ModeAmplitude::new(0, PI, 1.0, one, one).unwrap()).unwrap();
        assert!(matches!(charge_q(&set, 1.0, &nat()), Err(Error::Precondition(_))));
        assert!(set.insert(ModeAmplitude::new(0, PI, 1.0, one, -one).unwrap()).is_err());
    }

    #[test]
    fn energy_instant_phases() {
        let k = nat();
        let w = WCoefficients::parametric(4, 2.0).unwrap();
        let k0 = bessel_zeros(2, 1.0, 2).unwrap().zeros()[1];
        let mean = energy_mean(1.5, 2, k0, 1.0, &k, &w).unwrap();
        assert!(mean > 0.0);
        let t0 = energy_instant(1.5, 2, k0, 1.0, 0.0, &k, &w).unwrap();
        assert!((t0 - 2.0 * mean).abs() < 1e-15 * mean);
        let quarter = PI / (2.0 * k0);
        assert!(energy_instant(1.5, 2, k0, 1.0, quarter, &k, &w).unwrap().abs() < 1e-15 * mean);
    }

    #[test]
    fn closed_forms_agree() {
        let k = PhysicalConstants::new(2.0, 0.125, 2.0).unwrap();
        let w = WCoefficients::parametric(4, 3.0).unwrap();
        let k0 = bessel_zeros(4, 0.8, 3).unwrap().zeros()[2];
        let amp = alpha_from_q(0.7, 4, k0, 0.8, &k).unwrap();
        for &t in &[0.0, 0.13, 0.5] {
            let a = energy_from_amplitude(&amp, 0.8, t, &k, &w);
            let b = energy_instant(0.7, 4, k0, 0.8, t, &k, &w).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs().max(1e-300) + 1e-30, "{a} vs {b}");
        }
    }

    #[test]
    fn projection_error_decreases() {
        let gl = GaussLegendre::new(128).unwrap();
        let errs = radial_projection_errors(|r| 1.0 - r * r, 0, 1.0, 12, &gl).unwrap();
        assert!(errs.windows(2).all(|p| p[1] <= p[0]));
        assert!(errs[11] < 0.05 * errs[0]);
    }
}
