//! Plane-wave solutions of the source-free equations.
//!
//! A mode contributes `amplitude · pol · exp(i(k·x + sign·ωt))` with
//! ω = c|k|, so `sign = −1` is the e^{−iωt} branch. Its magnetic partner has
//! polarisation `−sign·(k × pol)/ω`, which is what Faraday's law requires for
//! this phase convention.

use num_complex::Complex64;

use crate::prelude::*;
use crate::vec3::{self, CVec3, Vec3};
use crate::{Error, PhysicalConstants, Result, SpacetimeGrid, VectorField3};

/// Relative tolerance on pol·k for a mode to count as transverse.
pub const TRANSVERSE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    /// Transverse: a solution of the full source-free Maxwell system.
    Maxwell,
    /// Any polarisation: a solution of the wave equation only.
    WaveOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveMode {
    pub k: Vec3,
    pub pol: CVec3,
    /// −1 for e^{−iωt}, +1 for e^{+iωt}.
    pub sign: i8,
    pub amplitude: Complex64,
    pub kind: ModeKind,
}

impl PlaneWaveMode {
    fn build(k: Vec3, pol: CVec3, sign: i8, amplitude: Complex64, kind: ModeKind) -> Result<Self> {
        if vec3::norm(&k) == 0.0 || !k.iter().all(|x| x.is_finite()) {
            return Err(Error::Domain(format!("wavevector must be finite and nonzero, got {k:?}")));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::Domain(format!("branch sign must be ±1, got {sign}")));
        }
        if !pol.is_finite() || !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
            return Err(Error::Domain("polarisation and amplitude must be finite".into()));
        }
        Ok(Self { k, pol, sign, amplitude, kind })
    }

    /// A transverse mode; rejects pol·k ≠ 0.
    pub fn maxwell(k: Vec3, pol: CVec3, sign: i8, amplitude: Complex64) -> Result<Self> {
        let m = Self::build(k, pol, sign, amplitude, ModeKind::Maxwell)?;
        if !m.is_transverse() {
            return Err(Error::Precondition(format!(
                "polarisation not transverse: |pol·k| = {:e}",
                pol.dot_real(&k).norm()
            )));
        }
        Ok(m)
    }

    pub fn wave_only(k: Vec3, pol: CVec3, sign: i8, amplitude: Complex64) -> Result<Self> {
        Self::build(k, pol, sign, amplitude, ModeKind::WaveOnly)
    }

    pub fn is_transverse(&self) -> bool {
        self.pol.dot_real(&self.k).norm() <= TRANSVERSE_TOL * self.pol.norm() * vec3::norm(&self.k)
    }

    pub fn omega(&self, consts: &PhysicalConstants) -> f64 {
        consts.c() * vec3::norm(&self.k)
    }

    pub fn value_at(&self, x: Vec3, t: f64, consts: &PhysicalConstants) -> CVec3 {
        let phase = vec3::dot(&self.k, &x) + self.sign as f64 * self.omega(consts) * t;
        self.pol * (self.amplitude * Complex64::from_polar(1.0, phase))
    }
}

/// Magnetic partner of a transverse mode: polarisation −sign·(k × pol)/ω.
pub fn induced_b(mode: &PlaneWaveMode, consts: &PhysicalConstants) -> Result<PlaneWaveMode> {
    if mode.kind != ModeKind::Maxwell || !mode.is_transverse() {
        return Err(Error::Precondition("induced B needs a transverse Maxwell mode".into()));
    }
    let scale = -(mode.sign as f64) / mode.omega(consts);
    let pol = CVec3::from_real(mode.k).cross(&mode.pol) * scale;
    Ok(PlaneWaveMode { pol, ..*mode })
}

/// Sum of all modes at one event.
pub fn superpose_at(modes: &[PlaneWaveMode], x: Vec3, t: f64, consts: &PhysicalConstants) -> CVec3 {
    modes.iter().fold(CVec3::ZERO, |acc, m| acc + m.value_at(x, t, consts))
}

fn check_modes(modes: &[PlaneWaveMode]) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::Precondition(
            "empty mode list; use an explicit zero-amplitude mode for the zero field".into(),
        ));
    }
    Ok(())
}

pub fn synthesize_e(modes: &[PlaneWaveMode], grid: &SpacetimeGrid, consts: &PhysicalConstants) -> Result<VectorField3> {
    check_modes(modes)?;
    VectorField3::sample(*grid, |t, x| superpose_at(modes, x, t, consts))
}

pub fn induced_b_modes(modes: &[PlaneWaveMode], consts: &PhysicalConstants) -> Result<Vec<PlaneWaveMode>> {
    modes.iter().map(|m| induced_b(m, consts)).collect()
}

/// (E, B) for a list of transverse modes.
pub fn synthesize_pair(
    modes: &[PlaneWaveMode],
    grid: &SpacetimeGrid,
    consts: &PhysicalConstants,
) -> Result<(VectorField3, VectorField3)> {
    let b_modes = induced_b_modes(modes, consts)?;
    Ok((synthesize_e(modes, grid, consts)?, synthesize_e(&b_modes, grid, consts)?))
}

/// Splits each polarisation into pol⊥ and pol∥ = (pol·k)k/|k|².
///
/// The first list carries the transverse parts (Maxwell modes), the second
/// the longitudinal remainder (wave-only modes), mode for mode.
pub fn split_transverse(modes: &[PlaneWaveMode]) -> Result<(Vec<PlaneWaveMode>, Vec<PlaneWaveMode>)> {
    let mut perp = Vec::with_capacity(modes.len());
    let mut par = Vec::with_capacity(modes.len());
    for m in modes {
        let k2 = vec3::dot(&m.k, &m.k);
        if k2 == 0.0 {
            return Err(Error::Domain("zero wavevector".into()));
        }
        let pol_par = CVec3::from_real(m.k) * (m.pol.dot_real(&m.k) / k2);
        let pol_perp = m.pol - pol_par;
        perp.push(PlaneWaveMode { pol: pol_perp, kind: ModeKind::Maxwell, ..*m });
        par.push(PlaneWaveMode { pol: pol_par, kind: ModeKind::WaveOnly, ..*m });
    }
    Ok((perp, par))
}

/// Upper bound on the central-difference curl of a longitudinal superposition:
/// Σ |amp·pol| (h²/6) Σ_j |k_j|³. The continuum curl is zero.
pub fn longitudinal_curl_floor(modes: &[PlaneWaveMode], h: f64) -> f64 {
    modes
        .iter()
        .map(|m| {
            let cubes: f64 = m.k.iter().map(|x| x.abs().powi(3)).sum();
            (m.pol * m.amplitude).norm() * h * h / 6.0 * cubes
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{curl, vector_interior_max};

    fn cv(x: f64, y: f64, z: f64) -> CVec3 {
        CVec3::from_real([x, y, z])
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn worked_b_polarisation() {
        let consts = PhysicalConstants::natural();
        let m = PlaneWaveMode::maxwell([2.0, 0.0, 0.0], cv(0.0, 1.0, 0.0), -1, one()).unwrap();
        let b = induced_b(&m, &consts).unwrap();
        assert!((b.pol - cv(0.0, 0.0, 1.0)).norm() < 1e-15);
        let p = PlaneWaveMode::maxwell([2.0, 0.0, 0.0], cv(0.0, 1.0, 0.0), 1, one()).unwrap();
        assert!((induced_b(&p, &consts).unwrap().pol + cv(0.0, 0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn longitudinal_rejected() {
        assert!(matches!(
            PlaneWaveMode::maxwell([1.0, 0.0, 0.0], cv(1.0, 0.0, 0.0), -1, one()),
            Err(Error::Precondition(_))
        ));
        assert!(PlaneWaveMode::maxwell([0.0; 3], cv(1.0, 0.0, 0.0), -1, one()).is_err());
        let w = PlaneWaveMode::wave_only([1.0, 0.0, 0.0], cv(1.0, 0.0, 0.0), -1, one()).unwrap();
        assert!(induced_b(&w, &PhysicalConstants::natural()).is_err());
    }

    #[test]
    fn conjugate_pair_is_real() {
        let consts = PhysicalConstants::natural();
        let k = [0.7, -1.1, 0.4];
        let pol = CVec3::from_parts([1.1, 0.7, 0.0], [0.0, 0.0, 1.0]);
        let pol = pol - CVec3::from_real(k) * (pol.dot_real(&k) / vec3::dot(&k, &k));
        let a = Complex64::new(0.3, -0.8);
        let modes = [
            PlaneWaveMode::maxwell(k, pol, -1, a).unwrap(),
            PlaneWaveMode::maxwell(vec3::scale(&k, -1.0), pol.conj(), 1, a.conj()).unwrap(),
        ];
        let g = SpacetimeGrid::cube([0.0; 3], 1.0, 5, 0.0, 0.1, 3).unwrap();
        let e = synthesize_e(&modes, &g, &consts).unwrap();
        assert!(e.max_imag() < 1e-12);
        assert!(e.max_norm() > 0.1);
    }

    #[test]
    fn empty_list_is_an_error() {
        let g = SpacetimeGrid::cube([0.0; 3], 1.0, 3, 0.0, 0.1, 1).unwrap();
        assert!(synthesize_e(&[], &g, &PhysicalConstants::natural()).is_err());
        let z = PlaneWaveMode::wave_only([1.0, 0.0, 0.0], cv(0.0, 1.0, 0.0), -1, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(synthesize_e(&[z], &g, &PhysicalConstants::natural()).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn split_edge_cases_and_idempotence() {
        let k = [1.0, 2.0, -0.5];
        let m = PlaneWaveMode::wave_only(k, cv(1.0, 2.0, -0.5), -1, one()).unwrap();
        let (perp, par) = split_transverse(&[m]).unwrap();
        assert!(perp[0].pol.norm() < 1e-15 && (par[0].pol - m.pol).norm() < 1e-15);
        let t = PlaneWaveMode::wave_only(k, cv(2.0, -1.0, 0.0), 1, one()).unwrap();
        let (perp, par) = split_transverse(&[t]).unwrap();
        assert!(par[0].pol.norm() == 0.0 && (perp[0].pol - t.pol).norm() == 0.0);

        let r = PlaneWaveMode::wave_only(k, CVec3::from_parts([0.3, -0.2, 0.9], [1.0, 0.1, 0.0]), 1, one()).unwrap();
        let (p1, l1) = split_transverse(&[r]).unwrap();
        let (p2, l2) = split_transverse(&p1).unwrap();
        assert!((p2[0].pol - p1[0].pol).norm() < 1e-14 && l2[0].pol.norm() < 1e-14);
        let (p3, l3) = split_transverse(&l1).unwrap();
        assert!(p3[0].pol.norm() < 1e-14 && (l3[0].pol - l1[0].pol).norm() < 1e-14);
    }

    #[test]
    fn longitudinal_curl_below_floor() {
        let consts = PhysicalConstants::natural();
        let k = [1.3, -0.7, 2.1];
        let m = PlaneWaveMode::wave_only(k, CVec3::from_parts([0.3, 0.5, -0.2], [0.1, 0.0, 0.4]), -1, one()).unwrap();
        let (_, par) = split_transverse(&[m]).unwrap();
        let g = SpacetimeGrid::cube([0.0; 3], 0.5, 11, 0.0, 0.05, 1).unwrap();
        let f = synthesize_e(&par, &g, &consts).unwrap();
        let c = vector_interior_max(&curl(&f).unwrap(), 1);
        let floor = longitudinal_curl_floor(&par, g.h());
        assert!(c <= floor * (1.0 + 1e-9) + 1e-14 && c > 0.1 * floor, "{c} vs {floor}");
    }
}
