use crate::prelude::*;

use crate::{Error, Result};

/// Vacuum constants. Construction checks `c·sqrt(μ₀ε₀) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    epsilon0: f64,
    mu0: f64,
    c: f64,
}

/// Relative tolerance on `c·sqrt(μ₀ε₀) = 1`.
pub const CONSISTENCY_TOL: f64 = 1e-12;

impl PhysicalConstants {
    pub fn new(epsilon0: f64, mu0: f64, c: f64) -> Result<Self> {
        if !(epsilon0 > 0.0 && mu0 > 0.0 && c > 0.0)
            || !(epsilon0.is_finite() && mu0.is_finite() && c.is_finite())
        {
            return Err(Error::Config(format!(
                "constants must be finite and positive (epsilon0={epsilon0}, mu0={mu0}, c={c})"
            )));
        }
        let check = c * (mu0 * epsilon0).sqrt();
        if (check - 1.0).abs() > CONSISTENCY_TOL {
            return Err(Error::Config(format!(
                "c*sqrt(mu0*epsilon0) = {check}, expected 1"
            )));
        }
        Ok(Self { epsilon0, mu0, c })
    }

    /// ε₀ = μ₀ = c = 1.
    pub fn natural() -> Self {
        Self {
            epsilon0: 1.0,
            mu0: 1.0,
            c: 1.0,
        }
    }

    /// SI values. ε₀ is derived from μ₀ and the exact c so the invariant holds
    /// to rounding.
    pub fn si() -> Self {
        let c = 299_792_458.0;
        let mu0 = 1.256_637_062_12e-6;
        let epsilon0 = 1.0 / (mu0 * c * c);
        Self { epsilon0, mu0, c }
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `μ₀ε₀ = 1/c²`.
    pub fn inv_c2(&self) -> f64 {
        self.mu0 * self.epsilon0
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::natural()
    }
}

/// Alias for [`PhysicalConstants::natural`].
pub fn natural_units() -> PhysicalConstants {
    PhysicalConstants::natural()
}
