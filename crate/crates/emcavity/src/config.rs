//! Run configuration: one JSON document, every section optional, unknown
//! keys rejected. Command-line flags override the values found here.

use std::path::{Path, PathBuf};

use emcavity_core::specfun::BallRule;
use emcavity_core::PhysicalConstants;
use serde::{Deserialize, Serialize};

use crate::format::GridSpec;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Natural,
    Si,
}

impl Units {
    pub fn constants(self) -> PhysicalConstants {
        match self {
            Units::Natural => PhysicalConstants::natural(),
            Units::Si => PhysicalConstants::si(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub units: Option<Units>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub quadrature: Option<Quadrature>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub zeros: Option<ZerosSection>,
    #[serde(default)]
    pub modes: Option<ModesSection>,
    #[serde(default)]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default)]
    pub jefimenko: Option<JefimenkoSection>,
    #[serde(default)]
    pub boost: Option<BoostSection>,
}

/// Product Gauss rule orders on the ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    pub n_r: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { n_r: 64, n_theta: 64, n_phi: 128 }
    }
}

impl Quadrature {
    pub fn ball(&self, r0: f64) -> emcavity_core::Result<BallRule> {
        BallRule::new(r0, self.n_r, self.n_theta, self.n_phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub continuity: f64,
    pub decay: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZerosSection {
    pub l: Option<usize>,
    pub count: Option<usize>,
    pub r0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesSection {
    pub l_max: Option<usize>,
    pub zeros_per_l: Option<usize>,
    pub r0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub q: Option<f64>,
    pub l0: Option<Vec<usize>>,
    pub r0: Option<f64>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    /// Value of β for the parametric reading.
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JefimenkoSection {
    pub source: SourceSpec,
    pub eval: GridSpec,
}

/// Charge/current distribution for the `jefimenko` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceSpec {
    /// Static Gaussian charge sampled on `lattice`.
    Gaussian { q: f64, sigma: f64, center: [f64; 3], lattice: GridSpec },
    /// Gaussian-smeared dipole p₀ sin(ωt) ẑ.
    Dipole { p0: f64, omega: f64, sigma: f64, center: [f64; 3], lattice: GridSpec },
    /// ρ and J read from field files.
    History { rho: PathBuf, j: PathBuf, support_radius: f64 },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostSection {
    /// Velocity as a fraction of c.
    pub beta: Option<[f64; 3]>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.threads == Some(0) {
            return Err(ConfigError::Invalid("threads must be at least 1".into()));
        }
        if let Some(t) = &self.tolerances {
            if !(t.continuity > 0.0 && t.decay > 0.0) {
                return Err(ConfigError::Invalid("tolerances must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Flag value if given, else config value, else a configuration error.
pub fn pick<T: Clone>(flag: Option<T>, config: Option<T>, what: &str) -> Result<T, ConfigError> {
    flag.or(config)
        .ok_or_else(|| ConfigError::Invalid(format!("missing {what} (give a flag or a config entry)")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_valid() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_json(r#"{"unit": "si"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"zeros": {"l": 1, "cnt": 3}}"#).is_err());
        assert!(RunConfig::from_json(
            r#"{"jefimenko": {"source": {"type": "gaussian", "q": 1, "sigma": 0.1, "center": [0,0,0],
                "lattice": {"origin": [0,0,0], "n": [3,3,3], "h": 1, "spin": 2}},
                "eval": {"origin": [0,0,0], "n": [3,3,3], "h": 1}}}"#
        )
        .is_err());
    }

    #[test]
    fn sections_parse() {
        let cfg = RunConfig::from_json(
            r#"{"units": "si", "spectrum": {"q": 2.0, "l0": [0, 4], "n_min": 20, "n_max": 30},
                "boost": {"beta": [0.5, 0, 0]}}"#,
        )
        .unwrap();
        assert_eq!(cfg.units, Some(Units::Si));
        assert_eq!(cfg.spectrum.unwrap().l0, Some(vec![0, 4]));
        assert_eq!(pick(None, Some(3), "x").unwrap(), 3);
        assert_eq!(pick(Some(1), Some(3), "x").unwrap(), 1);
        assert!(pick::<usize>(None, None, "x").is_err());
        assert!(RunConfig::from_json(r#"{"threads": 0}"#).is_err());
    }
}
