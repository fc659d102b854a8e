//! Experiment configuration, read from JSON with CLI overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::blocks::validate_block_geometry;
use crate::error::{Error, Result};
use crate::fem::TransferRule;
use crate::pml::{validate_h1, validate_h2, PmlProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Fe,
    PstddmLayers,
    PstddmBlocks,
    GmresStudy,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Fe => "fe",
            Mode::PstddmLayers => "pstddm-layers",
            Mode::PstddmBlocks => "pstddm-blocks",
            Mode::GmresStudy => "gmres-study",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fe" => Ok(Mode::Fe),
            "pstddm-layers" => Ok(Mode::PstddmLayers),
            "pstddm-blocks" => Ok(Mode::PstddmBlocks),
            "gmres-study" => Ok(Mode::GmresStudy),
            other => Err(Error::Config(format!(
                "unknown mode '{other}' (expected fe, pstddm-layers, pstddm-blocks or gmres-study)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub l: [f64; 2],
    pub l_bar: [f64; 2],
    pub d: [f64; 2],
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            l: [1.1, 1.1],
            l_bar: [1.18, 1.18],
            d: [0.2, 0.1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub k_over_2pi: f64,
    /// Nodes per wavelength.
    pub q: f64,
    pub layers: usize,
    pub blocks: Option<usize>,
    pub gamma0: f64,
    pub geometry: Geometry,
    pub mode: Mode,
    pub tol: f64,
    pub restart: usize,
    pub maxit: usize,
    pub output: Option<PathBuf>,
    pub transfer_rule: TransferRule,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            k_over_2pi: 2.0,
            q: 16.0,
            layers: 4,
            blocks: None,
            gamma0: 5.0,
            geometry: Geometry::default(),
            mode: Mode::PstddmLayers,
            tol: 1e-6,
            restart: 50,
            maxit: 1000,
            output: None,
            transfer_rule: TransferRule::Nodal,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn k(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.k_over_2pi
    }

    pub fn profile(&self) -> Result<PmlProfile> {
        PmlProfile::new(self.geometry.l, self.geometry.l_bar, self.geometry.d, self.gamma0)
    }

    /// Block count, 1 when unset.
    pub fn block_count(&self) -> usize {
        self.blocks.unwrap_or(1)
    }

    /// Checks the configuration and returns warnings that do not stop a run.
    pub fn validate(&self) -> Result<Vec<String>> {
        if !(self.k_over_2pi > 0.0) || !self.k_over_2pi.is_finite() {
            return Err(Error::Config(format!("k_over_2pi must be positive, got {}", self.k_over_2pi)));
        }
        if !(self.q >= 4.0) || !self.q.is_finite() {
            return Err(Error::Config(format!("q must be at least 4, got {}", self.q)));
        }
        if self.layers == 0 {
            return Err(Error::Config("layers must be at least 1".into()));
        }
        if !(self.tol > 0.0) || self.restart == 0 || self.maxit == 0 {
            return Err(Error::Config("gmres needs tol > 0, restart >= 1 and maxit >= 1".into()));
        }
        let profile = self.profile()?;
        let mut warnings = Vec::new();
        if self.mode == Mode::Fe {
            return Ok(warnings);
        }
        let h1 = validate_h1(&profile);
        if !h1.ok() {
            return Err(Error::Config(format!("PML geometry violates the layer assumption: {}", h1.violations.join("; "))));
        }
        match self.mode {
            Mode::PstddmBlocks => {
                match self.blocks {
                    Some(b) if b >= 1 => {}
                    _ => return Err(Error::Config("pstddm-blocks needs blocks >= 1".into())),
                }
                validate_block_geometry(&profile)?;
            }
            _ => {
                let h2 = validate_h2(&profile, profile.d[0]);
                if !h2.ok() {
                    warnings.extend(h2.violations);
                }
            }
        }
        Ok(warnings)
    }
}
