// SPDX-License-Identifier: Apache-2.0

//! Tunable settings: sensor thresholds, range of motion, garment losses,
//! LED threshold, accelerometer counting parameters and gate aliases.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analog::{GarmentStage, DEFAULT_THRESHOLD};
use crate::kinematics::{RomSpec, SensorSpecs};
use crate::netlist::AliasMap;

pub const DEFAULTS_TOML: &str = include_str!("../assets/defaults.toml");
pub const DEFAULTS_ENV: &str = "STITCHSIM_DEFAULTS";

#[derive(Debug, Error)]
pub enum DefaultsError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid defaults: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccelParams {
    /// Minimum peak prominence, in g.
    pub min_prominence: f64,
    pub refractory_ms: u64,
}

impl Default for AccelParams {
    fn default() -> Self {
        Self { min_prominence: 0.2, refractory_ms: 500 }
    }
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    /// LED on threshold, in volts.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub sensors: SensorSpecs,
    #[serde(default)]
    pub rom: RomSpec,
    #[serde(default)]
    pub garment: GarmentStage,
    #[serde(default)]
    pub accel: AccelParams,
    #[serde(default = "AliasMap::reference")]
    pub aliases: AliasMap,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            sensors: SensorSpecs::default(),
            rom: RomSpec::default(),
            garment: GarmentStage::default(),
            accel: AccelParams::default(),
            aliases: AliasMap::reference(),
        }
    }
}

impl Defaults {
    pub fn from_toml(text: &str) -> Result<Self, DefaultsError> {
        let d: Self = toml::from_str(text).map_err(|e| DefaultsError::Invalid(e.to_string()))?;
        d.check()?;
        Ok(d)
    }

    pub fn from_file(path: &Path) -> Result<Self, DefaultsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| DefaultsError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    /// The file named by `STITCHSIM_DEFAULTS`, or the built-in settings.
    pub fn load() -> Result<Self, DefaultsError> {
        match std::env::var_os(DEFAULTS_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn check(&self) -> Result<(), DefaultsError> {
        let bad = |m: String| Err(DefaultsError::Invalid(m));
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return bad(format!("threshold {} must be positive", self.threshold));
        }
        self.sensors.check(&self.rom).map_err(|e| DefaultsError::Invalid(e.to_string()))?;
        let g = self.garment;
        if !(g.sensor_transfer > 0.0 && g.sensor_transfer <= 1.0 && g.led_load > 0.0 && g.led_load <= 1.0) {
            return bad("garment ratios must lie in (0, 1]".into());
        }
        if !(self.accel.min_prominence > 0.0 && self.accel.min_prominence.is_finite()) {
            return bad("accel.min_prominence must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_file_matches_builtin() {
        assert_eq!(Defaults::from_toml(DEFAULTS_TOML).unwrap(), Defaults::default());
    }

    #[test]
    fn partial_override() {
        let d = Defaults::from_toml("threshold = 2.5\n[garment]\nsensor_transfer = 1.0\nled_load = 1.0\n").unwrap();
        assert_eq!(d.threshold, 2.5);
        assert_eq!(d.garment, GarmentStage::IDEAL);
        assert_eq!(d.sensors, SensorSpecs::default());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Defaults::from_toml("threshold = -1.0").is_err());
        assert!(Defaults::from_toml("[sensors]\nex_wrist = { theta_on = 70.0 }").is_err());
        assert!(Defaults::from_toml("colour = 1").is_err());
    }
}
