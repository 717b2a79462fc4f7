use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gravity::{GravityScenario, ModelKind, G_NEWTON, HBAR};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub mass_kg: f64,
    pub distance_m: f64,
    pub trap_frequency_rad_s: f64,
    /// When false, `trap_frequency_rad_s` is read as Hz and multiplied by 2π.
    pub frequency_is_angular: bool,
    pub r0_m: Option<f64>,
    pub model: ModelKind,
    pub gravitational_constant: f64,
    pub hbar: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            mass_kg: 1e-7,
            distance_m: 3e-4,
            trap_frequency_rad_s: 1e5,
            frequency_is_angular: true,
            r0_m: Some(5e-4),
            model: ModelKind::Td,
            gravitational_constant: G_NEWTON,
            hbar: HBAR,
        }
    }
}

impl ScenarioConfig {
    pub fn to_scenario(&self) -> Result<GravityScenario> {
        let omega = if self.frequency_is_angular {
            self.trap_frequency_rad_s
        } else {
            2.0 * std::f64::consts::PI * self.trap_frequency_rad_s
        };
        let scn = GravityScenario {
            mass_kg: self.mass_kg,
            distance_m: self.distance_m,
            omega,
            r0_m: self.r0_m,
            model: self.model,
            g: self.gravitational_constant,
            hbar: self.hbar,
        };
        scn.validate()?;
        Ok(scn)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeGrid {
    /// First positive sample for log spacing; `t = 0` is always included.
    pub t_min_s: f64,
    pub t_max_s: f64,
    pub samples: usize,
    pub spacing: Spacing,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { t_min_s: 1e-2, t_max_s: 10.0, samples: 400, spacing: Spacing::Log }
    }
}

impl TimeGrid {
    /// Sample times in seconds, starting at 0.
    pub fn times(&self) -> Result<Vec<f64>> {
        if self.samples == 0 {
            return Err(Error::Config("time_grid.samples must be at least 1".into()));
        }
        if !(self.t_max_s > 0.0 && self.t_max_s.is_finite()) {
            return Err(Error::Config(format!("time_grid.t_max_s must be positive, got {}", self.t_max_s)));
        }
        if self.samples == 1 {
            return Ok(vec![self.t_max_s]);
        }
        Ok(match self.spacing {
            Spacing::Linear => linspace(0.0, self.t_max_s, self.samples),
            Spacing::Log => {
                if !(self.t_min_s > 0.0 && self.t_min_s < self.t_max_s) {
                    return Err(Error::Config(format!(
                        "time_grid.t_min_s must lie in (0, t_max_s), got {}",
                        self.t_min_s
                    )));
                }
                let mut t = vec![0.0];
                t.extend(logspace(self.t_min_s, self.t_max_s, self.samples - 1));
                t
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct R0Grid {
    pub min_m: f64,
    pub max_m: f64,
    pub samples: usize,
    pub spacing: Spacing,
}

impl Default for R0Grid {
    fn default() -> Self {
        Self { min_m: 3.6e-4, max_m: 1e-2, samples: 120, spacing: Spacing::Log }
    }
}

impl R0Grid {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.samples == 0 {
            return Err(Error::Config("r0_grid.samples must be at least 1".into()));
        }
        if !(self.min_m > 0.0 && self.max_m >= self.min_m && self.max_m.is_finite()) {
            return Err(Error::Config(format!(
                "r0_grid needs 0 < min_m <= max_m, got [{}, {}]",
                self.min_m, self.max_m
            )));
        }
        if self.samples == 1 {
            return Ok(vec![self.min_m]);
        }
        Ok(match self.spacing {
            Spacing::Linear => linspace(self.min_m, self.max_m, self.samples),
            Spacing::Log => logspace(self.min_m, self.max_m, self.samples),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig2Config {
    pub r0_list_m: Vec<f64>,
    pub bottom_times_s: Vec<f64>,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Self { r0_list_m: vec![3e-3, 5e-4, 3.7e-4], bottom_times_s: vec![0.8, 4.7, 10.0, 25.0, 50.0] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig3Config {
    pub times_s: Vec<f64>,
    pub band_center: f64,
    /// Half width of the measured band; 0 gives an empty band.
    pub band_halfwidth: f64,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Self { times_s: vec![13.0, 15.0], band_center: 0.10, band_halfwidth: 0.01 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub time_grid: TimeGrid,
    pub r0_grid: R0Grid,
    pub output: OutputConfig,
    /// Smallest detectable negativity.
    pub sensitivity: f64,
    pub fig2: Fig2Config,
    pub fig3: Fig3Config,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            time_grid: TimeGrid::default(),
            r0_grid: R0Grid::default(),
            output: OutputConfig::default(),
            sensitivity: 1e-2,
            fig2: Fig2Config::default(),
            fig3: Fig3Config::default(),
        }
    }
}

fn positive_list(name: &str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::Config(format!("{name} must not be empty")));
    }
    if let Some(x) = xs.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::Config(format!("{name} entries must be positive, got {x}")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.to_scenario()?;
        self.time_grid.times()?;
        self.r0_grid.values()?;
        if !(self.sensitivity > 0.0 && self.sensitivity.is_finite()) {
            return Err(Error::Config(format!("sensitivity must be positive, got {}", self.sensitivity)));
        }
        positive_list("fig2.r0_list_m", &self.fig2.r0_list_m)?;
        positive_list("fig2.bottom_times_s", &self.fig2.bottom_times_s)?;
        positive_list("fig3.times_s", &self.fig3.times_s)?;
        if !(self.fig3.band_halfwidth >= 0.0 && self.fig3.band_center.is_finite()) {
            return Err(Error::Config("fig3 band must have a finite centre and non-negative half width".into()));
        }
        Ok(())
    }

    pub fn scenario(&self) -> Result<GravityScenario> {
        self.scenario.to_scenario()
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// `n` points from `a` to `b` evenly spaced in `ln`; endpoints exact.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| match i {
            0 => a,
            i if i == n - 1 => b,
            _ => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        let t = c.time_grid.times().unwrap();
        assert_eq!(t.len(), 400);
        assert_eq!(t[0], 0.0);
        assert_eq!(*t.last().unwrap(), 10.0);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn parsing_and_rejection() {
        let c = ExperimentConfig::from_json(r#"{"scenario": {"model": "naive"}, "sensitivity": 0.02}"#).unwrap();
        assert_eq!(c.scenario.model, ModelKind::Naive);
        assert_eq!(c.sensitivity, 0.02);
        let e = ExperimentConfig::from_json("{\n  \"bogus\": 1\n}").unwrap_err();
        assert!(matches!(e, Error::Config(ref m) if m.contains("line 2")), "{e}");
        assert!(ExperimentConfig::from_json(r#"{"sensitivity": 0}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"scenario": {"mass_kg": -1}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"scenario": {"r0_m": null}}"#).is_err());
    }

    #[test]
    fn hz_switch() {
        let mut s = ScenarioConfig { frequency_is_angular: false, ..Default::default() };
        s.trap_frequency_rad_s = 1.0;
        assert!((s.to_scenario().unwrap().omega - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    }
}
