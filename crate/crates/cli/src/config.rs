//! Run configuration, read from TOML.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;
use vines_core::{AbsorberSize, BeamSpec, ForceLevel, SetupSpec};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("`{field}`: {reason}")]
    Field { field: &'static str, reason: String },
}

fn field(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, reason: reason.into() }
}

/// Beam data: a named profile or explicit values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BeamConfig {
    Profile(String),
    Custom(BeamValues),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamValues {
    pub length: f64,
    pub height: f64,
    pub width: f64,
    pub density: f64,
    pub youngs_modulus: f64,
    pub poisson: f64,
    pub fatigue_bending_strength: f64,
}

impl From<BeamSpec> for BeamValues {
    fn from(b: BeamSpec) -> Self {
        Self {
            length: b.length,
            height: b.height,
            width: b.width,
            density: b.density,
            youngs_modulus: b.youngs_modulus,
            poisson: b.poisson,
            fatigue_bending_strength: b.fatigue_bending_strength,
        }
    }
}

impl From<BeamValues> for BeamSpec {
    fn from(b: BeamValues) -> Self {
        Self {
            length: b.length,
            height: b.height,
            width: b.width,
            density: b.density,
            youngs_modulus: b.youngs_modulus,
            poisson: b.poisson,
            fatigue_bending_strength: b.fatigue_bending_strength,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsorberConfig {
    /// Absorber mass over beam mass.
    pub mass_ratio: Option<f64>,
    /// Sphere radius, m.
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForcingConfig {
    /// Force location over beam length.
    pub location_fraction: f64,
    /// Size the force so the resonant stress without absorber reaches the fatigue strength.
    pub fatigue: bool,
    /// N, used when `fatigue = false`.
    pub amplitude: Option<f64>,
}

impl Default for ForcingConfig {
    fn default() -> Self {
        Self { location_fraction: 1.0 / 3.0, fatigue: true, amplitude: None }
    }
}

/// Normalized clearances `g / (phi_c a_no)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClearanceConfig {
    /// Explicit list; takes precedence over the range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Grid start for the automatic range.
    #[serde(default = "ClearanceConfig::default_start")]
    pub start: f64,
    /// The automatic range ends at this multiple of the predicted optimum.
    #[serde(default = "ClearanceConfig::default_stop_factor")]
    pub stop_factor: f64,
    #[serde(default = "ClearanceConfig::default_step")]
    pub step: f64,
}

impl ClearanceConfig {
    fn default_start() -> f64 {
        0.3
    }
    fn default_stop_factor() -> f64 {
        1.4
    }
    fn default_step() -> f64 {
        0.05
    }

    /// Explicit values, or the grid `start, start + step, ...` up to
    /// `stop_factor * optimum`.
    pub fn resolve(&self, optimum: f64) -> Vec<f64> {
        if let Some(v) = &self.values {
            return v.clone();
        }
        let stop = self.stop_factor * optimum;
        let n = ((stop - self.start) / self.step + 1e-9).floor().max(0.0) as usize;
        (0..=n).map(|i| self.start + self.step * i as f64).collect()
    }
}

impl Default for ClearanceConfig {
    fn default() -> Self {
        Self {
            values: None,
            start: Self::default_start(),
            stop_factor: Self::default_stop_factor(),
            step: Self::default_step(),
        }
    }
}

/// Stepped-sine protocol of the reference simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub eta_min: f64,
    pub eta_max: f64,
    pub steps: usize,
    pub periods_per_batch: usize,
    pub tolerance: f64,
    pub max_periods: usize,
    pub points_per_mode_period: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            eta_min: 0.9,
            eta_max: 1.07,
            steps: 20,
            periods_per_batch: 100,
            tolerance: 0.01,
            max_periods: 1000,
            points_per_mode_period: 15.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "RunConfig::default_beam")]
    pub beam: BeamConfig,
    #[serde(default = "RunConfig::default_modes")]
    pub modes: usize,
    /// Modal damping ratio of every mode.
    pub damping: f64,
    pub absorber: AbsorberConfig,
    #[serde(default)]
    pub forcing: ForcingConfig,
    #[serde(default)]
    pub clearances: ClearanceConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default = "RunConfig::default_output")]
    pub output: PathBuf,
}

/// Written next to every run's results; loadable with `--config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub toolkit_version: String,
    pub command: String,
    pub config: RunConfig,
}

impl RunConfig {
    fn default_beam() -> BeamConfig {
        BeamConfig::Profile("table1".into())
    }
    fn default_modes() -> usize {
        12
    }
    fn default_output() -> PathBuf {
        PathBuf::from("out")
    }

    /// Benchmark setup with mass ratio `lambda` and damping `d`.
    pub fn benchmark(lambda: f64, d: f64) -> Self {
        Self {
            beam: Self::default_beam(),
            modes: 12,
            damping: d,
            absorber: AbsorberConfig { mass_ratio: Some(lambda), radius: None },
            forcing: ForcingConfig::default(),
            clearances: ClearanceConfig::default(),
            sweep: SweepConfig::default(),
            output: Self::default_output(),
        }
    }

    /// Reads a configuration or a manifest of an earlier run.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        Self::parse(&text).map_err(|message| ConfigError::Parse { path: path.into(), message })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| e.to_string())?;
        if table.contains_key("toolkit_version") {
            let manifest: Manifest = table.try_into().map_err(|e: toml::de::Error| e.to_string())?;
            Ok(manifest.config)
        } else {
            table.try_into().map_err(|e: toml::de::Error| e.to_string())
        }
    }

    pub fn beam_spec(&self) -> Result<BeamSpec, ConfigError> {
        match &self.beam {
            BeamConfig::Profile(name) if name == "table1" => Ok(BeamSpec::table1()),
            BeamConfig::Profile(name) => Err(field("beam", format!("unknown profile `{name}` (known: table1)"))),
            BeamConfig::Custom(values) => Ok((*values).into()),
        }
    }

    /// Checks the invariants and converts to the core setup description.
    pub fn setup_spec(&self) -> Result<SetupSpec, ConfigError> {
        let beam = self.beam_spec()?;
        if self.modes == 0 {
            return Err(field("modes", "at least one mode is required"));
        }
        if !(self.damping > 0.0 && self.damping < std::f64::consts::FRAC_1_SQRT_2) {
            return Err(field("damping", format!("must lie in (0, 1/sqrt 2), got {}", self.damping)));
        }
        let absorber = match (self.absorber.mass_ratio, self.absorber.radius) {
            (Some(l), None) if l > 0.0 => AbsorberSize::MassRatio(l),
            (None, Some(r)) if r > 0.0 => AbsorberSize::Radius(r),
            (Some(_), Some(_)) => return Err(field("absorber", "give exactly one of `mass_ratio` and `radius`")),
            (None, None) => return Err(field("absorber", "one of `mass_ratio` and `radius` is required")),
            _ => return Err(field("absorber", "value must be positive")),
        };
        let f = &self.forcing;
        if !(f.location_fraction > 0.0 && f.location_fraction <= 1.0) {
            return Err(field("forcing.location_fraction", format!("must lie in (0, 1], got {}", f.location_fraction)));
        }
        let force = match (f.fatigue, f.amplitude) {
            (true, None) => ForceLevel::Fatigue,
            (false, Some(a)) if a > 0.0 => ForceLevel::Amplitude(a),
            (true, Some(_)) => return Err(field("forcing.amplitude", "not allowed together with `fatigue = true`")),
            (false, _) => return Err(field("forcing.amplitude", "a positive amplitude is required when `fatigue = false`")),
        };
        let c = &self.clearances;
        if let Some(values) = &c.values {
            if values.is_empty() || values.iter().any(|&g| !(g > 0.0)) {
                return Err(field("clearances.values", "need positive values"));
            }
            if values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(field("clearances.values", "must be ascending"));
            }
        } else if !(c.start > 0.0 && c.step > 0.0 && c.stop_factor > 0.0) {
            return Err(field("clearances", "`start`, `step` and `stop_factor` must be positive"));
        }
        let s = &self.sweep;
        if !(s.eta_min > 0.0 && s.eta_max > s.eta_min) || s.steps == 0 {
            return Err(field("sweep", "need 0 < eta_min < eta_max and at least one step"));
        }
        Ok(SetupSpec { beam, modes: self.modes, damping: self.damping, absorber, force_fraction: f.location_fraction, force })
    }

    pub fn sim_config(&self) -> vines_core::reference::SimConfig {
        let s = &self.sweep;
        vines_core::reference::SimConfig {
            frequency_ratios: vines_core::reference::SimConfig::equidistant(s.eta_min, s.eta_max, s.steps),
            periods_per_batch: s.periods_per_batch,
            stabilization_tolerance: s.tolerance,
            points_per_mode_period: s.points_per_mode_period,
            max_periods: s.max_periods,
            ..vines_core::reference::SimConfig::benchmark()
        }
    }

    /// Copy with the beam spelled out, as recorded in manifests.
    pub fn resolved(&self) -> Result<Self, ConfigError> {
        Ok(Self { beam: BeamConfig::Custom(self.beam_spec()?.into()), ..self.clone() })
    }
}
