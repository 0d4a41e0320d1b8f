use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::defaults;
use crate::error::{LabError, LabResult};
use crate::registry;

/// One experiment run. Unset fields take the registry defaults; fields the
/// experiment does not read are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Always on; `false` is rejected.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deterministic: Option<bool>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_floor: Option<f64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement_depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_octave: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral_base_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral_refinement_depth: Option<u32>,

    /// Histogram depth.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    /// Deepest profile level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_range: Option<[u32; 2]>,
    /// Truncation orders N.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncations: Option<Vec<usize>>,
    /// Number of Fourier coefficients K.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial: Option<usize>,
    /// Window half-width `h = 2^-h_level`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_level: Option<u32>,
}

const ALWAYS_ALLOWED: [&str; 3] = ["experiment", "output_dir", "deterministic"];

fn set_keys(cfg: &ExperimentConfig) -> LabResult<Map<String, Value>> {
    match serde_json::to_value(cfg)? {
        Value::Object(m) => Ok(m),
        _ => unreachable!("config serializes to an object"),
    }
}

/// Reads a JSON or TOML config. The format follows the extension, and
/// falls back to sniffing for a leading `{`.
pub fn load_config(path: &Path) -> LabResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse_config(&text, path.extension().and_then(|e| e.to_str()))
}

pub fn parse_config(text: &str, extension: Option<&str>) -> LabResult<ExperimentConfig> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(LabError::Validation("config file is empty".into()));
    }
    let json = match extension {
        Some("json") => true,
        Some("toml") => false,
        _ => trimmed.starts_with('{'),
    };
    let cfg: ExperimentConfig = if json {
        serde_json::from_str(trimmed).map_err(|e| LabError::Validation(format!("bad JSON config: {e}")))?
    } else {
        toml::from_str(trimmed).map_err(|e| LabError::Validation(format!("bad TOML config: {e}")))?
    };
    if cfg.experiment.is_empty() {
        return Err(LabError::Validation("config does not name an experiment".into()));
    }
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        Self { experiment: experiment.into(), ..Default::default() }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from(defaults::OUTPUT_DIR))
    }

    /// Fills every unset field from the registry defaults and checks ranges.
    pub fn resolve(&self) -> LabResult<ExperimentConfig> {
        if registry::find(&self.experiment).is_none() {
            return Err(LabError::Usage(format!("unknown experiment `{}`; see `hardy-lab list`", self.experiment)));
        }
        let defaults = defaults::for_experiment(&self.experiment).expect("registry entries have defaults");
        if self.deterministic == Some(false) {
            return Err(LabError::Validation("determinism cannot be switched off".into()));
        }
        let mut merged = set_keys(&defaults)?;
        for (k, v) in set_keys(self)? {
            if !ALWAYS_ALLOWED.contains(&k.as_str()) && !merged.contains_key(&k) {
                return Err(LabError::Validation(format!("parameter `{k}` is not used by experiment `{}`", self.experiment)));
            }
            merged.insert(k, v);
        }
        let mut out: ExperimentConfig = serde_json::from_value(Value::Object(merged))?;
        out.output_dir = Some(self.output_dir());
        out.deterministic = Some(true);
        out.check_ranges()?;
        Ok(out)
    }

    fn check_ranges(&self) -> LabResult<()> {
        let bad = |msg: String| Err(LabError::Validation(msg));
        let positive = |name: &str, v: Option<f64>| -> LabResult<()> {
            match v {
                Some(x) if !(x > 0.0 && x.is_finite()) => bad(format!("`{name}` = {x} must be positive and finite")),
                _ => Ok(()),
            }
        };
        positive("beta", self.beta)?;
        positive("theta", self.theta)?;
        positive("r", self.r)?;
        positive("epsilon", self.epsilon)?;
        positive("alpha_floor", self.alpha_floor)?;
        for &b in self.beta_grid.iter().flatten() {
            positive("beta_grid", Some(b))?;
        }
        for &p in self.p_grid.iter().flatten() {
            positive("p_grid", Some(p))?;
        }
        if matches!(self.p_grid.as_deref(), Some([])) || matches!(self.beta_grid.as_deref(), Some([])) {
            return bad("grids must not be empty".into());
        }
        if let Some(q) = self.q {
            if !q.is_finite() {
                return bad(format!("`q` = {q} must be finite"));
            }
        }
        if let Some(r) = self.r {
            if r >= 1.0 {
                return bad(format!("`r` = {r} must be below 1"));
            }
        }
        for (name, v) in [("base_count", self.base_count), ("spectral_base_count", self.spectral_base_count)] {
            if let Some(b) = v {
                if b < 4 || !b.is_power_of_two() {
                    return bad(format!("`{name}` = {b} must be a power of two >= 4"));
                }
            }
        }
        if self.per_octave == Some(0) {
            return bad("`per_octave` must be positive".into());
        }
        if let Some([lo, hi]) = self.fit_range {
            if lo == 0 || hi < lo + 3 {
                return bad(format!("`fit_range` [{lo}, {hi}] needs 1 <= lo and at least four levels"));
            }
        }
        if let Some(ns) = &self.truncations {
            if ns.is_empty() || ns.contains(&0) || ns.windows(2).any(|w| w[0] >= w[1]) {
                return bad("`truncations` must be positive and increasing".into());
            }
        }
        if self.k_max == Some(0) || self.radial == Some(0) || self.depth == Some(0) || self.n_max == Some(0) {
            return bad("`k_max`, `radial`, `depth` and `n_max` must be positive".into());
        }
        if let Some(h) = self.h_level {
            if h < 4 {
                return bad(format!("`h_level` = {h} must be at least 4 (h <= 1/16)"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_validation_error() {
        assert!(matches!(parse_config("  \n", Some("toml")), Err(LabError::Validation(_))));
        assert!(matches!(parse_config("", None), Err(LabError::Validation(_))));
    }

    #[test]
    fn json_and_toml_agree() {
        let a = parse_config(r#"{"experiment": "same-modulus", "beta": 2.5}"#, None).unwrap();
        let b = parse_config("experiment = \"same-modulus\"\nbeta = 2.5\n", Some("toml")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(parse_config(r#"{"experiment": "same-modulus", "bta": 2}"#, None).is_err());
    }

    #[test]
    fn resolve_fills_defaults() {
        let c = ExperimentConfig::new("same-modulus").resolve().unwrap();
        assert_eq!(c.beta, Some(2.0));
        assert_eq!(c.fit_range, Some([8, 16]));
        assert_eq!(c.deterministic, Some(true));
    }

    #[test]
    fn resolve_errors() {
        assert!(matches!(ExperimentConfig::new("nope").resolve(), Err(LabError::Usage(_))));
        let c = ExperimentConfig { theta: Some(2.0), ..ExperimentConfig::new("same-modulus") };
        assert!(matches!(c.resolve(), Err(LabError::Validation(_))));
        let c = ExperimentConfig { beta: Some(-1.0), ..ExperimentConfig::new("same-modulus") };
        assert!(matches!(c.resolve(), Err(LabError::Validation(_))));
        let c = ExperimentConfig { base_count: Some(1000), ..ExperimentConfig::new("same-modulus") };
        assert!(matches!(c.resolve(), Err(LabError::Validation(_))));
    }
}
