//! JSON experiment configuration.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::detectors::{DetectorId, GridSpec};
use crate::montecarlo::{Axis, Sweep};
use crate::signal::{Hypothesis, Scenario};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub n_values: Vec<usize>,
    pub repetitions: usize,
    /// GLRT search size for timing; independent of the Monte Carlo `grid`.
    #[serde(default = "default_bench_n_alpha")]
    pub n_alpha: usize,
}

fn default_bench_n_alpha() -> usize {
    60_000
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n_values: vec![48, 480, 4800],
            repetitions: 11,
            n_alpha: default_bench_n_alpha(),
        }
    }
}

/// Everything one CLI invocation needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub detector_ids: Vec<DetectorId>,
    pub grid: GridSpec,
    pub alpha_list: Vec<f64>,
    pub sweep: Sweep,
    pub trials: usize,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    /// Hypothesis used by `generate`.
    #[serde(default = "default_hypothesis")]
    pub hypothesis: Hypothesis,
    /// `generate` skips the noise term.
    #[serde(default)]
    pub noiseless: bool,
    /// Observation CSV read by `detect`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Alternative the LRT is calibrated for outside `Δ` sweeps; defaults to
    /// `scenario.delta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lrt_delta: Option<f64>,
    #[serde(default)]
    pub kappa2: f64,
    #[serde(default)]
    pub bench: BenchConfig,
}

fn default_hypothesis() -> Hypothesis {
    Hypothesis::H1
}

impl Default for ExperimentConfig {
    /// The PMU scenario with GLRT and GLMPU at `α ∈ {0.01, 0.05, 0.1}`,
    /// a `Δ` sweep over `±0.3 ω0` and `Δ = 0.242 ω0` for ROC/SNR runs.
    fn default() -> Self {
        let scenario = Scenario::pmu_default();
        let omega0 = 2.0 * PI * 60.0;
        ExperimentConfig {
            scenario: scenario.with_delta(0.242 * omega0),
            detector_ids: vec![DetectorId::Glrt, DetectorId::Glmpu],
            grid: GridSpec::new(2000),
            alpha_list: vec![0.01, 0.05, 0.1],
            sweep: Sweep {
                axis: Axis::Delta,
                values: (-6..=6).map(|k| k as f64 * 0.05 * omega0).collect(),
            },
            trials: 10_000,
            master_seed: 0,
            output_dir: PathBuf::from("out"),
            hypothesis: Hypothesis::H1,
            noiseless: false,
            input: None,
            lrt_delta: None,
            kappa2: 0.0,
            bench: BenchConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.grid.validate(&self.scenario)?;
        if self.detector_ids.is_empty() {
            return Err(Error::InvalidArgument("detector_ids is empty".into()));
        }
        if let Some(a) = self.alpha_list.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::InvalidAlpha(*a));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        if self
            .sweep
            .values
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
        {
            return Err(Error::InvalidArgument(
                "sweep values must be strictly increasing".into(),
            ));
        }
        if !(self.kappa2.is_finite() && self.kappa2 >= 0.0) {
            return Err(Error::InvalidArgument("kappa2 must be >= 0".into()));
        }
        if self.bench.n_alpha == 0 {
            return Err(Error::EmptyGrid);
        }
        if self.bench.repetitions < 5 {
            return Err(Error::InvalidArgument(
                "bench.repetitions must be >= 5".into(),
            ));
        }
        Ok(())
    }

    /// The LRT design alternative.
    pub fn lrt_delta(&self) -> f64 {
        self.lrt_delta.unwrap_or(self.scenario.delta)
    }

    /// Applies `key=value` overrides. Keys are dot-separated paths into the
    /// JSON document (`scenario.N`, `sweep.values`, `scenario.amplitudes.0.re`);
    /// values are parsed as JSON and fall back to plain strings.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self> {
        let mut doc = serde_json::to_value(self)?;
        for item in overrides {
            let item = item.as_ref();
            let (key, raw) = item.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("override `{item}` is not key=value"))
            })?;
            let value =
                serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            set_path(&mut doc, key, value)?;
        }
        Ok(serde_json::from_value(doc)?)
    }
}

fn set_path(doc: &mut Value, key: &str, value: Value) -> Result<()> {
    let missing = || Error::InvalidArgument(format!("override key `{key}` does not exist"));
    let mut parts = key.split('.').peekable();
    let mut node = doc;
    while let Some(part) = parts.next() {
        let last = parts.peek().is_none();
        node = match node {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                map.entry(part.to_string())
                    .or_insert(Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx: usize = part.parse().map_err(|_| missing())?;
                let slot = items.get_mut(idx).ok_or_else(missing)?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(missing()),
        };
    }
    Err(missing())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        let back = ExperimentConfig::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn overrides_apply() {
        let c = ExperimentConfig::default()
            .with_overrides(&[
                "scenario.N=4",
                "trials=500",
                "detector_ids=[\"LRT\"]",
                "scenario.amplitudes.0.im=0.5",
                "output_dir=elsewhere",
                "grid.lo=-10.0",
            ])
            .unwrap();
        assert_eq!(c.scenario.samples, 4);
        assert_eq!(c.trials, 500);
        assert_eq!(c.detector_ids, vec![DetectorId::Lrt]);
        assert_eq!(c.scenario.amplitudes[0].im, 0.5);
        assert_eq!(c.output_dir, PathBuf::from("elsewhere"));
        assert_eq!(c.grid.lo, Some(-10.0));
    }

    #[test]
    fn bad_overrides() {
        let c = ExperimentConfig::default();
        assert!(c.with_overrides(&["trials"]).is_err());
        assert!(c.with_overrides(&["trials=abc"]).is_err());
        assert!(c.with_overrides(&["scenario.amplitudes.9.re=1"]).is_err());
        assert!(c.with_overrides(&["no_such_field=1"]).is_err());
    }

    #[test]
    fn validation_catches_bad_alpha() {
        let mut c = ExperimentConfig::default();
        c.alpha_list.push(1.5);
        assert!(matches!(c.validate(), Err(Error::InvalidAlpha(_))));
    }
}
