//! Strict JSON experiment configs.
//!
//! ```json
//! {
//!   "experiment": "ztrace",
//!   "seed": 1985,
//!   "output_dir": "figure1",
//!   "workers": 4,
//!   "params": { ... }
//! }
//! ```
//!
//! `output_dir` and `workers` are optional; every physics parameter under
//! `params` is required. Unknown keys are rejected at every level.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use einselect::envselect::{EnvAtom, EnvironmentSpec};
use einselect::numerics::{linspace, step_grid};
use einselect::qcore::C64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Relative `output_dir`s are resolved against this directory when set.
pub const OUTPUT_ROOT_ENV: &str = "EINSELECT_OUTPUT_ROOT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Ztrace,
    Zstats,
    Collapse,
    InfoTimeseries,
    Redundancy,
    Recurrence,
    EnsembleDemo,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Ztrace,
        ExperimentKind::Zstats,
        ExperimentKind::Collapse,
        ExperimentKind::InfoTimeseries,
        ExperimentKind::Redundancy,
        ExperimentKind::Recurrence,
        ExperimentKind::EnsembleDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Ztrace => "ztrace",
            ExperimentKind::Zstats => "zstats",
            ExperimentKind::Collapse => "collapse",
            ExperimentKind::InfoTimeseries => "info_timeseries",
            ExperimentKind::Redundancy => "redundancy",
            ExperimentKind::Recurrence => "recurrence",
            ExperimentKind::EnsembleDemo => "ensemble_demo",
        }
    }
}

/// A complex amplitude: a bare number or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    pub fn value(self) -> C64 {
        match self {
            Amplitude::Real(re) => C64::new(re, 0.0),
            Amplitude::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingCfg {
    /// `n_atoms` couplings drawn from the open interval `(low, high)`.
    Uniform { n_atoms: usize, low: f64, high: f64 },
    List(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomAmplitudes {
    pub alpha: Amplitude,
    pub beta: Amplitude,
}

/// Initial environment-atom states, as `γ = |α|² − |β|²` with real
/// amplitudes or as explicit `(α, β)` on `|⊥)`, `|⊤)`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AtomStateCfg {
    Gamma(f64),
    Gammas(Vec<f64>),
    Amplitudes(Vec<AtomAmplitudes>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentCfg {
    pub couplings: CouplingCfg,
    pub state: AtomStateCfg,
}

impl EnvironmentCfg {
    pub fn n_atoms(&self) -> usize {
        match &self.couplings {
            CouplingCfg::Uniform { n_atoms, .. } => *n_atoms,
            CouplingCfg::List(g) => g.len(),
        }
    }

    fn validate(&self, key: &str) -> CliResult<()> {
        let n = self.n_atoms();
        if n == 0 {
            return Err(CliError::config(&format!("{key}.couplings"), "need at least one atom"));
        }
        if let CouplingCfg::Uniform { low, high, .. } = self.couplings {
            if !(low >= 0.0 && high > low && high.is_finite()) {
                return Err(CliError::config(
                    &format!("{key}.couplings.uniform"),
                    format!("need 0 ≤ low < high, got low = {low}, high = {high}"),
                ));
            }
        }
        let listed = match &self.state {
            AtomStateCfg::Gamma(_) => None,
            AtomStateCfg::Gammas(v) => Some(v.len()),
            AtomStateCfg::Amplitudes(v) => Some(v.len()),
        };
        if let Some(m) = listed.filter(|&m| m != n) {
            return Err(CliError::config(
                &format!("{key}.state"),
                format!("{m} atom states for {n} couplings"),
            ));
        }
        Ok(())
    }

    /// Draws the couplings (when random) from `rng` and builds the atoms.
    pub fn build<R: Rng>(&self, key: &str, rng: &mut R) -> CliResult<EnvironmentSpec> {
        self.validate(key)?;
        let n = self.n_atoms();
        let couplings: Vec<f64> = match &self.couplings {
            CouplingCfg::Uniform { low, high, .. } => (0..n)
                .map(|_| low + (high - low) * rng.sample::<f64, _>(rand::distributions::Open01))
                .collect(),
            CouplingCfg::List(g) => g.clone(),
        };
        let atoms = couplings
            .iter()
            .enumerate()
            .map(|(k, &g)| match &self.state {
                AtomStateCfg::Gamma(p) => EnvAtom::with_polarization(g, *p),
                AtomStateCfg::Gammas(p) => EnvAtom::with_polarization(g, p[k]),
                AtomStateCfg::Amplitudes(v) => EnvAtom::new(g, v[k].alpha.value(), v[k].beta.value()),
            })
            .collect::<einselect::Result<Vec<_>>>()
            .map_err(|e| CliError::from_model(key, e))?;
        EnvironmentSpec::new(atoms).map_err(|e| CliError::from_model(key, e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridUnit {
    #[default]
    One,
    /// Multiples of `π`.
    Pi,
}

/// `start..=stop` with either a fixed `step` or `count` points.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCfg {
    pub start: f64,
    pub stop: f64,
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub unit: GridUnit,
}

impl GridCfg {
    pub fn points(&self, key: &str) -> CliResult<Vec<f64>> {
        let scale = match self.unit {
            GridUnit::One => 1.0,
            GridUnit::Pi => PI,
        };
        let (start, stop) = (self.start * scale, self.stop * scale);
        let grid = match (self.step, self.count) {
            (Some(step), None) => step_grid(start, stop, step * scale),
            (None, Some(count)) => linspace(start, stop, count),
            _ => return Err(CliError::config(key, "give exactly one of `step` or `count`")),
        };
        grid.map_err(|e| CliError::from_model(key, e))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZTraceParams {
    pub environment: EnvironmentCfg,
    pub grid: GridCfg,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZStatsParams {
    pub environment: EnvironmentCfg,
    /// Averaging window `T`; samples sit at `t_i = i·T/samples`.
    pub horizon: f64,
    pub samples: usize,
    /// Independent environment draws, one CSV row each.
    pub repeats: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollapseParams {
    pub a: Amplitude,
    pub b: Amplitude,
    pub environment: EnvironmentCfg,
    pub grid: GridCfg,
    /// Compare every row against exact diagonalization (N ≤ 8).
    #[serde(default)]
    pub oracle_check: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfoParams {
    pub a: Amplitude,
    pub b: Amplitude,
    pub g: f64,
    pub grid: GridCfg,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FlipsCfg {
    /// Exactly this many atoms flipped per record; counts above `N` are
    /// skipped for that `N`.
    Counts(Vec<usize>),
    /// Each atom flipped independently with this probability.
    Rate(f64),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RedundancyParams {
    pub n_atoms: Vec<usize>,
    pub flips: FlipsCfg,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceParams {
    pub environment: EnvironmentCfg,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleParams {
    /// Weight of `|↑⟩` in the first preparation, in `[1/2, 1]`.
    pub p_up: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Ztrace(ZTraceParams),
    Zstats(ZStatsParams),
    Collapse(CollapseParams),
    InfoTimeseries(InfoParams),
    Redundancy(RedundancyParams),
    Recurrence(RecurrenceParams),
    EnsembleDemo(EnsembleParams),
}

impl Experiment {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Experiment::Ztrace(_) => ExperimentKind::Ztrace,
            Experiment::Zstats(_) => ExperimentKind::Zstats,
            Experiment::Collapse(_) => ExperimentKind::Collapse,
            Experiment::InfoTimeseries(_) => ExperimentKind::InfoTimeseries,
            Experiment::Redundancy(_) => ExperimentKind::Redundancy,
            Experiment::Recurrence(_) => ExperimentKind::Recurrence,
            Experiment::EnsembleDemo(_) => ExperimentKind::EnsembleDemo,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: ExperimentKind,
    seed: u64,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    #[serde(default)]
    workers: Option<usize>,
    params: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub experiment: Experiment,
}

fn params<T: serde::de::DeserializeOwned>(value: Value) -> CliResult<T> {
    serde_json::from_value(value).map_err(|e| CliError::config("params", e))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if raw.workers == Some(0) {
            return Err(CliError::config("workers", "must be at least 1"));
        }
        let experiment = match raw.experiment {
            ExperimentKind::Ztrace => Experiment::Ztrace(params(raw.params)?),
            ExperimentKind::Zstats => Experiment::Zstats(params(raw.params)?),
            ExperimentKind::Collapse => Experiment::Collapse(params(raw.params)?),
            ExperimentKind::InfoTimeseries => Experiment::InfoTimeseries(params(raw.params)?),
            ExperimentKind::Redundancy => Experiment::Redundancy(params(raw.params)?),
            ExperimentKind::Recurrence => Experiment::Recurrence(params(raw.params)?),
            ExperimentKind::EnsembleDemo => Experiment::EnsembleDemo(params(raw.params)?),
        };
        Ok(ExperimentConfig {
            seed: raw.seed,
            output_dir: raw.output_dir,
            workers: raw.workers,
            experiment,
        })
    }

    pub fn kind(&self) -> ExperimentKind {
        self.experiment.kind()
    }

    /// `output_dir` (default `runs/<experiment>-<seed>`), placed under
    /// `$EINSELECT_OUTPUT_ROOT` when that is set and the path is relative.
    pub fn resolve_output_dir(&self) -> PathBuf {
        let dir = self
            .output_dir
            .clone()
            .unwrap_or_else(|| Path::new("runs").join(format!("{}-{}", self.kind().name(), self.seed)));
        match std::env::var_os(OUTPUT_ROOT_ENV) {
            Some(root) if dir.is_relative() && !root.is_empty() => PathBuf::from(root).join(dir),
            _ => dir,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZTRACE: &str = r#"{
        "experiment": "ztrace", "seed": 7,
        "params": {
            "environment": {"couplings": {"uniform": {"n_atoms": 3, "low": 0, "high": 1}}, "state": {"gamma": 0}},
            "grid": {"start": 0, "stop": 1, "step": 0.5}
        }
    }"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = ExperimentConfig::from_json(ZTRACE).unwrap();
        assert_eq!(cfg.kind(), ExperimentKind::Ztrace);
        assert_eq!(cfg.seed, 7);
        let Experiment::Ztrace(p) = cfg.experiment else { panic!() };
        assert_eq!(p.grid.points("grid").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(p.environment.n_atoms(), 3);
    }

    #[test]
    fn unknown_keys_are_named() {
        let top = ZTRACE.replace("\"seed\": 7", "\"seed\": 7, \"sede\": 1");
        let err = ExperimentConfig::from_json(&top).unwrap_err();
        assert!(err.to_string().contains("sede"), "{err}");
        assert_eq!(err.exit_code(), 2);
        let nested = ZTRACE.replace("\"step\": 0.5", "\"step\": 0.5, \"stpe\": 1");
        let err = ExperimentConfig::from_json(&nested).unwrap_err();
        assert!(err.to_string().contains("stpe"), "{err}");
    }

    #[test]
    fn missing_physics_parameter_is_rejected() {
        let missing = ZTRACE.replace(", \"state\": {\"gamma\": 0}", "");
        let err = ExperimentConfig::from_json(&missing).unwrap_err();
        assert!(err.to_string().contains("state"), "{err}");
    }

    #[test]
    fn grid_needs_one_spacing() {
        let both = GridCfg { start: 0.0, stop: 1.0, step: Some(0.1), count: Some(3), unit: GridUnit::One };
        assert!(both.points("grid").is_err());
        let pi = GridCfg { start: 0.0, stop: 0.25, step: None, count: Some(3), unit: GridUnit::Pi };
        assert_eq!(pi.points("grid").unwrap()[2], std::f64::consts::FRAC_PI_4);
    }

    #[test]
    fn environment_state_count_must_match() {
        let env = EnvironmentCfg {
            couplings: CouplingCfg::List(vec![0.1, 0.2]),
            state: AtomStateCfg::Gammas(vec![0.0]),
        };
        let mut rng = einselect::seed::substream(0, "test", 0);
        assert!(matches!(env.build("environment", &mut rng), Err(CliError::Config(_))));
        let bad = EnvironmentCfg {
            couplings: CouplingCfg::List(vec![0.1]),
            state: AtomStateCfg::Gamma(2.0),
        };
        assert!(matches!(bad.build("environment", &mut rng), Err(CliError::Config(_))));
    }

    #[test]
    fn zero_workers_rejected() {
        let cfg = ZTRACE.replace("\"seed\": 7", "\"seed\": 7, \"workers\": 0");
        assert!(ExperimentConfig::from_json(&cfg).is_err());
    }
}
