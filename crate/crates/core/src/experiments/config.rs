use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::data::DataSpec;
use crate::diagnostics::WeightChoice;
use crate::spectral::Grid;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Scenario {
    Conservation,
    Persistence,
    DecayRegularity,
    Lipschitz,
    SmoothingProbe,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Conservation => "conservation",
            Scenario::Persistence => "persistence",
            Scenario::DecayRegularity => "decay_regularity",
            Scenario::Lipschitz => "lipschitz",
            Scenario::SmoothingProbe => "smoothing_probe",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Etdrk4,
    Picard,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// `L / π`.
    #[serde(default = "default_half_width_pi")]
    pub half_width_pi: f64,
    /// Number of points; defaults to 1024 for `k = 1` and 2048 for `k = 2`.
    #[serde(default)]
    pub n: Option<usize>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { half_width_pi: default_half_width_pi(), n: None }
    }
}

fn default_half_width_pi() -> f64 {
    32.0
}

/// One scenario run. Every field except `scenario` has a default; the
/// resolved values are echoed into `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub data: DataSpec,
    #[serde(default = "default_k")]
    pub k: u32,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default = "default_solver")]
    pub solver: SolverKind,
    /// ETDRK4 step.
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Snapshots are kept every `save_every` ETDRK4 steps.
    #[serde(default = "default_save_every")]
    pub save_every: usize,
    /// Picard time intervals; also the time resolution of the smoothing probe.
    #[serde(default = "default_nt")]
    pub nt: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_r")]
    pub r: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Truncation `N` of the weight; `None` uses `w_N` with `3N ≈ 0.8·L`.
    #[serde(default)]
    pub n_weight: Option<u32>,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_nonlinear")]
    pub nonlinear: bool,
    /// Perturbation sizes for `lipschitz`.
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    /// Family size for `smoothing_probe`.
    #[serde(default = "default_draws")]
    pub draws: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Calibration file; the committed one is used when absent.
    #[serde(default)]
    pub calibration: Option<PathBuf>,
}

fn default_k() -> u32 {
    1
}
fn default_t_final() -> f64 {
    1.0
}
fn default_solver() -> SolverKind {
    SolverKind::Etdrk4
}
fn default_dt() -> f64 {
    0.01
}
fn default_save_every() -> usize {
    5
}
fn default_nt() -> usize {
    64
}
fn default_tol() -> f64 {
    1e-10
}
fn default_max_iter() -> usize {
    60
}
fn default_r() -> f64 {
    0.5
}
fn default_alpha() -> f64 {
    0.125
}
fn default_rho() -> f64 {
    1.0
}
fn default_nonlinear() -> bool {
    true
}
fn default_epsilons() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4]
}
fn default_draws() -> usize {
    100
}

impl ScenarioConfig {
    /// Defaults for `scenario`, not validated (`decay_regularity` still
    /// needs `k = 2`).
    pub fn new(scenario: Scenario) -> Self {
        parse_toml(&format!("scenario = \"{}\"", scenario.name())).expect("defaults deserialize")
    }

    pub fn half_width(&self) -> f64 {
        self.grid.half_width_pi * std::f64::consts::PI
    }

    pub fn points(&self) -> usize {
        self.grid.n.unwrap_or(if self.k == 2 { 2048 } else { 1024 })
    }

    pub fn build_grid(&self) -> Result<Grid> {
        Grid::new(self.half_width(), self.points())
    }

    pub fn weight(&self) -> WeightChoice {
        match self.n_weight {
            Some(n) => WeightChoice::Truncated(n),
            None => WeightChoice::Smooth,
        }
    }

    /// Checks every parameter against the preconditions of the modules it feeds.
    pub fn validate(&self) -> Result<()> {
        fn bad<T>(message: String) -> Result<T> {
            Err(Error::Parse { line: None, message })
        }
        if !(self.grid.half_width_pi > 0.0 && self.grid.half_width_pi.is_finite()) {
            return bad(format!("grid.half_width_pi must be positive, got {}", self.grid.half_width_pi));
        }
        let n = self.points();
        if n < 8 || n % 2 != 0 {
            return bad(format!("grid.n must be even and at least 8, got {n}"));
        }
        if !(self.k == 1 || self.k == 2) {
            return bad(format!("k must be 1 or 2, got {}", self.k));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad(format!("t_final must be positive, got {}", self.t_final));
        }
        if !(self.dt > 0.0) || self.dt > self.t_final {
            return bad(format!("dt must lie in (0, t_final], got {}", self.dt));
        }
        let steps = (self.t_final / self.dt).round();
        if ((steps * self.dt - self.t_final) / self.t_final).abs() > 1e-9 {
            return bad(format!("t_final = {} is not a multiple of dt = {}", self.t_final, self.dt));
        }
        if self.save_every == 0 || steps as usize % self.save_every != 0 {
            return bad(format!("save_every = {} must divide the {} steps", self.save_every, steps));
        }
        if self.nt < 2 {
            return bad(format!("nt must be at least 2, got {}", self.nt));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return bad("tol must be positive and max_iter at least 1".into());
        }
        if !(self.r >= 0.0 && self.r < 2.0) {
            return bad(format!("r must lie in [0, 2), got {}", self.r));
        }
        if !(self.alpha > 0.0 && self.alpha <= 0.125) {
            return bad(format!("alpha must lie in (0, 1/8], got {}", self.alpha));
        }
        if self.n_weight == Some(0) {
            return bad("n_weight must be positive".into());
        }
        if !(self.rho > 0.75) {
            return bad(format!("rho must exceed 3/4, got {}", self.rho));
        }
        if self.epsilons.is_empty() || self.epsilons.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return bad("epsilons must be a non-empty list of non-negative numbers".into());
        }
        if self.draws == 0 {
            return bad("draws must be at least 1".into());
        }
        if self.scenario == Scenario::DecayRegularity && self.k != 2 {
            return bad("decay_regularity requires k = 2".into());
        }
        let grid = self.build_grid().or_else(|e| bad(e.to_string()))?;
        if self.r > 0.0 || self.scenario == Scenario::DecayRegularity {
            self.weight().family(&grid).or_else(|e| bad(format!("weight does not fit the grid: {e}")))?;
        }
        Ok(())
    }
}

/// A batch of scenario configs run in parallel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Each run writes into `out/<config file stem>/`.
    pub out: PathBuf,
    /// Paths relative to the sweep file.
    pub configs: Vec<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[serde(default)]
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateConfig {
    /// Where the calibration JSON is written.
    #[serde(default = "default_calibration_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_draws")]
    pub draws: usize,
}

fn default_calibration_output() -> PathBuf {
    PathBuf::from("calibration.json")
}

impl Default for CalibrateConfig {
    fn default() -> Self {
        Self { output: default_calibration_output(), seed: 0, draws: default_draws() }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn parse_toml<T: DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().to_string(),
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

pub fn parse_config_str(text: &str) -> Result<ScenarioConfig> {
    let cfg: ScenarioConfig = parse_toml(text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<ScenarioConfig> {
    parse_config_str(&read(path)?)
}

pub fn parse_sweep(path: &Path) -> Result<SweepConfig> {
    let mut sweep: SweepConfig = parse_toml(&read(path)?)?;
    let base = path.parent().unwrap_or(Path::new(""));
    for c in &mut sweep.configs {
        if c.is_relative() {
            *c = base.join(&*c);
        }
    }
    if sweep.out.is_relative() {
        sweep.out = base.join(&sweep.out);
    }
    Ok(sweep)
}

pub fn parse_calibrate(path: &Path) -> Result<CalibrateConfig> {
    let cfg: CalibrateConfig = parse_toml(&read(path)?)?;
    if cfg.draws == 0 {
        return Err(Error::Parse { line: None, message: "draws must be at least 1".into() });
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config_str("scenario = \"conservation\"\n").unwrap();
        assert_eq!(cfg.k, 1);
        assert_eq!(cfg.points(), 1024);
        assert_eq!(cfg.data, DataSpec::default());
        assert_eq!(cfg.epsilons, vec![1e-2, 1e-3, 1e-4]);
        assert_eq!(cfg, ScenarioConfig::new(Scenario::Conservation));
    }

    #[test]
    fn unknown_key_is_named_with_line() {
        let err = parse_config_str("scenario = \"conservation\"\nk = 2\nfoo = 3\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, Some(3));
                assert!(message.contains("foo"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_nested_key() {
        let err = parse_config_str("scenario = \"lipschitz\"\n[data]\nfamily = \"gaussian\"\nsigma = 2\n").unwrap_err();
        assert!(err.to_string().contains("sigma"), "{err}");
    }

    #[test]
    fn missing_scenario() {
        let err = parse_config_str("k = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(err.to_string().contains("scenario"), "{err}");
    }

    #[test]
    fn range_checks() {
        for bad in [
            "scenario = \"conservation\"\nk = 3",
            "scenario = \"conservation\"\nt_final = 1.0\ndt = 0.3",
            "scenario = \"decay_regularity\"\nk = 1",
            "scenario = \"decay_regularity\"\nk = 2\nalpha = 0.2",
            "scenario = \"conservation\"\nrho = 0.5",
            "scenario = \"conservation\"\n[grid]\nn = 1001",
            "scenario = \"conservation\"\n[grid]\nhalf_width_pi = 1.0",
        ] {
            assert!(matches!(parse_config_str(bad), Err(Error::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn data_families() {
        let cfg = parse_config_str("scenario = \"conservation\"\n[data]\nfamily = \"sech2\"\namplitude = 0.5\n").unwrap();
        assert!(matches!(cfg.data, DataSpec::Sech2 { amplitude, .. } if amplitude == 0.5));
    }
}
