//! Named experiments over parameter grids, with CSV/SVG/JSON output.
//!
//! A scenario resolves a [`RawConfig`] into a [`ScenarioConfig`], evaluates
//! its grid points on a fixed-size worker pool (results are gathered by
//! index, so the worker count never changes an output byte), and returns
//! the rendered [`Artifacts`].

pub mod amplification;
pub mod blockade;
pub mod config;
pub mod lasing;
pub mod output;
pub mod validate;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::lasing::TrajectoryOptions;
use crate::morse::MorseParams;
use crate::optics::{DrivenMode, Hybrid, OpticalSpectrum, SingleMode};
use crate::rates::{BathConfig, DriveConfig};

pub use config::{RawConfig, SweepRange};
pub use output::{format_g, Artifacts, Cell, Heatmap, LinePlot, Series, Table};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{location}: {message}")]
    Config { location: String, message: String },
    #[error("unknown scenario '{0}'; expected one of: {names}", names = Scenario::NAMES.join(", "))]
    UnknownScenario(String),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ScenarioError {
    /// 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config { .. } | ScenarioError::UnknownScenario(_) => 2,
            ScenarioError::Io { .. } => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    BlockadeLaserSweep,
    BlockadeMap,
    ThermalSweep,
    LaserFreqAlt,
    Amplification,
    LasingMap,
    Validate,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::BlockadeLaserSweep,
        Scenario::BlockadeMap,
        Scenario::ThermalSweep,
        Scenario::LaserFreqAlt,
        Scenario::Amplification,
        Scenario::LasingMap,
        Scenario::Validate,
    ];

    pub const NAMES: [&'static str; 7] =
        ["blockade-laser-sweep", "blockade-map", "thermal-sweep", "laser-freq-alt", "amplification", "lasing-map", "validate"];

    pub fn name(self) -> &'static str {
        Self::NAMES[Self::ALL.iter().position(|s| *s == self).expect("listed")]
    }

    /// Scenario-specific replacements for [`config::BASE_DEFAULTS`].
    pub fn default_overrides(self) -> &'static str {
        match self {
            Scenario::BlockadeLaserSweep | Scenario::BlockadeMap | Scenario::ThermalSweep => "",
            Scenario::LaserFreqAlt => "[drive]\nomega_l = 495\n",
            Scenario::Amplification => {
                "[spectrum]\nkind = single\n[drive]\nomega_l = 570\n[morse]\ntruncation = 120\n\
                 [sweep]\npopulation = 0.05:1.5:30\nanharmonicities = 0.1, 0.2\n"
            }
            Scenario::LasingMap => {
                "[spectrum]\nkind = single\n[drive]\nomega_l = 570\n\
                 [sweep]\npopulation = 0.2:0.8:30\nanharmonicities = 0, 0.1, 0.2\n"
            }
            Scenario::Validate => "[sweep]\nanharmonicities = 0.1, 0.2, 2\n",
        }
    }

    /// Defaults for this scenario as a [`RawConfig`].
    pub fn defaults(self) -> RawConfig {
        RawConfig::defaults(self.default_overrides())
    }
}

impl FromStr for Scenario {
    type Err = ScenarioError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::NAMES
            .iter()
            .position(|n| *n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| ScenarioError::UnknownScenario(s.to_string()))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweeps {
    pub omega_l: SweepRange,
    pub delta_omega_b: SweepRange,
    pub population: SweepRange,
    pub n_th: Vec<f64>,
    pub anharmonicities: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySettings {
    pub options: TrajectoryOptions,
    pub onset_lo: f64,
    pub onset_hi: f64,
    pub onset_tolerance: f64,
}

/// Validated scenario parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub omega_b: f64,
    pub delta_omega_b: f64,
    pub truncation: usize,
    pub spectrum: OpticalSpectrum,
    pub drive: DriveConfig,
    pub bath: BathConfig,
    pub sweeps: Sweeps,
    pub trajectory: TrajectorySettings,
    raw: RawConfig,
}

impl ScenarioConfig {
    pub fn from_raw(scenario: Scenario, raw: RawConfig) -> Result<Self, ScenarioError> {
        let omega_b = raw.positive("morse.omega_b", false)?;
        let delta_omega_b = raw.positive("morse.delta_omega_b", true)?;
        MorseParams::new(omega_b, delta_omega_b).map_err(|e| raw.invalid("morse.delta_omega_b", e.to_string()))?;
        let truncation = raw.usize("morse.truncation")?;
        if truncation < 2 {
            return Err(raw.invalid("morse.truncation", "need at least 2 levels"));
        }

        let omega_1 = raw.positive("spectrum.omega_1", false)?;
        let kappa_1 = raw.positive("spectrum.kappa_1", false)?;
        let spectrum = match raw.choice("spectrum.kind", &["hybrid", "single"])? {
            "single" => OpticalSpectrum::Single(SingleMode::new(omega_1, kappa_1)),
            _ => {
                let driven = match raw.choice("spectrum.driven", &["broad", "narrow"])? {
                    "narrow" => DrivenMode::Narrow,
                    _ => DrivenMode::Broad,
                };
                let h = Hybrid::new(
                    omega_1,
                    raw.positive("spectrum.omega_2", false)?,
                    kappa_1,
                    raw.positive("spectrum.kappa_2", false)?,
                    raw.positive("spectrum.coupling", true)?,
                );
                OpticalSpectrum::Hybrid(h.with_driven(driven))
            }
        };

        let drive = DriveConfig::from_population(
            raw.positive("drive.omega_l", false)?,
            raw.positive("drive.population", true)?,
            raw.positive("drive.g0", true)?,
        );
        let bath = BathConfig::new(raw.positive("bath.gamma", true)?, raw.positive("bath.n_th", true)?);

        let sweeps = Sweeps {
            omega_l: raw.range("sweep.omega_l")?,
            delta_omega_b: raw.range("sweep.delta_omega_b")?,
            population: raw.range("sweep.population")?,
            n_th: raw.list("sweep.n_th")?,
            anharmonicities: raw.list("sweep.anharmonicities")?,
        };
        if sweeps.population.min < 0.0 {
            return Err(raw.invalid("sweep.population", "cavity populations must be non-negative"));
        }
        if sweeps.delta_omega_b.min < 0.0 || sweeps.delta_omega_b.max >= omega_b {
            return Err(raw.invalid("sweep.delta_omega_b", "anharmonicities must lie in [0, omega_b)"));
        }
        if sweeps.anharmonicities.iter().any(|d| *d >= omega_b) {
            return Err(raw.invalid("sweep.anharmonicities", "anharmonicities must lie in [0, omega_b)"));
        }

        let steps = raw.usize("trajectory.steps_per_period")?;
        let dtau = std::f64::consts::TAU / steps.max(1) as f64;
        if dtau > crate::lasing::trajectory::MAX_DTAU {
            return Err(raw.invalid("trajectory.steps_per_period", format!("step 2π/{steps} exceeds the stability limit")));
        }
        let window_periods = raw.usize("trajectory.window_periods")?;
        if (window_periods as f64) < crate::lasing::trajectory::MIN_WINDOW_PERIODS {
            return Err(raw.invalid("trajectory.window_periods", "windows need at least 50 periods"));
        }
        let max_periods = raw.usize("trajectory.max_periods")?;
        if max_periods < 2 * window_periods {
            return Err(raw.invalid("trajectory.max_periods", "must cover at least two windows"));
        }
        let options = TrajectoryOptions {
            dtau,
            window_periods,
            tolerance: raw.positive("trajectory.tolerance", false)?,
            min_periods: raw.usize("trajectory.min_periods")?,
            max_periods,
            sample_stride: 0,
            ..TrajectoryOptions::default()
        };
        let onset_lo = raw.positive("trajectory.onset_lo", true)?;
        let onset_hi = raw.positive("trajectory.onset_hi", false)?;
        if onset_lo >= onset_hi {
            return Err(raw.invalid("trajectory.onset_hi", "must exceed trajectory.onset_lo"));
        }
        let trajectory = TrajectorySettings {
            options,
            onset_lo,
            onset_hi,
            onset_tolerance: raw.positive("trajectory.onset_tolerance", false)?,
        };

        Ok(Self { scenario, omega_b, delta_omega_b, truncation, spectrum, drive, bath, sweeps, trajectory, raw })
    }

    /// Defaults for `scenario` with optional file text and overrides.
    pub fn resolve(
        scenario: Scenario,
        file: Option<(&str, &str)>,
        overrides: &[String],
    ) -> Result<Self, ScenarioError> {
        let mut raw = scenario.defaults();
        if let Some((text, path)) = file {
            raw.apply_file(text, path)?;
        }
        for arg in overrides {
            raw.apply_override(arg)?;
        }
        Self::from_raw(scenario, raw)
    }

    pub fn morse(&self) -> MorseParams {
        MorseParams::new(self.omega_b, self.delta_omega_b).expect("validated")
    }

    /// Cavity frequency and linewidth driving the classical trajectories.
    pub fn cavity(&self) -> (f64, f64) {
        match self.spectrum {
            OpticalSpectrum::Single(s) => (s.omega_1, s.kappa_1),
            OpticalSpectrum::Hybrid(h) => (h.omega_1, h.kappa_1),
        }
    }

    pub fn echo(&self) -> Value {
        json!(self.raw.echo())
    }
}

/// Status of one grid point: `"ok"` or an error message.
#[derive(Debug, Clone, PartialEq)]
pub struct PointStatus(Option<String>);

impl PointStatus {
    pub const OK: PointStatus = PointStatus(None);

    pub fn failed(msg: impl fmt::Display) -> Self {
        PointStatus(Some(msg.to_string()))
    }

    pub fn is_ok(&self) -> bool {
        self.0.is_none()
    }

    pub fn label(&self) -> String {
        match &self.0 {
            None => "ok".into(),
            Some(e) => format!("error: {e}"),
        }
    }
}

/// Rendered output of a scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub artifacts: Artifacts,
    pub total_points: usize,
    pub failed_points: usize,
    /// Human-readable report for the terminal.
    pub report: String,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed_points > 0)
    }
}

/// Collects per-point statuses while a scenario assembles its outputs.
#[derive(Debug, Default)]
struct StatusLog {
    statuses: Vec<String>,
    failed: usize,
}

impl StatusLog {
    fn record(&mut self, status: &PointStatus) -> Cell {
        if !status.is_ok() {
            self.failed += 1;
        }
        let label = status.label();
        self.statuses.push(label.clone());
        Cell::Text(label)
    }
}

fn finish(config: &ScenarioConfig, mut artifacts: Artifacts, log: StatusLog, derived: Value, report: String) -> RunOutcome {
    let summary = json!({
        "scenario": config.scenario.name(),
        "config": config.echo(),
        "derived": derived,
        "points": { "total": log.statuses.len(), "failed": log.failed, "status": log.statuses },
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    artifacts.add("summary.json", text.into_bytes());
    RunOutcome { artifacts, total_points: log.statuses.len(), failed_points: log.failed, report }
}

/// Evaluate `f` over `items` in parallel, preserving order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

/// Run `config` on a pool of `workers` threads.
pub fn run_scenario(config: &ScenarioConfig, workers: usize) -> Result<RunOutcome, ScenarioError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ScenarioError::Config { location: "--workers".into(), message: e.to_string() })?;
    Ok(pool.install(|| match config.scenario {
        Scenario::BlockadeLaserSweep => blockade::laser_sweep(config),
        Scenario::BlockadeMap | Scenario::LaserFreqAlt => blockade::map(config),
        Scenario::ThermalSweep => blockade::thermal(config),
        Scenario::Amplification => amplification::run(config),
        Scenario::LasingMap => lasing::run(config),
        Scenario::Validate => validate::run(config),
    }))
}
