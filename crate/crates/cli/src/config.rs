//! Run configuration: a TOML document, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use siegel_jacobi::domains::JacobiBallPoint;
use siegel_jacobi::dynamics::LinearHamiltonian;
use siegel_jacobi::linalg::DEFAULT_TOL;
use siegel_jacobi::random::{hamiltonian_with, jacobi_ball_point_with, rng};

use crate::error::CliError;
use crate::schema::{read_hamiltonian, read_point, read_text, Chart, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Oracle,
    Both,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Oracle => "oracle",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Hamiltonian document; generated from the seed when absent.
    pub hamiltonian: Option<PathBuf>,
    /// Initial point document; seeded random or origin when absent.
    pub point: Option<PathBuf>,
    pub chart: Option<Chart>,
    pub horizon: Option<f64>,
    pub step: Option<f64>,
    pub record_every: Option<usize>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub method: Option<Method>,
    pub phases: Option<bool>,
    /// Rank and weight of generated fixtures.
    pub n: Option<usize>,
    pub k: Option<f64>,
    /// Floquet period and optional `cos(2πt/T)` modulation Hamiltonian.
    pub period: Option<f64>,
    pub modulation: Option<PathBuf>,
    pub floquet_steps: Option<usize>,
    /// Extra points at which energy, kernel and metric are evaluated.
    #[serde(default)]
    pub points: Vec<PathBuf>,
}

/// Flag values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub method: Option<Method>,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_HORIZON: f64 = 1.0;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_RANK: usize = 2;
pub const DEFAULT_WEIGHT: f64 = 4.0;
const FIXTURE_SCALE: f64 = 0.5;
const FIXTURE_MARGIN: f64 = 0.2;

/// Fully resolved settings with paths made relative to the config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub hamiltonian: Option<PathBuf>,
    pub point: Option<PathBuf>,
    pub chart: Chart,
    pub horizon: f64,
    pub step: f64,
    pub record_every: usize,
    pub out: Option<PathBuf>,
    pub tol: f64,
    pub seed: Option<u64>,
    pub method: Method,
    pub phases: bool,
    pub n: usize,
    pub k: f64,
    pub period: Option<f64>,
    pub modulation: Option<PathBuf>,
    pub floquet_steps: usize,
    pub points: Vec<PathBuf>,
}

impl Settings {
    pub fn load(config: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let (cfg, base) = match config {
            Some(path) => {
                let text = read_text(path)?;
                let cfg: RunConfig = toml::from_str(&text)
                    .map_err(|e| CliError::Parse { path: path.display().to_string(), msg: e.to_string() })?;
                (cfg, path.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            None => (RunConfig::default(), PathBuf::new()),
        };
        let resolve = |p: Option<PathBuf>| p.map(|p| if p.is_absolute() { p } else { base.join(p) });
        let s = Settings {
            hamiltonian: resolve(cfg.hamiltonian),
            point: resolve(cfg.point),
            chart: cfg.chart.unwrap_or(Chart::JacobiBall),
            horizon: cfg.horizon.unwrap_or(DEFAULT_HORIZON),
            step: cfg.step.unwrap_or(DEFAULT_STEP),
            record_every: cfg.record_every.unwrap_or(1),
            out: flags.out.clone().or(resolve(cfg.out)),
            tol: flags.tol.or(cfg.tol).unwrap_or(DEFAULT_TOL),
            seed: flags.seed.or(cfg.seed),
            method: flags.method.or(cfg.method).unwrap_or(Method::ClosedForm),
            phases: cfg.phases.unwrap_or(true),
            n: cfg.n.unwrap_or(DEFAULT_RANK),
            k: cfg.k.unwrap_or(DEFAULT_WEIGHT),
            period: cfg.period,
            modulation: resolve(cfg.modulation),
            floquet_steps: cfg.floquet_steps.unwrap_or(2000),
            points: cfg.points.into_iter().map(|p| resolve(Some(p)).expect("present")).collect(),
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(CliError::Invariant(format!("{name} must be positive and finite, got {x}")))
            }
        };
        positive("horizon", self.horizon)?;
        positive("step", self.step)?;
        positive("tol", self.tol)?;
        if let Some(p) = self.period {
            positive("period", p)?;
        }
        if self.record_every == 0 || self.n == 0 || self.floquet_steps == 0 {
            return Err(CliError::Invariant("record_every, n and floquet_steps must be at least 1".into()));
        }
        if !matches!(self.chart, Chart::JacobiBall | Chart::JacobiUpper | Chart::EtaBall) {
            return Err(CliError::Invariant(format!(
                "chart {} cannot be propagated; use jacobi_ball, jacobi_upper or eta_ball",
                self.chart.tag()
            )));
        }
        let files = [&self.hamiltonian, &self.point, &self.modulation].into_iter().flatten().chain(&self.points);
        for f in files {
            if !f.is_file() {
                return Err(CliError::Usage(format!("referenced file {} does not exist", f.display())));
            }
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> Result<LinearHamiltonian, CliError> {
        match (&self.hamiltonian, self.seed) {
            (Some(path), _) => read_hamiltonian(path, self.tol),
            (None, Some(seed)) => Ok(hamiltonian_with(&mut rng(seed), self.n, self.k, FIXTURE_SCALE)),
            (None, None) => Err(CliError::Usage("no hamiltonian file configured and no --seed to generate one".into())),
        }
    }

    /// Initial point: the configured file, else a seeded random ball point,
    /// else the origin. Generated points are mapped into `self.chart`.
    pub fn initial_point(&self, n: usize) -> Result<Point, CliError> {
        if let Some(path) = &self.point {
            return read_point(path);
        }
        let x = match self.seed {
            // Offset keeps the point stream independent of the Hamiltonian stream.
            Some(seed) => jacobi_ball_point_with(&mut rng(seed.wrapping_add(1)), n, FIXTURE_MARGIN),
            None => JacobiBallPoint::origin(n),
        };
        crate::propagate::express(&x, self.chart)
    }
}
