//! Plain-text output formats: trajectory CSV and TOML reports.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::conditions::ConditionReport;
use crate::harness::sweep::{ErrorSeries, SweepPoint};
use crate::io::config::RunConfig;
use crate::solver::kinetic::Trajectory;

pub const TRAJECTORY_HEADER: &str = "t,x,f_plus,f_minus";

/// One row per sample time and cell, floats with 17 significant digits.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let centers = traj.grid.centers();
    let mut out = String::with_capacity(traj.len() * centers.len() * 96);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (t, state) in traj.times.iter().zip(&traj.states) {
        for ((x, p), m) in centers.iter().zip(state.f_plus()).zip(state.f_minus()) {
            let _ = writeln!(out, "{t:.16e},{x:.16e},{p:.16e},{m:.16e}");
        }
    }
    out
}

/// Result of an ε-sweep together with the configuration that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub experiment: String,
    pub gamma: f64,
    pub epsilons: Vec<f64>,
    pub errors: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_residual: Option<f64>,
    pub max_error_ratio: f64,
    pub monotone: bool,
    pub pass: bool,
    pub conditions: ConditionReport,
    pub config: RunConfig,
    pub points: Vec<SweepPoint>,
}

impl SweepReport {
    pub fn new(series: &ErrorSeries, pass: bool, config: &RunConfig) -> Self {
        SweepReport {
            experiment: series.experiment.name().to_string(),
            gamma: series.gamma,
            epsilons: series.epsilons.clone(),
            errors: series.errors.clone(),
            fitted_order: series.fitted_order,
            fit_residual: series.fit_residual,
            max_error_ratio: series.max_error_ratio(),
            monotone: series.monotone,
            pass,
            conditions: series.conditions,
            config: config.clone(),
            points: series.points.clone(),
        }
    }
}

pub fn to_toml<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| Error::Config(format!("cannot serialise report: {e}")))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}
