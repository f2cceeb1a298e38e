//! Run configuration: TOML text, dotted-key overrides and validation.

use serde::{Deserialize, Deserializer, Serialize};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::harness::sweep::Experiment;
use crate::io::initial::InitialDataSpec;
use crate::model::{Grid, ModelParams, Orientation, Scaling, DEFAULT_CHI_FLOOR};
use crate::solver::kinetic::time_step;

/// Target number of stored samples when `sample_every` is not given.
pub const DEFAULT_SAMPLES: usize = 50;

fn default_scaling() -> Scaling {
    Scaling::Hyperbolic
}
fn default_k() -> i64 {
    1
}
fn default_cells() -> usize {
    256
}
fn default_chi_floor() -> f64 {
    DEFAULT_CHI_FLOOR
}
fn default_tau_end() -> f64 {
    30.0
}
fn default_micro_cells() -> Vec<usize> {
    vec![64, 128, 256]
}
fn default_reference_cells() -> usize {
    2048
}
fn default_max_cells() -> usize {
    4096
}
fn default_true() -> bool {
    true
}

fn scalar_or_list<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(f64),
        Many(Vec<f64>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    pub gamma: f64,
    /// A single value or a strictly decreasing ladder.
    #[serde(deserialize_with = "scalar_or_list")]
    pub epsilon: Vec<f64>,
    #[serde(default = "default_scaling")]
    pub scaling: Scaling,
    #[serde(default = "default_k")]
    pub k: i64,
    #[serde(default = "default_cells")]
    pub n_cells: usize,
    #[serde(alias = "T")]
    pub t_end: f64,
    /// Resolved during parsing when absent.
    #[serde(default)]
    pub sample_every: Option<usize>,
    #[serde(default = "default_chi_floor")]
    pub chi_floor: f64,
    #[serde(default = "default_tau_end")]
    pub tau_end: f64,
    #[serde(default = "default_micro_cells")]
    pub micro_cells: Vec<usize>,
    #[serde(default = "default_reference_cells")]
    pub reference_cells: usize,
    #[serde(default = "default_max_cells")]
    pub max_cells: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    #[serde(default = "default_true")]
    pub deterministic: bool,
    pub initial: InitialDataSpec,
}

impl RunConfig {
    pub fn orientation(&self) -> Orientation {
        if self.k < 0 {
            Orientation::Minus
        } else {
            Orientation::Plus
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n_cells)
    }

    /// Parameters for the `i`-th rung of the ε ladder.
    pub fn params(&self, i: usize) -> Result<ModelParams> {
        let eps = *self
            .epsilon
            .get(i)
            .ok_or_else(|| Error::param("epsilon", format!("ladder has no entry {i}")))?;
        ModelParams::with_chi_floor(self.gamma, eps, self.scaling, self.chi_floor)
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon.is_empty() {
            return Err(Error::param("epsilon", "at least one value is required"));
        }
        for i in 0..self.epsilon.len() {
            self.params(i)?;
        }
        if self.epsilon.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::param("epsilon", "the ladder must be strictly decreasing"));
        }
        if self.k != 1 && self.k != -1 {
            return Err(Error::param("k", format!("orientation must be 1 or -1, got {}", self.k)));
        }
        self.grid()?;
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::param("t_end", format!("must be finite and nonnegative, got {}", self.t_end)));
        }
        if self.sample_every == Some(0) {
            return Err(Error::param("sample_every", "must be positive"));
        }
        if !(self.tau_end.is_finite() && self.tau_end > 0.0) {
            return Err(Error::param("tau_end", "must be positive and finite"));
        }
        if self.micro_cells.contains(&0) || self.reference_cells == 0 || self.max_cells == 0 {
            return Err(Error::param("micro_cells", "cell counts must be positive"));
        }
        if !self.deterministic {
            return Err(Error::param("deterministic", "runs are always deterministic; false is not supported"));
        }
        self.initial.validate()
    }

    /// Fills `sample_every` so that about [`DEFAULT_SAMPLES`] states are kept.
    fn resolve_defaults(&mut self) -> Result<()> {
        if self.sample_every.is_none() {
            let dt = time_step(&self.params(0)?, &self.grid()?);
            let steps = (self.t_end / dt).round() as usize;
            self.sample_every = Some((steps / DEFAULT_SAMPLES).max(1));
        }
        Ok(())
    }
}

fn parse_value(text: &str) -> Value {
    match format!("v = {text}").parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(text.to_string())),
        Err(_) => Value::String(text.to_string()),
    }
}

/// Applies one `dotted.key=value` override; the value is read as a TOML
/// literal and falls back to a plain string.
pub fn apply_override(table: &mut Table, assignment: &str) -> Result<()> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{assignment}` is not of the form key=value")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("override key `{key}` is malformed")));
    }
    let (last, parents) = path.split_last().expect("split yields at least one segment");
    let mut node = table;
    for p in parents {
        let entry = node.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override key `{key}`: `{p}` is not a table")))?;
    }
    node.insert(last.to_string(), parse_value(value.trim()));
    Ok(())
}

/// Parses, overrides and validates a configuration document.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut table: Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let mut config: RunConfig = Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    config.validate()?;
    config.resolve_defaults()?;
    Ok(config)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, &[])
}

pub fn emit_config(config: &RunConfig) -> Result<String> {
    toml::to_string(config).map_err(|e| Error::Config(e.to_string()))
}
