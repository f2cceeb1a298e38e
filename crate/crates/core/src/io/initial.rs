use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Grid, KineticState};

/// One cosine mode `amplitude · cos(2π m x + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub wavenumber: u32,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

/// Trigonometric profile `mean + Σ amplitude · cos(2π m x + phase)` of one orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub mean: f64,
    #[serde(default)]
    pub modes: Vec<Mode>,
}

impl ComponentSpec {
    pub fn constant(mean: f64) -> Self {
        ComponentSpec { mean, modes: Vec::new() }
    }

    pub fn with_mode(mut self, wavenumber: u32, amplitude: f64, phase: f64) -> Self {
        self.modes.push(Mode {
            wavenumber,
            amplitude,
            phase,
        });
        self
    }

    /// Guaranteed pointwise lower bound `mean - Σ|amplitude|`.
    pub fn lower_bound(&self) -> f64 {
        self.mean - self.modes.iter().map(|m| m.amplitude.abs()).sum::<f64>()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.modes.iter().fold(self.mean, |acc, m| {
            acc + m.amplitude * (2.0 * PI * f64::from(m.wavenumber) * x + m.phase).cos()
        })
    }

    /// `sup |∂x|` bound `Σ 2π m |amplitude|`.
    pub fn derivative_bound(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| 2.0 * PI * f64::from(m.wavenumber) * m.amplitude.abs())
            .sum()
    }

    fn validate(&self, name: &'static str) -> Result<()> {
        let finite = self.mean.is_finite() && self.modes.iter().all(|m| m.amplitude.is_finite() && m.phase.is_finite());
        if !finite {
            return Err(Error::param(name, "mean, amplitudes and phases must be finite"));
        }
        if self.mean < 0.0 {
            return Err(Error::param(name, format!("mean must be nonnegative, got {}", self.mean)));
        }
        if self.modes.iter().any(|m| m.wavenumber == 0) {
            return Err(Error::param(name, "mode wavenumbers must be positive integers"));
        }
        let lb = self.lower_bound();
        if lb < 0.0 {
            return Err(Error::param(
                name,
                format!("mean minus the sum of |amplitudes| is {lb}; the profile could turn negative"),
            ));
        }
        Ok(())
    }
}

/// Initial datum given per orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDataSpec {
    pub plus: ComponentSpec,
    pub minus: ComponentSpec,
}

impl InitialDataSpec {
    pub fn new(plus: ComponentSpec, minus: ComponentSpec) -> Result<Self> {
        let spec = InitialDataSpec { plus, minus };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.plus.validate("initial.plus")?;
        self.minus.validate("initial.minus")
    }

    /// Both orientations carry the same profile.
    pub fn is_symmetric(&self) -> bool {
        self.plus == self.minus
    }
}

/// Samples the trigonometric datum at the cell centres.
pub fn synthesize_initial(spec: &InitialDataSpec, grid: &Grid) -> Result<KineticState> {
    spec.validate()?;
    let (plus, minus): (Vec<f64>, Vec<f64>) = grid
        .centers()
        .into_iter()
        .map(|x| (spec.plus.eval(x).max(0.0), spec.minus.eval(x).max(0.0)))
        .unzip();
    KineticState::new(plus, minus)
}
