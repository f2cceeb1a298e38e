use serde::{Deserialize, Serialize};

use crate::asymptotics::layer::separation_constant;
use crate::model::{KineticState, Orientation};

/// Hypotheses of the aligned-limit theorem evaluated on an initial datum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Smallest entry over cells and orientations.
    pub mu: f64,
    /// `F(-k) ≥ μ > 0`.
    pub minority_positive: bool,
    /// `F(k, x) > c_γ F(-k, x)` in every cell.
    pub pointwise_separation: bool,
    /// `min F(k) ≥ c_γ max F(-k)`.
    pub uniform_separation: bool,
    /// Infinite when `γ ≤ 1`, where no separation constant exists.
    pub c_gamma_used: f64,
}

impl ConditionReport {
    pub fn aligned_ok(&self) -> bool {
        self.minority_positive && self.pointwise_separation
    }
}

pub fn check_conditions(f: &KineticState, k: Orientation, gamma: f64) -> ConditionReport {
    let major = f.component(k);
    let minor = f.component(-k);
    let min_minor = minor.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    let max_minor = minor.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let min_major = major.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    let mu = f.min_value();
    match separation_constant(gamma) {
        Ok(c) => ConditionReport {
            mu,
            minority_positive: min_minor > 0.0,
            pointwise_separation: major.iter().zip(minor).all(|(a, b)| *a > c * b),
            uniform_separation: min_major >= c * max_minor,
            c_gamma_used: c,
        },
        Err(_) => ConditionReport {
            mu,
            minority_positive: min_minor > 0.0,
            pointwise_separation: false,
            uniform_separation: false,
            c_gamma_used: f64::INFINITY,
        },
    }
}
