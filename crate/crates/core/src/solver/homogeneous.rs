use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{exchange_rate, validate_gamma};
use crate::ode::ScalarIntegrator;

/// Spatially homogeneous state `(f_1, f_{-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousState {
    pub f1: f64,
    pub f_minus1: f64,
}

impl HomogeneousState {
    pub fn new(f1: f64, f_minus1: f64) -> Result<Self> {
        for (name, v) in [("f1", f1), ("f_minus1", f_minus1)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param("h0", format!("{name} must be finite and nonnegative, got {v}")));
            }
        }
        Ok(HomogeneousState { f1, f_minus1 })
    }

    pub fn total(&self) -> f64 {
        self.f1 + self.f_minus1
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HomogeneousTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<HomogeneousState>,
}

/// Integrates the space-free system on `[0, t_end]`, returning `n_samples + 1`
/// uniformly spaced states. The total `f_1 + f_{-1}` is carried exactly; only
/// the smaller component is integrated.
pub fn solve_homogeneous(
    h0: HomogeneousState,
    gamma: f64,
    t_end: f64,
    n_samples: usize,
) -> Result<HomogeneousTrajectory> {
    validate_gamma(gamma)?;
    let h0 = HomogeneousState::new(h0.f1, h0.f_minus1)?;
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::param("t_end", "must be finite and nonnegative"));
    }
    if n_samples == 0 {
        return Err(Error::param("n_samples", "must be positive"));
    }
    let times: Vec<f64> = (0..=n_samples)
        .map(|i| t_end * i as f64 / n_samples as f64)
        .collect();
    let m = h0.total();
    let plus_is_smaller = h0.f1 < h0.f_minus1;
    let w0 = h0.f1.min(h0.f_minus1);
    let mut w = vec![w0; times.len()];
    if m > 0.0 && h0.f1 != h0.f_minus1 {
        ScalarIntegrator::default().integrate_to(
            w0,
            &times,
            0.0,
            m,
            |y| exchange_rate(m, y, gamma),
            &mut w,
        )?;
    }
    let states = w
        .into_iter()
        .map(|w| {
            if plus_is_smaller {
                HomogeneousState { f1: w, f_minus1: m - w }
            } else {
                HomogeneousState { f1: m - w, f_minus1: w }
            }
        })
        .collect();
    Ok(HomogeneousTrajectory { times, states })
}
