use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::kinetic::Trajectory;
use crate::solver::monotone::MonotoneBracket;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichReport {
    pub pass: bool,
    /// Largest amount by which the trajectory leaves `[g_n, h_n]`.
    pub max_violation: f64,
    /// `5 (gap + dx)`.
    pub tolerance: f64,
}

/// Checks `g_n ≤ f ≤ h_n` componentwise at every sample within `5 (gap + dx)`.
pub fn sandwich_check(bracket: &MonotoneBracket, traj: &Trajectory) -> Result<SandwichReport> {
    let (lower, upper) = (&bracket.lower, &bracket.upper);
    if traj.grid != lower.grid || traj.grid != upper.grid {
        return Err(Error::SampleMismatch("bracket and trajectory use different grids".into()));
    }
    if traj.times.len() != lower.times.len()
        || traj
            .times
            .iter()
            .zip(&lower.times)
            .any(|(a, b)| (a - b).abs() > 1e-12 * a.abs().max(1.0))
    {
        return Err(Error::SampleMismatch("bracket and trajectory are sampled at different times".into()));
    }
    if traj.params.epsilon() != 1.0 {
        return Err(Error::param("epsilon", "the monotone bracket is built for epsilon = 1"));
    }
    let mut worst = 0.0_f64;
    for ((f, g), h) in traj.states.iter().zip(&lower.states).zip(&upper.states) {
        for (fv, (gv, hv)) in f
            .f_plus()
            .iter()
            .chain(f.f_minus())
            .zip(g.f_plus().iter().chain(g.f_minus()).zip(h.f_plus().iter().chain(h.f_minus())))
        {
            worst = worst.max(gv - fv).max(fv - hv);
        }
    }
    let tolerance = 5.0 * (bracket.gap + traj.grid.dx());
    Ok(SandwichReport {
        pass: worst <= tolerance,
        max_violation: worst,
        tolerance,
    })
}
