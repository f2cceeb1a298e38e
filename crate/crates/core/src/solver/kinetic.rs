use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{exchange_rate, Grid, KineticState, ModelParams, Scaling};
use crate::ode::ScalarIntegrator;
use crate::solver::transport::stream_one_cell;

/// Time-sampled solution of the kinetic equation.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<KineticState>,
    pub params: ModelParams,
    pub grid: Grid,
    /// Smallest entry of the initial datum; the lower-bound guarantees need it positive.
    pub mu: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &KineticState {
        self.states.last().expect("trajectory has at least the initial sample")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Hard cap on the number of time steps of one run.
    pub max_steps: usize,
    /// Cell count from which the relaxation sweep is split across workers.
    pub parallel_cells: usize,
    pub integrator: ScalarIntegrator,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_steps: 50_000_000,
            parallel_cells: 4096,
            integrator: ScalarIntegrator::default(),
        }
    }
}

/// Time step of the splitting scheme: one cell of transport per step.
pub fn time_step(params: &ModelParams, grid: &Grid) -> f64 {
    match params.scaling() {
        Scaling::Hyperbolic => grid.dx(),
        Scaling::Parabolic => params.epsilon() * grid.dx(),
    }
}

/// Multiplier of the interaction term in the transport-speed-normalised form.
pub fn stiffness(params: &ModelParams) -> f64 {
    match params.scaling() {
        Scaling::Hyperbolic => 1.0 / params.epsilon(),
        Scaling::Parabolic => 1.0 / (params.epsilon() * params.epsilon()),
    }
}

/// Number of steps of size `dt` in `t_end`, which must be a whole multiple.
pub fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::param("t_end", format!("must be finite and nonnegative, got {t_end}")));
    }
    let steps = t_end / dt;
    let rounded = steps.round();
    if (steps - rounded).abs() > 1e-9 * rounded.max(1.0) {
        return Err(Error::param(
            "t_end",
            format!("{t_end} is not a whole number of time steps of size {dt}"),
        ));
    }
    Ok(rounded as usize)
}

/// Solves `ẇ = stiffness · ((m - w) w^γ - w (m - w)^γ) / ((m - w)^γ + w^γ)` over
/// `dt` with the cell mass `m` held fixed.
pub fn relax_cell(m: f64, w: f64, dt: f64, gamma: f64, stiffness: f64) -> Result<f64> {
    relax_with(&ScalarIntegrator::default(), m, w, dt, gamma, stiffness)
}

pub(crate) fn relax_with(
    integrator: &ScalarIntegrator,
    m: f64,
    w: f64,
    dt: f64,
    gamma: f64,
    stiffness: f64,
) -> Result<f64> {
    if !(w.is_finite() && m.is_finite()) || w < 0.0 || w > m {
        return Err(Error::Precondition {
            cell: 0,
            reason: format!("relaxation variable {w} outside [0, {m}]"),
        });
    }
    if !(dt > 0.0 && stiffness > 0.0) {
        return Err(Error::param("dt", "time step and stiffness must be positive"));
    }
    integrator.integrate(w, dt, 0.0, m, |y| stiffness * exchange_rate(m, y, gamma))
}

/// Relaxes one cell in place. The smaller component is integrated and the
/// larger recovered from the conserved total, which keeps the update
/// symmetric under exchange of the orientations.
#[inline]
fn relax_pair(
    integrator: &ScalarIntegrator,
    a: &mut f64,
    b: &mut f64,
    dt: f64,
    gamma: f64,
    stiffness: f64,
    chi_floor: f64,
) -> Result<()> {
    let m = *a + *b;
    if m <= chi_floor || *a == *b {
        return Ok(());
    }
    if *a < *b {
        let w = relax_with(integrator, m, *a, dt, gamma, stiffness)?;
        *a = w;
        *b = m - w;
    } else {
        let w = relax_with(integrator, m, *b, dt, gamma, stiffness)?;
        *b = w;
        *a = m - w;
    }
    Ok(())
}

fn relax_all(
    plus: &mut [f64],
    minus: &mut [f64],
    dt: f64,
    params: &ModelParams,
    options: &SolverOptions,
) -> Result<()> {
    let gamma = params.gamma();
    let stiff = stiffness(params);
    let chi = params.chi_floor();
    let integ = &options.integrator;
    let run = |offset: usize, p: &mut [f64], m: &mut [f64]| -> Result<()> {
        for (i, (a, b)) in p.iter_mut().zip(m.iter_mut()).enumerate() {
            relax_pair(integ, a, b, dt, gamma, stiff, chi).map_err(|e| match e {
                Error::Precondition { reason, .. } => Error::Precondition {
                    cell: offset + i,
                    reason,
                },
                other => other,
            })?;
        }
        Ok(())
    };
    if plus.len() >= options.parallel_cells {
        const CHUNK: usize = 512;
        plus.par_chunks_mut(CHUNK)
            .zip(minus.par_chunks_mut(CHUNK))
            .enumerate()
            .try_for_each(|(c, (p, m))| run(c * CHUNK, p, m))
    } else {
        run(0, plus, minus)
    }
}

/// One Lie-splitting step: exact one-cell transport, then per-cell relaxation.
pub fn kinetic_step(state: &KineticState, params: &ModelParams, grid: &Grid) -> Result<KineticState> {
    if state.len() != grid.n_cells() {
        return Err(Error::LengthMismatch {
            expected: grid.n_cells(),
            got: state.len(),
        });
    }
    let (mut plus, mut minus) = state.clone().into_parts();
    stream_one_cell(&mut plus, &mut minus);
    relax_all(&mut plus, &mut minus, time_step(params, grid), params, &SolverOptions::default())?;
    Ok(KineticState::from_parts_unchecked(plus, minus))
}

/// Integrates the scaled kinetic equation from `f0` up to `t_end`, keeping
/// every `sample_every`-th step (and always the final one).
pub fn solve_kinetic(
    f0: &KineticState,
    params: &ModelParams,
    grid: &Grid,
    t_end: f64,
    sample_every: usize,
) -> Result<Trajectory> {
    if sample_every == 0 {
        return Err(Error::param("sample_every", "must be positive"));
    }
    let dt = time_step(params, grid);
    let n_steps = step_count(t_end, dt)?;
    let mut samples: Vec<usize> = (0..=n_steps).step_by(sample_every).collect();
    if samples.last() != Some(&n_steps) {
        samples.push(n_steps);
    }
    solve_kinetic_at(f0, params, grid, &samples, &SolverOptions::default())
}

/// Integrates the kinetic equation and records the state after each of the
/// given (sorted) step counts.
pub fn solve_kinetic_at(
    f0: &KineticState,
    params: &ModelParams,
    grid: &Grid,
    sample_steps: &[usize],
    options: &SolverOptions,
) -> Result<Trajectory> {
    if f0.len() != grid.n_cells() {
        return Err(Error::LengthMismatch {
            expected: grid.n_cells(),
            got: f0.len(),
        });
    }
    if sample_steps.is_empty() || sample_steps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("sample_steps", "must be nonempty and strictly increasing"));
    }
    let n_steps = *sample_steps.last().unwrap();
    if n_steps > options.max_steps {
        return Err(Error::StepBudget {
            steps: n_steps,
            budget: options.max_steps,
        });
    }
    let dt = time_step(params, grid);
    let (mut plus, mut minus) = f0.clone().into_parts();
    let mut times = Vec::with_capacity(sample_steps.len());
    let mut states = Vec::with_capacity(sample_steps.len());
    let mut next = sample_steps.iter().peekable();
    for step in 0..=n_steps {
        if step > 0 {
            stream_one_cell(&mut plus, &mut minus);
            relax_all(&mut plus, &mut minus, dt, params, options)?;
        }
        if next.peek() == Some(&&step) {
            next.next();
            times.push(step as f64 * dt);
            states.push(KineticState::from_parts_unchecked(plus.clone(), minus.clone()));
        }
    }
    Ok(Trajectory {
        times,
        states,
        params: *params,
        grid: *grid,
        mu: f0.min_value(),
    })
}
