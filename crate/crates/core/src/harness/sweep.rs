//! ε-ladders comparing the kinetic solution with its macroscopic limit.
//!
//! Each ladder point is resolved by doubling `n_cells` until one more
//! doubling changes the measured error by less than 10%; the finer of the
//! last two grids is reported.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::approximant::CompositeApproximant;
use crate::asymptotics::diffusion::{heat_solve, DiffusionRegime, DiffusionSpec};
use crate::error::{Error, Result};
use crate::harness::conditions::{check_conditions, ConditionReport};
use crate::harness::fit::fit_order;
use crate::harness::norms::sup_error;
use crate::io::initial::{synthesize_initial, InitialDataSpec};
use crate::model::{Grid, ModelParams, Orientation, Scaling};
use crate::solver::kinetic::{solve_kinetic_at, step_count, time_step, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    /// Parabolic scaling with `γ < 1`, compared with the heat equation.
    DiffusiveParabolic,
    /// Hyperbolic scaling with `γ > 1`, compared with the composite approximant.
    AlignedHyperbolic,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::DiffusiveParabolic => "diffusive_parabolic",
            Experiment::AlignedHyperbolic => "aligned_hyperbolic",
        }
    }

    fn cells_per_epsilon(self) -> f64 {
        match self {
            Experiment::DiffusiveParabolic => 8.0,
            Experiment::AlignedHyperbolic => 16.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub k: Orientation,
    /// Minimum starting resolution.
    pub base_cells: usize,
    /// Starting resolution per unit of `1/ε`; `None` uses the experiment default.
    pub cells_per_epsilon: Option<f64>,
    /// Refinement stops here even if the error has not settled.
    pub max_cells: usize,
    /// Uniformly spread samples over `[0, T]`.
    pub uniform_samples: usize,
    /// Extra samples in `[0, 10 ε]` to catch the initial layer.
    pub layer_samples: usize,
    /// Worker threads for independent ladder points; 0 uses the global pool.
    pub jobs: usize,
    pub solver: SolverOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            k: Orientation::Plus,
            base_cells: 64,
            cells_per_epsilon: None,
            max_cells: 4096,
            uniform_samples: 50,
            layer_samples: 40,
            jobs: 0,
            solver: SolverOptions::default(),
        }
    }
}

/// Measured error of one ladder point together with its refinement history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub epsilon: f64,
    pub error: f64,
    pub n_cells: usize,
    /// `(n_cells, error)` for every grid tried.
    pub refinements: Vec<(usize, f64)>,
    /// False when `max_cells` stopped the refinement first.
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSeries {
    pub experiment: Experiment,
    pub gamma: f64,
    pub t_end: f64,
    pub epsilons: Vec<f64>,
    pub errors: Vec<f64>,
    /// Absent for a single-point ladder.
    pub fitted_order: Option<f64>,
    pub fit_residual: Option<f64>,
    pub conditions: ConditionReport,
    /// Errors strictly decrease along the ladder.
    pub monotone: bool,
    /// The ladder was recomputed with doubled resolution after a non-monotone first pass.
    pub rerun: bool,
    pub points: Vec<SweepPoint>,
}

impl ErrorSeries {
    /// `max error/ε` over the ladder.
    pub fn max_error_ratio(&self) -> f64 {
        self.epsilons
            .iter()
            .zip(&self.errors)
            .map(|(e, err)| err / e)
            .fold(0.0, f64::max)
    }
}

/// Step indices for the sample times: about `uniform` spread over the run and
/// `layer` more inside `[0, 10 ε]`.
pub fn sample_steps(n_steps: usize, dt: f64, epsilon: f64, uniform: usize, layer: usize) -> Vec<usize> {
    let mut steps: Vec<usize> = (0..=uniform.max(1))
        .map(|i| ((i as f64 * n_steps as f64) / uniform.max(1) as f64).round() as usize)
        .collect();
    let layer_end = ((10.0 * epsilon / dt).round() as usize).min(n_steps);
    for i in 0..=layer {
        steps.push(((i as f64 * layer_end as f64) / layer.max(1) as f64).round() as usize);
    }
    steps.sort_unstable();
    steps.dedup();
    steps
}

fn next_pow2(x: f64) -> usize {
    (x.ceil().max(1.0) as usize).next_power_of_two()
}

fn point_error(
    experiment: Experiment,
    spec: &InitialDataSpec,
    gamma: f64,
    epsilon: f64,
    t_end: f64,
    n_cells: usize,
    options: &SweepOptions,
) -> Result<f64> {
    let grid = Grid::new(n_cells)?;
    let f0 = synthesize_initial(spec, &grid)?;
    let scaling = match experiment {
        Experiment::DiffusiveParabolic => Scaling::Parabolic,
        Experiment::AlignedHyperbolic => Scaling::Hyperbolic,
    };
    let params = ModelParams::new(gamma, epsilon, scaling)?;
    let dt = time_step(&params, &grid);
    let n_steps = step_count(t_end, dt)?;
    let steps = sample_steps(n_steps, dt, epsilon, options.uniform_samples, options.layer_samples);
    let traj = solve_kinetic_at(&f0, &params, &grid, &steps, &options.solver)?;
    match experiment {
        Experiment::AlignedHyperbolic => {
            let approx = CompositeApproximant::new(&f0, options.k, gamma, epsilon, &grid)?;
            let reference = approx.at_times(&traj.times)?;
            sup_error(&traj, &reference)
        }
        Experiment::DiffusiveParabolic => {
            let d = DiffusionSpec::new(gamma, epsilon, DiffusionRegime::ParabolicZeroth, false)?;
            let heat = heat_solve(&f0.density(), d.coefficient, &traj.times, false)?;
            let mut worst = 0.0_f64;
            for (state, rho) in traj.states.iter().zip(&heat.fields) {
                for ((p, m), r) in state.f_plus().iter().zip(state.f_minus()).zip(rho) {
                    worst = worst.max((p + m - r).abs());
                }
            }
            Ok(worst)
        }
    }
}

fn resolve_point(
    experiment: Experiment,
    spec: &InitialDataSpec,
    gamma: f64,
    epsilon: f64,
    t_end: f64,
    cells_per_epsilon: f64,
    options: &SweepOptions,
) -> Result<SweepPoint> {
    let mut n = next_pow2((options.base_cells as f64).max(cells_per_epsilon / epsilon)).min(options.max_cells);
    let mut refinements = vec![(n, point_error(experiment, spec, gamma, epsilon, t_end, n, options)?)];
    let mut resolved = false;
    while 2 * n <= options.max_cells {
        n *= 2;
        let e = point_error(experiment, spec, gamma, epsilon, t_end, n, options)?;
        let prev = refinements.last().unwrap().1;
        refinements.push((n, e));
        if (e - prev).abs() < 0.1 * e {
            resolved = true;
            break;
        }
    }
    let (n_cells, error) = *refinements.last().unwrap();
    Ok(SweepPoint {
        epsilon,
        error,
        n_cells,
        refinements,
        resolved,
    })
}

fn run_ladder(
    experiment: Experiment,
    spec: &InitialDataSpec,
    gamma: f64,
    epsilons: &[f64],
    t_end: f64,
    cells_per_epsilon: f64,
    options: &SweepOptions,
) -> Result<Vec<SweepPoint>> {
    let job = |eps: &f64| resolve_point(experiment, spec, gamma, *eps, t_end, cells_per_epsilon, options);
    if options.jobs == 1 {
        return epsilons.iter().map(job).collect();
    }
    let run = || epsilons.par_iter().map(job).collect::<Result<Vec<_>>>();
    if options.jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::param("jobs", e.to_string()))?
            .install(run)
    }
}

fn strictly_decreasing(errors: &[f64]) -> bool {
    errors.windows(2).all(|w| w[1] < w[0])
}

/// Runs the ladder and fits the error exponent in `ε`.
pub fn epsilon_sweep(
    experiment: Experiment,
    spec: &InitialDataSpec,
    gamma: f64,
    epsilons: &[f64],
    t_end: f64,
    options: &SweepOptions,
) -> Result<ErrorSeries> {
    if epsilons.is_empty() {
        return Err(Error::param("epsilon", "the ladder is empty"));
    }
    if epsilons.iter().any(|e| !(e.is_finite() && *e > 0.0)) || !strictly_decreasing(epsilons) {
        return Err(Error::param("epsilon", "the ladder must be positive and strictly decreasing"));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::param("t_end", "must be positive and finite"));
    }
    spec.validate()?;
    let probe = synthesize_initial(spec, &Grid::new(options.base_cells.max(1))?)?;
    let conditions = check_conditions(&probe, options.k, gamma);
    match experiment {
        Experiment::AlignedHyperbolic => {
            if !(gamma > 1.0) {
                return Err(Error::param("gamma", "the aligned experiment needs gamma > 1"));
            }
            if !conditions.aligned_ok() {
                return Err(Error::Precondition {
                    cell: 0,
                    reason: format!("initial datum violates the aligned-limit hypotheses: {conditions:?}"),
                });
            }
        }
        Experiment::DiffusiveParabolic => {
            if !(gamma > 0.0 && gamma < 1.0) {
                return Err(Error::param("gamma", "the diffusive experiment needs 0 < gamma < 1"));
            }
            if !spec.is_symmetric() {
                return Err(Error::Precondition {
                    cell: 0,
                    reason: "the diffusive experiment starts from a diffusive Maxwellian (equal orientations)".into(),
                });
            }
        }
    }

    let base = options.cells_per_epsilon.unwrap_or(experiment.cells_per_epsilon());
    let mut points = run_ladder(experiment, spec, gamma, epsilons, t_end, base, options)?;
    let mut errors: Vec<f64> = points.iter().map(|p| p.error).collect();
    let mut rerun = false;
    if !strictly_decreasing(&errors) {
        rerun = true;
        let finer = SweepOptions {
            base_cells: options.base_cells * 2,
            max_cells: options.max_cells * 2,
            ..*options
        };
        points = run_ladder(experiment, spec, gamma, epsilons, t_end, 2.0 * base, &finer)?;
        errors = points.iter().map(|p| p.error).collect();
    }
    let (fitted_order, fit_residual) = if epsilons.len() >= 2 {
        let (p, r) = fit_order(epsilons, &errors)?;
        (Some(p), Some(r))
    } else {
        (None, None)
    };
    Ok(ErrorSeries {
        experiment,
        gamma,
        t_end,
        epsilons: epsilons.to_vec(),
        monotone: strictly_decreasing(&errors),
        errors,
        fitted_order,
        fit_residual,
        conditions,
        rerun,
        points,
    })
}
