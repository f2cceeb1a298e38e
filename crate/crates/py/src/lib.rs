//! Python bindings: states, solvers, the initial layer and the limit experiments.
//!
//! Fields cross the boundary as plain lists of floats.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use alignkin::asymptotics::{initial_layer_solve, layer_certificate, separation_constant as core_separation};
use alignkin::harness::{epsilon_sweep as core_sweep, micro_refinement as core_micro, run_selftest, Experiment, SweepOptions};
use alignkin::io::{emit_config, parse_config_with};
use alignkin::solver::{solve_homogeneous as core_homogeneous, solve_kinetic as core_solve, HomogeneousState};
use alignkin::{collision_q as core_q, EquilibriumKind, MacroField, ModelParams, Orientation, Scaling};

create_exception!(alignkin_py, AlignkinError, PyException);

fn to_py(e: alignkin::Error) -> PyErr {
    if e.is_numerical() {
        AlignkinError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn parse_scaling(name: &str) -> PyResult<Scaling> {
    match name {
        "hyperbolic" => Ok(Scaling::Hyperbolic),
        "parabolic" => Ok(Scaling::Parabolic),
        other => Err(PyValueError::new_err(format!("unknown scaling `{other}`"))),
    }
}

fn parse_kind(name: &str) -> PyResult<EquilibriumKind> {
    match name {
        "diffusive" => Ok(EquilibriumKind::Diffusive),
        "aligned_plus" => Ok(EquilibriumKind::Aligned(Orientation::Plus)),
        "aligned_minus" => Ok(EquilibriumKind::Aligned(Orientation::Minus)),
        other => Err(PyValueError::new_err(format!(
            "unknown equilibrium `{other}`; expected diffusive, aligned_plus or aligned_minus"
        ))),
    }
}

/// Uniform periodic grid on the unit interval.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct Grid {
    inner: alignkin::Grid,
}

#[pymethods]
impl Grid {
    #[new]
    fn new(n_cells: usize) -> PyResult<Self> {
        Ok(Grid {
            inner: alignkin::Grid::new(n_cells).map_err(to_py)?,
        })
    }

    #[getter]
    fn n_cells(&self) -> usize {
        self.inner.n_cells()
    }

    #[getter]
    fn dx(&self) -> f64 {
        self.inner.dx()
    }

    fn centers(&self) -> Vec<f64> {
        self.inner.centers()
    }
}

/// Pair of nonnegative cell averages `(f_plus, f_minus)`.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct KineticState {
    inner: alignkin::KineticState,
}

#[pymethods]
impl KineticState {
    #[new]
    fn new(f_plus: Vec<f64>, f_minus: Vec<f64>) -> PyResult<Self> {
        Ok(KineticState {
            inner: alignkin::KineticState::new(f_plus, f_minus).map_err(to_py)?,
        })
    }

    #[getter]
    fn f_plus(&self) -> Vec<f64> {
        self.inner.f_plus().to_vec()
    }

    #[getter]
    fn f_minus(&self) -> Vec<f64> {
        self.inner.f_minus().to_vec()
    }

    fn density(&self) -> Vec<f64> {
        self.inner.density().into_vec()
    }

    fn mass(&self, grid: &Grid) -> f64 {
        alignkin::mass(&self.inner, &grid.inner)
    }

    fn swapped(&self) -> Self {
        KineticState {
            inner: self.inner.swapped(),
        }
    }

    fn reflected(&self) -> Self {
        KineticState {
            inner: self.inner.reflected(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Sampled kinetic solution.
#[pyclass(frozen, get_all)]
struct Trajectory {
    times: Vec<f64>,
    states: Vec<KineticState>,
    mu: f64,
}

/// Collision operator `Q` evaluated per cell; returns `(q_plus, q_minus)`.
#[pyfunction]
#[pyo3(signature = (state, gamma, chi_floor = alignkin::DEFAULT_CHI_FLOOR))]
fn collision_q(state: &KineticState, gamma: f64, chi_floor: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let params = ModelParams::with_chi_floor(gamma, 1.0, Scaling::Hyperbolic, chi_floor).map_err(to_py)?;
    let q = core_q(&state.inner, &params).map_err(to_py)?;
    Ok((q.plus, q.minus))
}

/// Local equilibrium of the given kind carrying density `rho`.
#[pyfunction]
fn maxwellian(kind: &str, rho: Vec<f64>) -> PyResult<KineticState> {
    let rho = MacroField::new(rho).map_err(to_py)?;
    Ok(KineticState {
        inner: alignkin::maxwellian(parse_kind(kind)?, &rho).map_err(to_py)?,
    })
}

#[pyfunction]
#[pyo3(signature = (state, grid, gamma, epsilon, t_end, scaling = "hyperbolic", sample_every = 1))]
#[allow(clippy::too_many_arguments)]
fn solve_kinetic(
    py: Python<'_>,
    state: &KineticState,
    grid: &Grid,
    gamma: f64,
    epsilon: f64,
    t_end: f64,
    scaling: &str,
    sample_every: usize,
) -> PyResult<Trajectory> {
    let params = ModelParams::new(gamma, epsilon, parse_scaling(scaling)?).map_err(to_py)?;
    let f0 = state.inner.clone();
    let g = grid.inner;
    let traj = py
        .detach(move || core_solve(&f0, &params, &g, t_end, sample_every))
        .map_err(to_py)?;
    Ok(Trajectory {
        times: traj.times,
        mu: traj.mu,
        states: traj.states.into_iter().map(|inner| KineticState { inner }).collect(),
    })
}

/// Space-free relaxation; returns `(times, f1, f_minus1)`.
#[pyfunction]
fn solve_homogeneous(
    f1: f64,
    f_minus1: f64,
    gamma: f64,
    t_end: f64,
    n_samples: usize,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let traj = core_homogeneous(HomogeneousState { f1, f_minus1 }, gamma, t_end, n_samples).map_err(to_py)?;
    let (a, b) = traj.states.iter().map(|s| (s.f1, s.f_minus1)).unzip();
    Ok((traj.times, a, b))
}

#[pyfunction]
fn separation_constant(gamma: f64) -> PyResult<f64> {
    core_separation(gamma).map_err(to_py)
}

/// Layer decay certificate; returns `(theta_max, delta, c_gamma, satisfiable)`.
#[pyfunction]
fn layer_bound(f_major: Vec<f64>, h0: Vec<f64>, gamma: f64) -> PyResult<(f64, f64, f64, bool)> {
    let c = core_separation(gamma).map_err(to_py)?;
    let cert = layer_certificate(
        &MacroField::new(f_major).map_err(to_py)?,
        &MacroField::new(h0).map_err(to_py)?,
        gamma,
        c,
    )
    .map_err(to_py)?;
    Ok((cert.theta_max, cert.delta, cert.c_gamma, cert.satisfiable()))
}

/// Initial-layer profile with frozen density `rho0`; returns `(taus, h[tau][cell])`.
#[pyfunction]
fn initial_layer(rho0: Vec<f64>, h0: Vec<f64>, gamma: f64, tau_end: f64) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let rho0 = MacroField::new(rho0).map_err(to_py)?;
    let h0 = MacroField::new(h0).map_err(to_py)?;
    let p = initial_layer_solve(&rho0, &h0, gamma, tau_end).map_err(to_py)?;
    Ok((p.taus, p.values))
}

/// Error ladder of a configured experiment.
#[pyclass(frozen, get_all)]
struct SweepResult {
    experiment: String,
    epsilons: Vec<f64>,
    errors: Vec<f64>,
    fitted_order: Option<f64>,
    monotone: bool,
}

/// Runs the ε ladder described by a TOML configuration.
#[pyfunction]
#[pyo3(signature = (config, overrides = Vec::new(), jobs = 1))]
fn epsilon_sweep(py: Python<'_>, config: &str, overrides: Vec<String>, jobs: usize) -> PyResult<SweepResult> {
    let cfg = parse_config_with(config, &overrides).map_err(to_py)?;
    let experiment = cfg.experiment.unwrap_or(if cfg.gamma > 1.0 {
        Experiment::AlignedHyperbolic
    } else {
        Experiment::DiffusiveParabolic
    });
    let options = SweepOptions {
        k: cfg.orientation(),
        max_cells: cfg.max_cells,
        jobs,
        ..SweepOptions::default()
    };
    let s = py
        .detach(|| core_sweep(experiment, &cfg.initial, cfg.gamma, &cfg.epsilon, cfg.t_end, &options))
        .map_err(to_py)?;
    Ok(SweepResult {
        experiment: experiment.name().to_string(),
        epsilons: s.epsilons,
        errors: s.errors,
        fitted_order: s.fitted_order,
        monotone: s.monotone,
    })
}

/// Microscopic-scheme refinement; returns `(cells, errors, fitted_order)`.
#[pyfunction]
#[pyo3(signature = (config, overrides = Vec::new()))]
fn micro_refinement(
    py: Python<'_>,
    config: &str,
    overrides: Vec<String>,
) -> PyResult<(Vec<usize>, Vec<f64>, Option<f64>)> {
    let cfg = parse_config_with(config, &overrides).map_err(to_py)?;
    let s = py
        .detach(|| core_micro(&cfg.initial, cfg.gamma, &cfg.micro_cells, cfg.t_end, cfg.reference_cells))
        .map_err(to_py)?;
    Ok((s.cells, s.errors, s.fitted_order))
}

/// Validated configuration with defaults filled in, as TOML.
#[pyfunction]
#[pyo3(signature = (config, overrides = Vec::new()))]
fn normalize_config(config: &str, overrides: Vec<String>) -> PyResult<String> {
    let cfg = parse_config_with(config, &overrides).map_err(to_py)?;
    emit_config(&cfg).map_err(to_py)
}

/// Fast invariant suite; returns `(name, passed, detail)` per check.
#[pyfunction]
fn selftest(py: Python<'_>) -> Vec<(String, bool, String)> {
    py.detach(run_selftest)
        .into_iter()
        .map(|c| (c.name, c.pass, c.detail))
        .collect()
}

#[pymodule]
fn alignkin_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AlignkinError", m.py().get_type::<AlignkinError>())?;
    m.add_class::<Grid>()?;
    m.add_class::<KineticState>()?;
    m.add_class::<Trajectory>()?;
    m.add_class::<SweepResult>()?;
    m.add_function(wrap_pyfunction!(collision_q, m)?)?;
    m.add_function(wrap_pyfunction!(maxwellian, m)?)?;
    m.add_function(wrap_pyfunction!(solve_kinetic, m)?)?;
    m.add_function(wrap_pyfunction!(solve_homogeneous, m)?)?;
    m.add_function(wrap_pyfunction!(separation_constant, m)?)?;
    m.add_function(wrap_pyfunction!(layer_bound, m)?)?;
    m.add_function(wrap_pyfunction!(initial_layer, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(micro_refinement, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_config, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
