use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use alignkin::asymptotics::{
    heat_solve, initial_layer_solve, layer_certificate, layer_derivative_decay, separation_constant, DerivativeDecay,
    DiffusionRegime, DiffusionSpec, LayerCertificate,
};
use alignkin::harness::{
    epsilon_sweep, micro_refinement, run_selftest, Check, ErrorSeries, Experiment, MicroStudy,
    SweepOptions,
};
use alignkin::io::{parse_config_with, synthesize_initial, to_toml, trajectory_csv, write_text, RunConfig, SweepReport};
use alignkin::solver::{solve_homogeneous, solve_kinetic, HomogeneousState};
use alignkin::{mass, Error, MacroField, Orientation, Result};

/// Smallest fitted order accepted for the aligned ladder.
const ALIGNED_MIN_ORDER: f64 = 0.9;
/// Smallest fitted order accepted for the microscopic refinement.
const MICRO_MIN_ORDER: f64 = 0.8;
const LAYER_SLACK: f64 = 1e-12;

pub struct Context {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub overrides: Vec<String>,
    pub jobs: usize,
    pub unstable_demo: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

impl Context {
    fn load(&self) -> Result<RunConfig> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| Error::Config("--config <path> is required for this subcommand".into()))?;
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        parse_config_with(&text, &self.overrides)
    }

    fn out_dir(&self, config: Option<&RunConfig>) -> PathBuf {
        self.out
            .clone()
            .or_else(|| config.and_then(|c| c.output_dir.as_ref()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    write_text(&dir.join(name), text)
}

#[derive(Serialize)]
struct SimulationSummary<'a> {
    command: &'static str,
    samples: usize,
    mu: f64,
    /// Relative change of the total mass between the first and last sample.
    mass_drift: f64,
    min_value: f64,
    lower_bound: f64,
    config: &'a RunConfig,
}

pub fn simulate(ctx: &Context) -> Result<Outcome> {
    let config = ctx.load()?;
    let grid = config.grid()?;
    let params = config.params(0)?;
    let f0 = synthesize_initial(&config.initial, &grid)?;
    let traj = solve_kinetic(&f0, &params, &grid, config.t_end, config.sample_every.unwrap_or(1))?;
    let m0 = mass(&traj.states[0], &grid);
    let drift = traj
        .states
        .iter()
        .map(|s| (mass(s, &grid) - m0).abs() / m0.max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    let min_value = traj.states.iter().map(|s| s.min_value()).fold(f64::INFINITY, f64::min);
    let summary = SimulationSummary {
        command: "simulate",
        samples: traj.len(),
        mu: traj.mu,
        mass_drift: drift,
        min_value,
        lower_bound: traj.mu * (-config.t_end / params.epsilon()).exp(),
        config: &config,
    };
    let dir = ctx.out_dir(Some(&config));
    write(&dir, "trajectory.csv", &trajectory_csv(&traj))?;
    write(&dir, "run.toml", &to_toml(&summary)?)?;
    println!("simulate: {} samples, mass drift {drift:.3e}", traj.len());
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct HomogeneousSummary<'a> {
    command: &'static str,
    initial: HomogeneousState,
    limit: HomogeneousState,
    config: &'a RunConfig,
}

pub fn homogeneous(ctx: &Context) -> Result<Outcome> {
    let config = ctx.load()?;
    let h0 = HomogeneousState::new(config.initial.plus.mean, config.initial.minus.mean)?;
    let traj = solve_homogeneous(h0, config.gamma, config.t_end, 50)?;
    let mut csv = String::from("t,f1,f_minus1\n");
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let _ = writeln!(csv, "{t:.16e},{:.16e},{:.16e}", s.f1, s.f_minus1);
    }
    let last = *traj.states.last().expect("at least one sample");
    let dir = ctx.out_dir(Some(&config));
    write(&dir, "homogeneous.csv", &csv)?;
    write(
        &dir,
        "run.toml",
        &to_toml(&HomogeneousSummary {
            command: "homogeneous",
            initial: h0,
            limit: last,
            config: &config,
        })?,
    )?;
    println!("homogeneous: ({}, {}) -> ({:.12}, {:.12})", h0.f1, h0.f_minus1, last.f1, last.f_minus1);
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct LayerReport<'a> {
    certificate: LayerCertificate,
    /// Largest `h(τ, x) - F(-k, x) e^{-δτ}` over the samples.
    bound_excess: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivative_decay: Option<DerivativeDecay>,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivative_note: Option<String>,
    pass: bool,
    config: &'a RunConfig,
}

pub fn layer(ctx: &Context) -> Result<Outcome> {
    let config = ctx.load()?;
    let grid = config.grid()?;
    let k = config.orientation();
    let f = synthesize_initial(&config.initial, &grid)?;
    let major = MacroField::new(f.component(k).to_vec())?;
    let h0 = MacroField::new(f.component(-k).to_vec())?;
    let c_gamma = separation_constant(config.gamma)?;
    let certificate = layer_certificate(&major, &h0, config.gamma, c_gamma)?;
    let total = f.density();
    let profile = initial_layer_solve(&total, &h0, config.gamma, config.tau_end)?;

    let mut excess = f64::NEG_INFINITY;
    let mut csv = String::from("tau,x,h\n");
    let centers = grid.centers();
    for (tau, row) in profile.taus.iter().zip(&profile.values) {
        let decay = (-certificate.delta * tau).exp();
        for ((x, h), h_init) in centers.iter().zip(row).zip(h0.values()) {
            excess = excess.max(h - h_init * decay);
            let _ = writeln!(csv, "{tau:.16e},{x:.16e},{h:.16e}");
        }
    }
    let (major_spec, minor_spec) = match k {
        Orientation::Plus => (&config.initial.plus, &config.initial.minus),
        Orientation::Minus => (&config.initial.minus, &config.initial.plus),
    };
    let derivative_sup = major_spec.derivative_bound() + minor_spec.derivative_bound();
    let (derivative_decay, derivative_note) = match layer_derivative_decay(&profile, &grid, derivative_sup) {
        Ok(d) => (Some(d), None),
        Err(Error::InsufficientData(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    let pass = certificate.satisfiable()
        && excess <= LAYER_SLACK
        && derivative_decay.is_none_or(|d| d.rate > 0.0);
    let dir = ctx.out_dir(Some(&config));
    write(&dir, "layer.csv", &csv)?;
    write(
        &dir,
        "layer.toml",
        &to_toml(&LayerReport {
            certificate,
            bound_excess: excess,
            derivative_decay,
            derivative_note,
            pass,
            config: &config,
        })?,
    )?;
    println!(
        "layer: delta {:.6}, theta_max {:.6}, bound excess {excess:.3e}: {}",
        certificate.delta,
        certificate.theta_max,
        if pass { "pass" } else { "FAIL" }
    );
    Ok(Outcome::from_pass(pass))
}

fn experiment(config: &RunConfig) -> Result<Experiment> {
    config
        .experiment
        .ok_or_else(|| Error::Config("`experiment` must be set for this subcommand".into()))
}

fn sweep_options(ctx: &Context, config: &RunConfig) -> SweepOptions {
    SweepOptions {
        k: config.orientation(),
        max_cells: config.max_cells,
        jobs: ctx.jobs,
        ..SweepOptions::default()
    }
}

#[derive(Serialize)]
struct UnstableDemo<'a> {
    coefficient: f64,
    times: Vec<f64>,
    /// Amplification of wavenumbers 1, 2, 3 at the last time.
    mode_growth: Vec<f64>,
    /// `max |ϱ|` per time.
    max_abs: Vec<f64>,
    config: &'a RunConfig,
}

fn unstable_demo(ctx: &Context, config: &RunConfig) -> Result<Outcome> {
    let spec = DiffusionSpec::new(config.gamma, config.epsilon[0], DiffusionRegime::ParabolicZeroth, true)?;
    let grid = config.grid()?;
    let rho0 = synthesize_initial(&config.initial, &grid)?.density();
    let horizon = 0.01_f64.min(config.t_end.max(1e-3));
    let times: Vec<f64> = (0..=10).map(|i| horizon * i as f64 / 10.0).collect();
    let series = heat_solve(&rho0, spec.coefficient, &times, true)?;
    let mode_growth = (1..=3)
        .map(|m| (-4.0 * PI * PI * (m * m) as f64 * spec.coefficient * horizon).exp())
        .collect();
    let max_abs = series
        .fields
        .iter()
        .map(|f| f.iter().fold(0.0_f64, |a, v| a.max(v.abs())))
        .collect();
    let demo = UnstableDemo {
        coefficient: spec.coefficient,
        times,
        mode_growth,
        max_abs,
        config,
    };
    write(&ctx.out_dir(Some(config)), "unstable_demo.toml", &to_toml(&demo)?)?;
    println!("unstable demo: D = {}, mode 1 grows by {:.3e}", demo.coefficient, demo.mode_growth[0]);
    Ok(Outcome::Pass)
}

fn series_passes(series: &ErrorSeries) -> bool {
    match series.experiment {
        Experiment::AlignedHyperbolic => {
            series.monotone && series.fitted_order.is_none_or(|p| p >= ALIGNED_MIN_ORDER)
        }
        Experiment::DiffusiveParabolic => series.monotone,
    }
}

pub fn limit_check(ctx: &Context) -> Result<Outcome> {
    let config = ctx.load()?;
    let exp = experiment(&config)?;
    if exp == Experiment::DiffusiveParabolic && config.gamma > 1.0 {
        if ctx.unstable_demo {
            return unstable_demo(ctx, &config);
        }
        DiffusionSpec::new(config.gamma, config.epsilon[0], DiffusionRegime::ParabolicZeroth, false)?;
    }
    let series = epsilon_sweep(
        exp,
        &config.initial,
        config.gamma,
        &config.epsilon[..1],
        config.t_end,
        &sweep_options(ctx, &config),
    )?;
    let pass = series.errors[0].is_finite();
    write(
        &ctx.out_dir(Some(&config)),
        "limit.toml",
        &to_toml(&SweepReport::new(&series, pass, &config))?,
    )?;
    println!(
        "limit-check {}: epsilon {} error {:.6e} (error/epsilon {:.4})",
        exp.name(),
        series.epsilons[0],
        series.errors[0],
        series.errors[0] / series.epsilons[0]
    );
    Ok(Outcome::from_pass(pass))
}

pub fn sweep(ctx: &Context) -> Result<Outcome> {
    let config = ctx.load()?;
    let exp = experiment(&config)?;
    if exp == Experiment::DiffusiveParabolic && config.gamma > 1.0 && ctx.unstable_demo {
        return unstable_demo(ctx, &config);
    }
    let series = epsilon_sweep(
        exp,
        &config.initial,
        config.gamma,
        &config.epsilon,
        config.t_end,
        &sweep_options(ctx, &config),
    )?;
    let pass = series_passes(&series);
    write(
        &ctx.out_dir(Some(&config)),
        "sweep.toml",
        &to_toml(&SweepReport::new(&series, pass, &config))?,
    )?;
    for (e, err) in series.epsilons.iter().zip(&series.errors) {
        println!("epsilon {e:<10} error {err:.6e}");
    }
    match series.fitted_order {
        Some(p) => println!("fitted order {p:.4}: {}", if pass { "pass" } else { "FAIL" }),
        None => println!("single epsilon, no order fitted: {}", if pass { "pass" } else { "FAIL" }),
    }
    Ok(Outcome::from_pass(pass))
}

#[derive(Serialize)]
struct MicroReport<'a> {
    study: MicroStudy,
    pass: bool,
    config: &'a RunConfig,
}

pub fn micro(ctx: &Context) -> Result<Outcome> {
    let config = ctx.load()?;
    let study = micro_refinement(
        &config.initial,
        config.gamma,
        &config.micro_cells,
        config.t_end,
        config.reference_cells,
    )?;
    let pass = study.fitted_order.is_some_and(|p| p >= MICRO_MIN_ORDER);
    for (n, e) in study.cells.iter().zip(&study.errors) {
        println!("cells {n:<6} error {e:.6e}");
    }
    let report = MicroReport {
        study,
        pass,
        config: &config,
    };
    write(&ctx.out_dir(Some(&config)), "micro.toml", &to_toml(&report)?)?;
    Ok(Outcome::from_pass(pass))
}

#[derive(Serialize)]
struct SelftestReport {
    checks: Vec<Check>,
    pass: bool,
}

pub fn selftest(ctx: &Context) -> Result<Outcome> {
    let checks = run_selftest();
    for c in &checks {
        println!("[{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    let pass = checks.iter().all(|c| c.pass);
    if let Some(dir) = &ctx.out {
        write(dir, "selftest.toml", &to_toml(&SelftestReport { checks, pass })?)?;
    }
    Ok(Outcome::from_pass(pass))
}
