//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Criteria run one after another so the wall-clock budgets are measured
//! without contention. Every tolerance is a named constant below.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use alignkin::asymptotics::{
    chapman_enskog_residual, collision_term, initial_layer_solve, layer_certificate, layer_derivative_decay,
    separation_constant, traveling_wave,
};
use alignkin::harness::{epsilon_sweep, micro_refinement, sandwich_check, Experiment, SweepOptions};
use alignkin::io::{ComponentSpec, InitialDataSpec};
use alignkin::solver::{monotone_solve, solve_homogeneous, solve_kinetic, HomogeneousState};
use alignkin::{
    collision_q, collision_r, maxwellian, project, EquilibriumKind, Grid, KineticState, MacroField, ModelParams,
    Orientation, Scaling, Subspace,
};

const ALGEBRA_TOL: f64 = 1e-12;
const ALGEBRA_STATES: usize = 1000;
const ALGEBRA_BUDGET: Duration = Duration::from_secs(1);

const HOMOGENEOUS_T: f64 = 50.0;
const HOMOGENEOUS_LIMIT_TOL: f64 = 1e-6;
const HOMOGENEOUS_MASS_TOL: f64 = 1e-12;
const HOMOGENEOUS_BUDGET: Duration = Duration::from_secs(1);

const EXACT_CELLS: usize = 256;
const EXACT_T: f64 = 2.0;
const EXACT_TOL: f64 = 1e-10;
const EXACT_BUDGET: Duration = Duration::from_secs(5);

const LADDER: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];
const ALIGNED_T: f64 = 1.0;
const ALIGNED_MIN_ORDER: f64 = 0.9;
/// Successive increments of `error/ε` must shrink at least by this factor,
/// so the ratio converges to a finite constant.
const RATIO_CONTRACTION: f64 = 0.75;
const SWEEP_BUDGET: Duration = Duration::from_secs(300);

const LAYER_CELLS: usize = 256;
const LAYER_TAU_END: f64 = 30.0;
const LAYER_SLACK: f64 = 1e-12;
const LAYER_BUDGET: Duration = Duration::from_secs(5);

const DIFFUSIVE_T: f64 = 0.1;

const MONOTONE_CELLS: usize = 64;
const MONOTONE_T: f64 = 1.0;
const MONOTONE_MU: f64 = 0.5;
const MONOTONE_GAP: f64 = 1e-8;
const MONOTONE_MAX_ITER: usize = 100;
const MONOTONE_ORDER_TOL: f64 = 1e-12;
const BOUND_SLACK: f64 = 0.01;
const MONOTONE_BUDGET: Duration = Duration::from_secs(30);

const MICRO_CELLS: [usize; 3] = [64, 128, 256];
const MICRO_T: f64 = 0.5;
const MICRO_REFERENCE_CELLS: usize = 2048;
const MICRO_MIN_ORDER: f64 = 0.8;
const MICRO_BUDGET: Duration = Duration::from_secs(30);

const CE_EPSILONS: [f64; 3] = [1e-2, 1e-3, 1e-4];
const CE_FACTOR: f64 = 10.0;
const CE_BUDGET: Duration = Duration::from_secs(1);

type Criterion = (&'static str, Duration, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn timed(budget: Duration, body: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let mut v = body();
    let elapsed = start.elapsed();
    v.detail = format!("{}; {:.2}s (budget {}s)", v.detail, elapsed.as_secs_f64(), budget.as_secs());
    v.pass &= elapsed <= budget;
    v
}

fn fail(e: impl std::fmt::Display) -> Verdict {
    Verdict {
        pass: false,
        detail: format!("error: {e}"),
    }
}

fn sup_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn aligned_spec() -> InitialDataSpec {
    InitialDataSpec::new(
        ComponentSpec::constant(5.0).with_mode(1, 1.0, 0.0),
        ComponentSpec::constant(0.5).with_mode(1, 0.2, 0.0),
    )
    .expect("positive data")
}

fn algebra() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let plus: Vec<f64> = (0..ALGEBRA_STATES).map(|_| rng.random_range(0.01..10.0)).collect();
    let minus: Vec<f64> = (0..ALGEBRA_STATES).map(|_| rng.random_range(0.01..10.0)).collect();
    let state = KineticState::new(plus.clone(), minus.clone()).expect("positive");
    let rho = MacroField::new(plus.clone()).expect("positive");
    let mut worst = 0.0_f64;
    for gamma in [0.5, 2.0, rng.random_range(0.1..0.99), rng.random_range(1.01..4.0)] {
        let params = ModelParams::new(gamma, 1.0, Scaling::Hyperbolic).expect("valid");
        let (q, r) = match (collision_q(&state, &params), collision_r(&state, &params)) {
            (Ok(q), Ok(r)) => (q, r),
            (Err(e), _) | (_, Err(e)) => return fail(e),
        };
        worst = worst.max(sup_abs(q.plus.iter().zip(&q.minus).map(|(a, b)| a + b)));
        worst = worst.max(sup_abs((0..ALGEBRA_STATES).map(|i| r.f_plus()[i] - plus[i] - q.plus[i])));
        worst = worst.max(sup_abs((0..ALGEBRA_STATES).map(|i| r.f_minus()[i] - minus[i] - q.minus[i])));
        for kind in EquilibriumKind::ALL {
            let m = maxwellian(kind, &rho).expect("nonnegative");
            let qm = collision_q(&m, &params).expect("finite");
            worst = worst.max(sup_abs(qm.plus.iter().chain(&qm.minus).copied()));
        }
    }
    for i in 0..ALGEBRA_STATES {
        let pair = (plus[i], minus[i]);
        for kind in EquilibriumKind::ALL {
            let p = project(kind, pair, Subspace::Hydro);
            let k = project(kind, pair, Subspace::Kinetic);
            let pp = project(kind, p, Subspace::Hydro);
            let kk = project(kind, k, Subspace::Kinetic);
            let pk = project(kind, k, Subspace::Hydro);
            worst = worst.max(sup_abs([
                p.0 + k.0 - pair.0,
                p.1 + k.1 - pair.1,
                pp.0 - p.0,
                pp.1 - p.1,
                kk.0 - k.0,
                kk.1 - k.1,
                pk.0,
                pk.1,
            ]));
        }
    }
    Verdict {
        pass: worst <= ALGEBRA_TOL,
        detail: format!("max defect {worst:.2e} <= {ALGEBRA_TOL:.0e} over {ALGEBRA_STATES} states"),
    }
}

fn homogeneous() -> Verdict {
    let cases = [((2.0, 1.0), 2.0, (3.0, 0.0)), ((1.0, 2.0), 2.0, (0.0, 3.0)), ((2.0, 1.0), 0.5, (1.5, 1.5))];
    let (mut limit, mut drift) = (0.0_f64, 0.0_f64);
    for ((a, b), gamma, (la, lb)) in cases {
        let traj = match solve_homogeneous(HomogeneousState { f1: a, f_minus1: b }, gamma, HOMOGENEOUS_T, 500) {
            Ok(t) => t,
            Err(e) => return fail(e),
        };
        let end = traj.states.last().expect("nonempty");
        limit = limit.max((end.f1 - la).abs()).max((end.f_minus1 - lb).abs());
        drift = drift.max(sup_abs(traj.states.iter().map(|s| s.total() - (a + b))));
    }
    Verdict {
        pass: limit <= HOMOGENEOUS_LIMIT_TOL && drift <= HOMOGENEOUS_MASS_TOL,
        detail: format!(
            "limit error {limit:.2e} <= {HOMOGENEOUS_LIMIT_TOL:.0e}, mass drift {drift:.2e} <= {HOMOGENEOUS_MASS_TOL:.0e}"
        ),
    }
}

fn exact_solutions() -> Verdict {
    let grid = Grid::new(EXACT_CELLS).expect("positive");
    let phi = |x: f64| 1.0 + 0.5 * (2.0 * PI * x).sin() + 0.2 * (6.0 * PI * x).cos();
    let rho = MacroField::from_fn(&grid, phi).expect("positive");
    let mut worst = 0.0_f64;
    for gamma in [0.5, 2.0] {
        for eps in [1.0, 0.1] {
            let params = ModelParams::new(gamma, eps, Scaling::Hyperbolic).expect("valid");
            for kind in EquilibriumKind::ALL {
                // constant equilibria
                let c = maxwellian(kind, &MacroField::constant(&grid, 1.3).expect("positive")).expect("valid");
                let traj = match solve_kinetic(&c, &params, &grid, EXACT_T, 1) {
                    Ok(t) => t,
                    Err(e) => return fail(e),
                };
                for s in &traj.states {
                    worst = worst.max(sup_abs(s.f_plus().iter().zip(c.f_plus()).map(|(a, b)| a - b)));
                    worst = worst.max(sup_abs(s.f_minus().iter().zip(c.f_minus()).map(|(a, b)| a - b)));
                }
            }
            for k in Orientation::BOTH {
                let wave = maxwellian(EquilibriumKind::Aligned(k), &rho).expect("valid");
                let traj = match solve_kinetic(&wave, &params, &grid, EXACT_T, 1) {
                    Ok(t) => t,
                    Err(e) => return fail(e),
                };
                for (t, s) in traj.times.iter().zip(&traj.states) {
                    let exact = traveling_wave(&rho, k, *t, &grid).expect("whole cells");
                    worst = worst.max(sup_abs(s.component(k).iter().zip(exact.values()).map(|(a, b)| a - b)));
                    worst = worst.max(sup_abs(s.component(-k).iter().copied()));
                }
            }
        }
    }
    Verdict {
        pass: worst <= EXACT_TOL,
        detail: format!("sup error {worst:.2e} <= {EXACT_TOL:.0e} (n={EXACT_CELLS}, T={EXACT_T})"),
    }
}

fn aligned_limit() -> Verdict {
    let s = match epsilon_sweep(
        Experiment::AlignedHyperbolic,
        &aligned_spec(),
        2.0,
        &LADDER,
        ALIGNED_T,
        &SweepOptions::default(),
    ) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let order = s.fitted_order.unwrap_or(f64::NAN);
    let ratios: Vec<f64> = s.errors.iter().zip(&s.epsilons).map(|(e, eps)| e / eps).collect();
    let increments: Vec<f64> = ratios.windows(2).map(|w| w[1] - w[0]).collect();
    let contracting = increments
        .windows(2)
        .all(|w| w[1].abs() <= RATIO_CONTRACTION * w[0].abs());
    let resolved = s.points.iter().all(|p| p.resolved);
    let pass = s.conditions.uniform_separation && s.monotone && order >= ALIGNED_MIN_ORDER && contracting;
    let errors: Vec<String> = s.errors.iter().map(|e| format!("{e:.4e}")).collect();
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    Verdict {
        pass,
        detail: format!(
            "errors [{}], monotone {}, order {order:.3} (need >= {ALIGNED_MIN_ORDER}), error/eps [{}] max {:.3}, \
             increments contract <= {RATIO_CONTRACTION}: {contracting}, grids resolved {resolved}",
            errors.join(", "),
            s.monotone,
            ratio_text.join(", "),
            s.max_error_ratio(),
        ),
    }
}

fn layer() -> Verdict {
    let grid = Grid::new(LAYER_CELLS).expect("positive");
    let spec = aligned_spec();
    let f_k = MacroField::from_fn(&grid, |x| spec.plus.eval(x)).expect("positive");
    let h0 = MacroField::from_fn(&grid, |x| spec.minus.eval(x)).expect("positive");
    let rho0 = MacroField::new(f_k.values().iter().zip(h0.values()).map(|(a, b)| a + b).collect()).expect("positive");
    let c_gamma = match separation_constant(2.0) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let cert = match layer_certificate(&f_k, &h0, 2.0, c_gamma) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let profile = match initial_layer_solve(&rho0, &h0, 2.0, LAYER_TAU_END) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let mut excess = f64::NEG_INFINITY;
    for (tau, h) in profile.taus.iter().zip(&profile.values) {
        for (v, b) in h.iter().zip(h0.values()) {
            excess = excess.max(v - b * (-cert.delta * tau).exp());
        }
    }
    let derivative = spec.plus.derivative_bound() + spec.minus.derivative_bound();
    let (rate, rate_text) = match layer_derivative_decay(&profile, &grid, derivative) {
        Ok(d) => (d.rate, format!("{:.3} over {:.1} decades", d.rate, d.decades)),
        Err(e) => (f64::NAN, e.to_string()),
    };
    Verdict {
        pass: cert.satisfiable() && excess <= LAYER_SLACK && rate > 0.0,
        detail: format!(
            "delta {:.4}, theta_max {:.4}, max(h - F(-1) e^(-delta tau)) {excess:.2e} <= {LAYER_SLACK:.0e}, \
             derivative decay rate {rate_text}",
            cert.delta, cert.theta_max
        ),
    }
}

fn diffusive_limit() -> Verdict {
    // diffusive Maxwellian of 1 + 0.5 cos(2 pi x)
    let half = ComponentSpec::constant(0.5).with_mode(1, 0.25, 0.0);
    let spec = InitialDataSpec::new(half.clone(), half).expect("positive");
    let s = match epsilon_sweep(
        Experiment::DiffusiveParabolic,
        &spec,
        0.5,
        &LADDER,
        DIFFUSIVE_T,
        &SweepOptions::default(),
    ) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let errors: Vec<String> = s.errors.iter().map(|e| format!("{e:.4e}")).collect();
    Verdict {
        pass: s.monotone,
        detail: format!(
            "errors [{}], strictly decreasing {}, fitted order {:.3} (informational)",
            errors.join(", "),
            s.monotone,
            s.fitted_order.unwrap_or(f64::NAN)
        ),
    }
}

fn monotone_oracle() -> Verdict {
    let grid = Grid::new(MONOTONE_CELLS).expect("positive");
    // both components touch MONOTONE_MU from above
    let f0 = KineticState::from_fn(&grid, |x| {
        (1.0 + 0.5 * (2.0 * PI * x).cos(), 0.8 + 0.3 * (2.0 * PI * x).sin())
    })
    .expect("positive");
    let mu = f0.min_value();
    let upper_bound = f0.sup_norm() * MONOTONE_T.exp() * (1.0 + BOUND_SLACK);
    let lower_bound = mu * (-MONOTONE_T).exp() * (1.0 - BOUND_SLACK);
    let mut pass = mu >= MONOTONE_MU;
    let mut parts = Vec::new();
    for gamma in [2.0, 0.5] {
        let bracket = match monotone_solve(&f0, gamma, &grid, MONOTONE_T, MONOTONE_GAP, MONOTONE_MAX_ITER, 1) {
            Ok(b) => b,
            Err(e) => return fail(e),
        };
        let params = ModelParams::new(gamma, 1.0, Scaling::Hyperbolic).expect("valid");
        let traj = match solve_kinetic(&f0, &params, &grid, MONOTONE_T, 1) {
            Ok(t) => t,
            Err(e) => return fail(e),
        };
        let sandwich = match sandwich_check(&bracket, &traj) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        for s in traj.states.iter().chain(&bracket.lower.states).chain(&bracket.upper.states) {
            lo = lo.min(s.min_value());
            hi = hi.max(s.sup_norm());
        }
        let ok = bracket.converged
            && bracket.gap <= MONOTONE_GAP
            && bracket.iterations <= MONOTONE_MAX_ITER
            && bracket.order_violation <= MONOTONE_ORDER_TOL
            && sandwich.pass
            && lo >= lower_bound
            && hi <= upper_bound;
        pass &= ok;
        parts.push(format!(
            "gamma {gamma}: gap {:.1e} after {} iterations, ordering breach {:.1e}, sandwich excess {:.1e} <= {:.1e}, \
             range [{lo:.3}, {hi:.3}] within [{lower_bound:.3}, {upper_bound:.3}]",
            bracket.gap, bracket.iterations, bracket.order_violation, sandwich.max_violation, sandwich.tolerance
        ));
    }
    Verdict {
        pass,
        detail: format!("mu {mu:.4}; {}", parts.join("; ")),
    }
}

fn micro_consistency() -> Verdict {
    let spec = InitialDataSpec::new(
        ComponentSpec::constant(1.0).with_mode(1, 0.4, 0.0),
        ComponentSpec::constant(0.8).with_mode(1, 0.2, 1.0),
    )
    .expect("positive");
    let mut pass = true;
    let mut parts = Vec::new();
    for gamma in [2.0, 0.5] {
        let m = match micro_refinement(&spec, gamma, &MICRO_CELLS, MICRO_T, MICRO_REFERENCE_CELLS) {
            Ok(m) => m,
            Err(e) => return fail(e),
        };
        let order = m.fitted_order.unwrap_or(f64::NAN);
        let decreasing = m.errors.windows(2).all(|w| w[1] < w[0]);
        pass &= decreasing && order >= MICRO_MIN_ORDER;
        let errors: Vec<String> = m.errors.iter().map(|e| format!("{e:.3e}")).collect();
        parts.push(format!("gamma {gamma}: errors [{}], order {order:.3}", errors.join(", ")));
    }
    Verdict {
        pass,
        detail: format!("{} (need >= {MICRO_MIN_ORDER})", parts.join("; ")),
    }
}

fn chapman_enskog() -> Verdict {
    let grid = Grid::new(64).expect("positive");
    let rho = MacroField::from_fn(&grid, |x| 2.0 + (2.0 * PI * x).cos()).expect("positive");
    let zero = MacroField::constant(&grid, 0.0).expect("nonnegative");
    let mut pass = true;
    let mut worst = 0.0_f64;
    for gamma in [1.5, 2.0, 3.0] {
        match chapman_enskog_residual(&rho, &zero, gamma, 0.01, &grid) {
            Ok(r) => pass &= r.collision == 0.0,
            Err(e) => return fail(e),
        }
        for eps in CE_EPSILONS {
            let bound = CE_FACTOR * eps.powf((gamma - 1.0).min(1.0));
            for (density, w1) in [(1.0, 0.5), (1.0, 1.0), (2.0, 2.0)] {
                let w = eps * w1;
                let rel = (collision_term(density, w, gamma) + w).abs() / w;
                worst = worst.max(rel / bound);
            }
        }
    }
    Verdict {
        pass: pass && worst <= 1.0,
        detail: format!("collision at w=0 exactly zero: {pass}; worst relative error / bound {worst:.3}"),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("algebraic identities", ALGEBRA_BUDGET, algebra),
        ("homogeneous asymptotics", HOMOGENEOUS_BUDGET, homogeneous),
        ("exact solutions", EXACT_BUDGET, exact_solutions),
        ("aligned limit", SWEEP_BUDGET, aligned_limit),
        ("layer certificates", LAYER_BUDGET, layer),
        ("diffusive limit", SWEEP_BUDGET, diffusive_limit),
        ("monotone oracle", MONOTONE_BUDGET, monotone_oracle),
        ("micro-scheme consistency", MICRO_BUDGET, micro_consistency),
        ("chapman-enskog residuals", CE_BUDGET, chapman_enskog),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let v = timed(*budget, run);
        println!("criterion {} [{}] {name}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
