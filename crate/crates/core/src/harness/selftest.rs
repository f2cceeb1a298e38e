//! Fast invariant suite shared by the command line and the bindings.

use std::f64::consts::PI;

use serde::Serialize;

use crate::asymptotics::{chapman_enskog_residual, collision_term, heat_solve, traveling_wave};
use crate::model::{
    collision_q, collision_r, maxwellian, project, EquilibriumKind, Grid, KineticState, MacroField, ModelParams,
    Orientation, Scaling, Subspace,
};
use crate::solver::{solve_homogeneous, solve_kinetic, HomogeneousState};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            pass,
            detail,
        }
    }
}

/// Deterministic positive sample in `[0.05, 5.05)` from an additive recurrence.
fn quasi_random(i: usize, stream: f64) -> f64 {
    0.05 + 5.0 * ((i as f64 + 1.0) * stream).fract()
}

fn algebra() -> Check {
    let mut worst = 0.0_f64;
    for gamma in [0.5, 2.0] {
        let params = ModelParams::new(gamma, 1.0, Scaling::Hyperbolic).expect("valid parameters");
        let plus: Vec<f64> = (0..1000).map(|i| quasi_random(i, 0.618_033_988_749_895)).collect();
        let minus: Vec<f64> = (0..1000).map(|i| quasi_random(i, 0.414_213_562_373_095)).collect();
        let state = KineticState::new(plus.clone(), minus.clone()).expect("positive samples");
        let q = collision_q(&state, &params).expect("finite input");
        let r = collision_r(&state, &params).expect("positive input");
        for i in 0..1000 {
            let scale = plus[i] + minus[i];
            worst = worst.max((q.plus[i] + q.minus[i]).abs() / scale);
            worst = worst.max((r.f_plus()[i] - plus[i] - q.plus[i]).abs() / scale);
            worst = worst.max((r.f_minus()[i] - minus[i] - q.minus[i]).abs() / scale);
            for kind in EquilibriumKind::ALL {
                let pair = (plus[i], minus[i]);
                let hydro = project(kind, pair, Subspace::Hydro);
                let kin = project(kind, pair, Subspace::Kinetic);
                worst = worst.max((hydro.0 + kin.0 - pair.0).abs().max((hydro.1 + kin.1 - pair.1).abs()) / scale);
                let twice = project(kind, hydro, Subspace::Hydro);
                worst = worst.max((twice.0 - hydro.0).abs().max((twice.1 - hydro.1).abs()) / scale);
            }
        }
        let rho = MacroField::new(plus).expect("nonnegative");
        for kind in EquilibriumKind::ALL {
            let m = maxwellian(kind, &rho).expect("nonnegative density");
            let qm = collision_q(&m, &params).expect("finite input");
            worst = qm.plus.iter().chain(&qm.minus).fold(worst, |w, v| w.max(v.abs()));
        }
    }
    Check::new("collision identities", worst <= 1e-12, format!("max relative defect {worst:.3e}"))
}

fn homogeneous() -> Check {
    let cases = [((2.0, 1.0), 2.0, (3.0, 0.0)), ((1.0, 2.0), 2.0, (0.0, 3.0)), ((2.0, 1.0), 0.5, (1.5, 1.5))];
    let mut worst_limit = 0.0_f64;
    let mut worst_mass = 0.0_f64;
    for ((a, b), gamma, (la, lb)) in cases {
        let traj = match solve_homogeneous(HomogeneousState { f1: a, f_minus1: b }, gamma, 50.0, 50) {
            Ok(t) => t,
            Err(e) => return Check::new("homogeneous limits", false, e.to_string()),
        };
        let last = traj.states.last().expect("nonempty trajectory");
        worst_limit = worst_limit.max((last.f1 - la).abs()).max((last.f_minus1 - lb).abs());
        for s in &traj.states {
            worst_mass = worst_mass.max((s.total() - a - b).abs() / (a + b));
        }
    }
    Check::new(
        "homogeneous limits",
        worst_limit <= 1e-6 && worst_mass <= 1e-12,
        format!("limit error {worst_limit:.3e}, mass drift {worst_mass:.3e}"),
    )
}

fn exact_solutions() -> Check {
    let grid = Grid::new(256).expect("positive cells");
    let params = ModelParams::new(2.0, 0.1, Scaling::Hyperbolic).expect("valid parameters");
    let mut worst = 0.0_f64;
    let constant = KineticState::constant(&grid, 1.3, 1.3).expect("nonnegative");
    let phi = |x: f64| 1.0 + 0.5 * (2.0 * PI * x).sin();
    let wave = KineticState::from_fn(&grid, |x| (phi(x), 0.0)).expect("nonnegative");
    let run = |f0: &KineticState| solve_kinetic(f0, &params, &grid, 2.0, 16);
    match (run(&constant), run(&wave)) {
        (Ok(a), Ok(b)) => {
            for s in &a.states {
                worst = s.f_plus().iter().map(|v| (v - 1.3).abs()).fold(worst, f64::max);
                worst = s.f_minus().iter().map(|v| (v - 1.3).abs()).fold(worst, f64::max);
            }
            let rho = MacroField::new(wave.f_plus().to_vec()).expect("nonnegative");
            for (t, s) in b.times.iter().zip(&b.states) {
                let exact = traveling_wave(&rho, Orientation::Plus, *t, &grid).expect("whole cells");
                worst = s.f_plus().iter().zip(exact.values()).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
                worst = s.f_minus().iter().fold(worst, |m, v| m.max(v.abs()));
            }
        }
        (Err(e), _) | (_, Err(e)) => return Check::new("exact solutions", false, e.to_string()),
    }
    Check::new("exact solutions", worst <= 1e-10, format!("sup error {worst:.3e}"))
}

fn heat_oracle() -> Check {
    let grid = Grid::new(64).expect("positive cells");
    let rho = MacroField::from_fn(&grid, |x| 1.0 + (2.0 * PI * x).cos()).expect("nonnegative");
    let (d, t) = (0.5, 0.05);
    let worst = match heat_solve(&rho, d, &[t], false) {
        Ok(out) => grid
            .centers()
            .iter()
            .zip(&out.fields[0])
            .map(|(x, v)| (v - 1.0 - (-4.0 * PI * PI * d * t).exp() * (2.0 * PI * x).cos()).abs())
            .fold(0.0, f64::max),
        Err(e) => return Check::new("heat single mode", false, e.to_string()),
    };
    Check::new("heat single mode", worst <= 1e-12, format!("sup error {worst:.3e}"))
}

fn chapman_enskog() -> Check {
    let grid = Grid::new(64).expect("positive cells");
    let rho = MacroField::from_fn(&grid, |x| 2.0 + (2.0 * PI * x).cos()).expect("nonnegative");
    let zero = MacroField::constant(&grid, 0.0).expect("nonnegative");
    let at_zero = chapman_enskog_residual(&rho, &zero, 2.0, 0.01, &grid).map(|r| r.collision);
    let mut worst = 0.0_f64;
    for eps in [1e-2, 1e-3, 1e-4] {
        let rel = (collision_term(1.0, eps, 2.0) + eps).abs() / eps;
        worst = worst.max(rel / (10.0 * eps));
    }
    let pass = at_zero == Ok(0.0) && worst <= 1.0;
    Check::new(
        "chapman-enskog residuals",
        pass,
        format!("collision at w=0 {at_zero:?}, worst relative error / bound {worst:.3e}"),
    )
}

/// Runs every check; all are sub-second.
pub fn run_selftest() -> Vec<Check> {
    vec![algebra(), homogeneous(), exact_solutions(), heat_oracle(), chapman_enskog()]
}
