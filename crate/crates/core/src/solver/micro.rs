use crate::error::{Error, Result};
use crate::model::{Grid, KineticState};

/// Switching probabilities `𝔓(j, x_i)` of the discrete majority-choice rule,
/// using neighbourhood densities `f(j, x - a) + f(j, x + a)` with `a = dx`.
pub fn switching_probabilities(state: &KineticState, dt: f64, gamma: f64, grid: &Grid) -> (Vec<f64>, Vec<f64>) {
    let n = grid.n_cells();
    let plus = state.f_plus();
    let minus = state.f_minus();
    let mut p_plus = vec![0.0; n];
    let mut p_minus = vec![0.0; n];
    for i in 0..n {
        let left = grid.wrap(i as i64 - 1);
        let right = grid.wrap(i as i64 + 1);
        let n_plus = plus[left] + plus[right];
        let n_minus = minus[left] + minus[right];
        if n_plus + n_minus > 0.0 {
            let gp = n_plus.powf(gamma);
            let gm = n_minus.powf(gamma);
            p_plus[i] = gm / (gm + gp) * dt;
            p_minus[i] = gp / (gm + gp) * dt;
        }
    }
    (p_plus, p_minus)
}

/// One step of the discrete-time microscopic scheme with `Δt = Δx`:
/// `f(t+Δt, j, x+jΔx) = f(t,-j,x) 𝔓(t,-j,x) + f(t,j,x) (1 - 𝔓(t,j,x))`.
pub fn micro_step(state: &KineticState, dt: f64, gamma: f64, grid: &Grid) -> Result<KineticState> {
    let n = grid.n_cells();
    if state.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: state.len(),
        });
    }
    if ((dt - grid.dx()) / grid.dx()).abs() > 1e-12 {
        return Err(Error::param(
            "dt",
            format!("the microscopic scheme needs dt = dx = {}, got {dt}", grid.dx()),
        ));
    }
    let (p_plus, p_minus) = switching_probabilities(state, dt, gamma, grid);
    for (cell, (&pp, &pm)) in p_plus.iter().zip(&p_minus).enumerate() {
        for (orientation, p) in [(1i8, pp), (-1i8, pm)] {
            if p > 1.0 {
                return Err(Error::ProbabilityOverflow {
                    cell,
                    orientation,
                    probability: p,
                });
            }
        }
    }
    let plus = state.f_plus();
    let minus = state.f_minus();
    let mut new_plus = vec![0.0; n];
    let mut new_minus = vec![0.0; n];
    for i in 0..n {
        new_plus[grid.wrap(i as i64 + 1)] = minus[i] * p_minus[i] + plus[i] * (1.0 - p_plus[i]);
        new_minus[grid.wrap(i as i64 - 1)] = plus[i] * p_plus[i] + minus[i] * (1.0 - p_minus[i]);
    }
    Ok(KineticState::from_parts_unchecked(new_plus, new_minus))
}

/// Runs `n_steps` microscopic steps with `Δt = Δx`.
pub fn micro_run(f0: &KineticState, gamma: f64, grid: &Grid, n_steps: usize) -> Result<KineticState> {
    let mut state = f0.clone();
    for _ in 0..n_steps {
        state = micro_step(&state, grid.dx(), gamma, grid)?;
    }
    Ok(state)
}
