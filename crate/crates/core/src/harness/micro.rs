use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::fit::fit_order;
use crate::io::initial::{synthesize_initial, InitialDataSpec};
use crate::model::{Grid, KineticState, ModelParams, Scaling};
use crate::solver::kinetic::{solve_kinetic, step_count};
use crate::solver::micro::micro_run;

/// Errors of the microscopic scheme against a fine kinetic reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MicroStudy {
    pub gamma: f64,
    pub t_end: f64,
    pub reference_cells: usize,
    pub cells: Vec<usize>,
    pub errors: Vec<f64>,
    pub fitted_order: Option<f64>,
    pub fit_residual: Option<f64>,
}

/// Restricts a fine cell-centred field to a coarser grid whose cell count
/// divides it. Coarse centres fall on fine cell faces for even ratios, where
/// the two neighbours are averaged.
pub fn restrict(fine: &KineticState, coarse_cells: usize) -> Result<KineticState> {
    let n = fine.len();
    if coarse_cells == 0 || !n.is_multiple_of(coarse_cells) {
        return Err(Error::param("cells", format!("{coarse_cells} does not divide {n}")));
    }
    let r = n / coarse_cells;
    let pick = |v: &[f64]| -> Vec<f64> {
        (0..coarse_cells)
            .map(|i| {
                if r % 2 == 1 {
                    v[i * r + r / 2]
                } else {
                    0.5 * (v[i * r + r / 2 - 1] + v[i * r + r / 2])
                }
            })
            .collect()
    };
    KineticState::new(pick(fine.f_plus()), pick(fine.f_minus()))
}

/// Runs the microscopic scheme at each resolution up to `t_end` and compares
/// with `solve_kinetic` at `ε = 1` on `reference_cells` cells.
pub fn micro_refinement(
    spec: &InitialDataSpec,
    gamma: f64,
    cells: &[usize],
    t_end: f64,
    reference_cells: usize,
) -> Result<MicroStudy> {
    if cells.is_empty() {
        return Err(Error::param("cells", "at least one resolution is needed"));
    }
    let fine_grid = Grid::new(reference_cells)?;
    let params = ModelParams::new(gamma, 1.0, Scaling::Hyperbolic)?;
    let fine0 = synthesize_initial(spec, &fine_grid)?;
    let n_fine = step_count(t_end, fine_grid.dx())?;
    let reference = solve_kinetic(&fine0, &params, &fine_grid, t_end, n_fine.max(1))?;
    let reference = reference.last();
    let mut errors = Vec::with_capacity(cells.len());
    for &n in cells {
        let grid = Grid::new(n)?;
        let f0 = synthesize_initial(spec, &grid)?;
        let out = micro_run(&f0, gamma, &grid, step_count(t_end, grid.dx())?)?;
        let coarse_ref = restrict(reference, n)?;
        errors.push(crate::harness::norms::difference_norm(&out, &coarse_ref)?);
    }
    let (fitted_order, fit_residual) = if cells.len() >= 2 && errors.iter().all(|e| *e > 0.0) {
        let h: Vec<f64> = cells.iter().map(|n| 1.0 / *n as f64).collect();
        let (p, r) = fit_order(&h, &errors)?;
        (Some(p), Some(r))
    } else {
        (None, None)
    };
    Ok(MicroStudy {
        gamma,
        t_end,
        reference_cells,
        cells: cells.to_vec(),
        errors,
        fitted_order,
        fit_residual,
    })
}
