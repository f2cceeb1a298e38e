use crate::error::Result;
use crate::model::{Grid, KineticState};

/// Characteristic transform `f♯(t, j, x) = f(t, j, x + j t)` (or its inverse)
/// on the periodic grid. `t` must be a whole number of cells.
pub fn sharp_transform(state: &KineticState, t: f64, grid: &Grid, inverse: bool) -> Result<KineticState> {
    let mut cells = grid.cells_in(t)?;
    if inverse {
        cells = -cells;
    }
    let n = grid.n_cells();
    let plus = state.f_plus();
    let minus = state.f_minus();
    let f_plus = (0..n).map(|i| plus[grid.wrap(i as i64 + cells)]).collect();
    let f_minus = (0..n).map(|i| minus[grid.wrap(i as i64 - cells)]).collect();
    Ok(KineticState::from_parts_unchecked(f_plus, f_minus))
}

/// Free streaming by one cell: `f(+1)` moves right, `f(-1)` moves left.
#[inline]
pub(crate) fn stream_one_cell(plus: &mut [f64], minus: &mut [f64]) {
    plus.rotate_right(1);
    minus.rotate_left(1);
}
