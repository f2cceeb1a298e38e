use crate::error::{Error, Result};
use crate::model::{Grid, MacroField, Orientation};

/// `ϱ(t, x) = F(k, x - k t)` for sampled `F`; `t` must be a whole number of cells.
pub fn traveling_wave(f_k: &MacroField, k: Orientation, t: f64, grid: &Grid) -> Result<MacroField> {
    if f_k.len() != grid.n_cells() {
        return Err(Error::LengthMismatch {
            expected: grid.n_cells(),
            got: f_k.len(),
        });
    }
    let shift = grid.cells_in(t)? * i64::from(k.sign());
    let values = f_k.values();
    Ok(MacroField::from_vec_unchecked(
        (0..grid.n_cells())
            .map(|i| values[grid.wrap(i as i64 - shift)])
            .collect(),
    ))
}

/// Traveling wave of an analytically given profile, evaluated at the cell
/// centres for any `t`.
pub fn traveling_wave_fn(profile: impl Fn(f64) -> f64, k: Orientation, t: f64, grid: &Grid) -> Result<MacroField> {
    let kt = k.as_f64() * t;
    MacroField::from_fn(grid, |x| profile((x - kt).rem_euclid(1.0)))
}
