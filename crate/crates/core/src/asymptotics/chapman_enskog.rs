//! Residuals of the hydrodynamic/kinetic split of the aligned regime.
//!
//! With `ϱ = f(k) + f(-k)` and `w = f(-k)` the kinetic equation (for `k = +1`)
//! reads `∂t ϱ + ∂x(ϱ - 2w) = 0` and `∂t w - ∂x w = C(ϱ, w)/ε`. Candidate
//! pairs are tested with `ϱ` transported at unit speed and `w` slaved to it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{exchange_rate, validate_gamma, Grid, MacroField};

/// `C(ϱ, w) = ((ϱ - w) w^γ - w (ϱ - w)^γ) / ((ϱ - w)^γ + w^γ)`, zero on empty cells.
pub fn collision_term(rho: f64, w: f64, gamma: f64) -> f64 {
    if rho <= 0.0 {
        return 0.0;
    }
    exchange_rate(rho, w, gamma)
}

/// Sup-norm residuals of a candidate `(ϱ, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CeResidual {
    /// `sup |2 ∂x w|`: mass equation after `∂t ϱ = -∂x ϱ` is substituted.
    pub hydrodynamic: f64,
    /// `sup |-2ε ∂x w - C(ϱ, w)|`: kinetic equation multiplied by `ε`.
    pub kinetic: f64,
    /// `sup |C(ϱ, w)|`.
    pub collision: f64,
}

pub fn chapman_enskog_residual(
    rho: &MacroField,
    w: &MacroField,
    gamma: f64,
    epsilon: f64,
    grid: &Grid,
) -> Result<CeResidual> {
    validate_gamma(gamma)?;
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::param("epsilon", format!("must be positive, got {epsilon}")));
    }
    for field in [rho, w] {
        if field.len() != grid.n_cells() {
            return Err(Error::LengthMismatch {
                expected: grid.n_cells(),
                got: field.len(),
            });
        }
    }
    let (r, wv) = (rho.values(), w.values());
    if let Some(cell) = r.iter().zip(wv).position(|(r, w)| !(*w >= 0.0 && w <= r)) {
        return Err(Error::Precondition {
            cell,
            reason: format!("kinetic part {} outside [0, {}]", wv[cell], r[cell]),
        });
    }
    let inv = 1.0 / (2.0 * grid.dx());
    let mut out = CeResidual {
        hydrodynamic: 0.0,
        kinetic: 0.0,
        collision: 0.0,
    };
    for i in 0..grid.n_cells() {
        let dw = (wv[grid.wrap(i as i64 + 1)] - wv[grid.wrap(i as i64 - 1)]) * inv;
        let c = collision_term(r[i], wv[i], gamma);
        out.hydrodynamic = out.hydrodynamic.max((2.0 * dw).abs());
        out.kinetic = out.kinetic.max((-2.0 * epsilon * dw - c).abs());
        out.collision = out.collision.max(c.abs());
    }
    Ok(out)
}
