use crate::error::{Error, Result};
use crate::model::KineticState;
use crate::solver::kinetic::Trajectory;

/// `Σ_j sup_x |a(j, x) - b(j, x)|`.
pub fn difference_norm(a: &KineticState, b: &KineticState) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let sup = |x: &[f64], y: &[f64]| x.iter().zip(y).fold(0.0_f64, |m, (p, q)| m.max((p - q).abs()));
    Ok(sup(a.f_plus(), b.f_plus()) + sup(a.f_minus(), b.f_minus()))
}

/// Largest difference norm over paired samples.
pub fn sup_error_states(a: &[KineticState], b: &[KineticState]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::SampleMismatch(format!(
            "{} samples against {} reference samples",
            a.len(),
            b.len()
        )));
    }
    a.iter()
        .zip(b)
        .try_fold(0.0_f64, |m, (x, y)| Ok(m.max(difference_norm(x, y)?)))
}

/// Sup-in-time error of a trajectory against states at the same sample times.
pub fn sup_error(traj: &Trajectory, reference: &[KineticState]) -> Result<f64> {
    if reference.iter().any(|s| s.len() != traj.grid.n_cells()) {
        return Err(Error::SampleMismatch("reference lives on a different grid".into()));
    }
    sup_error_states(&traj.states, reference)
}
