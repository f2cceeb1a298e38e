use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MacroField;

/// Which macroscopic diffusion approximation of the isotropic regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffusionRegime {
    /// Zeroth order under hyperbolic scaling: `∂t ϱ = 0`.
    EulerHyperbolic,
    /// First order under hyperbolic scaling: `∂t ϱ = ε/(1-γ) ∂x² ϱ`.
    NsHyperbolic,
    /// Zeroth order under parabolic scaling: `∂t ϱ = 1/(1-γ) ∂x² ϱ`.
    ParabolicZeroth,
}

pub fn diffusion_coefficient(gamma: f64, epsilon: f64, regime: DiffusionRegime) -> Result<f64> {
    crate::model::validate_gamma(gamma)?;
    Ok(match regime {
        DiffusionRegime::EulerHyperbolic => 0.0,
        DiffusionRegime::NsHyperbolic => epsilon / (1.0 - gamma),
        DiffusionRegime::ParabolicZeroth => 1.0 / (1.0 - gamma),
    })
}

/// A diffusion coefficient together with its provenance. For `γ > 1` the
/// coefficient is negative (backward diffusion) and construction is refused
/// unless `allow_backward` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffusionSpec {
    pub coefficient: f64,
    pub regime: DiffusionRegime,
    pub backward: bool,
}

impl DiffusionSpec {
    pub fn new(gamma: f64, epsilon: f64, regime: DiffusionRegime, allow_backward: bool) -> Result<Self> {
        let coefficient = diffusion_coefficient(gamma, epsilon, regime)?;
        let backward = coefficient < 0.0;
        if backward && !allow_backward {
            return Err(Error::param(
                "gamma",
                format!("gamma = {gamma} > 1 gives backward diffusion (D = {coefficient}); enable the unstable demo to run it"),
            ));
        }
        Ok(DiffusionSpec {
            coefficient,
            regime,
            backward,
        })
    }
}

/// Macroscopic density sampled at a list of times. Values are not
/// constrained to be nonnegative so the backward-diffusion demo fits here too.
#[derive(Debug, Clone, Serialize)]
pub struct MacroSeries {
    pub times: Vec<f64>,
    pub fields: Vec<Vec<f64>>,
}

/// Solves `∂t ϱ = D ∂x² ϱ` on the unit torus by exact evolution of each
/// discrete Fourier mode. `D ≤ 0` is only accepted with `allow_backward`.
pub fn heat_solve(rho0: &MacroField, d: f64, times: &[f64], allow_backward: bool) -> Result<MacroSeries> {
    if !d.is_finite() || (d <= 0.0 && !allow_backward) {
        return Err(Error::param(
            "D",
            format!("diffusion coefficient must be positive, got {d}"),
        ));
    }
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::param("times", "sample times must be finite and nonnegative"));
    }
    let n = rho0.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut spectrum: Vec<Complex<f64>> = rho0.values().iter().map(|&r| Complex::new(r, 0.0)).collect();
    forward.process(&mut spectrum);
    let wavenumbers: Vec<f64> = (0..n)
        .map(|k| if k <= n / 2 { k as f64 } else { k as f64 - n as f64 })
        .collect();

    let mut fields = Vec::with_capacity(times.len());
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    for &t in times {
        for ((b, s), m) in buf.iter_mut().zip(&spectrum).zip(&wavenumbers) {
            let rate = 4.0 * PI * PI * m * m * d;
            *b = *s * (-rate * t).exp();
        }
        // mode zero carries the mass and is left untouched
        buf[0] = spectrum[0];
        inverse.process(&mut buf);
        let scale = 1.0 / n as f64;
        fields.push(buf.iter().map(|c| c.re * scale).collect());
    }
    Ok(MacroSeries {
        times: times.to_vec(),
        fields,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Grid;

    #[test]
    fn coefficient_examples() {
        let d = diffusion_coefficient(0.5, 0.1, DiffusionRegime::NsHyperbolic).unwrap();
        assert!((d - 0.2).abs() < 1e-15);
        assert_eq!(
            diffusion_coefficient(0.5, 0.3, DiffusionRegime::ParabolicZeroth).unwrap(),
            2.0
        );
        assert_eq!(
            diffusion_coefficient(0.5, 0.3, DiffusionRegime::EulerHyperbolic).unwrap(),
            0.0
        );
        assert!(diffusion_coefficient(2.0, 0.1, DiffusionRegime::NsHyperbolic).unwrap() < 0.0);
        assert!(diffusion_coefficient(1.0, 0.1, DiffusionRegime::NsHyperbolic).is_err());
    }

    #[test]
    fn backward_spec_is_gated() {
        assert!(DiffusionSpec::new(2.0, 0.1, DiffusionRegime::ParabolicZeroth, false).is_err());
        let spec = DiffusionSpec::new(2.0, 0.1, DiffusionRegime::ParabolicZeroth, true).unwrap();
        assert!(spec.backward && spec.coefficient == -1.0);
    }

    #[test]
    fn constant_stays_constant() {
        let grid = Grid::new(16).unwrap();
        let rho = MacroField::constant(&grid, 1.7).unwrap();
        let out = heat_solve(&rho, 0.3, &[0.0, 0.5, 2.0], false).unwrap();
        for f in &out.fields {
            assert!(f.iter().all(|v| (v - 1.7).abs() < 1e-14));
        }
    }

    #[test]
    fn single_mode_decays_exactly() {
        let grid = Grid::new(64).unwrap();
        let two_pi = 2.0 * PI;
        let rho = MacroField::from_fn(&grid, |x| 1.0 + (two_pi * x).cos()).unwrap();
        let (d, t) = (0.7, 0.05);
        let out = heat_solve(&rho, d, &[t], false).unwrap();
        let decay = (-4.0 * PI * PI * d * t).exp();
        for (x, v) in grid.centers().iter().zip(&out.fields[0]) {
            assert!((v - (1.0 + decay * (two_pi * x).cos())).abs() < 1e-13);
        }
    }

    #[test]
    fn two_modes_decay_independently() {
        let grid = Grid::new(32).unwrap();
        let two_pi = 2.0 * PI;
        let rho = MacroField::from_fn(&grid, |x| 1.0 + (two_pi * x).cos() + 0.25 * (2.0 * two_pi * x).cos()).unwrap();
        let (d, t) = (0.2, 0.1);
        let out = heat_solve(&rho, d, &[t], false).unwrap();
        let r1 = (-4.0 * PI * PI * d * t).exp();
        let r2 = (-16.0 * PI * PI * d * t).exp();
        for (x, v) in grid.centers().iter().zip(&out.fields[0]) {
            let exact = 1.0 + r1 * (two_pi * x).cos() + 0.25 * r2 * (2.0 * two_pi * x).cos();
            assert!((v - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn nonpositive_coefficient_rejected_without_flag() {
        let grid = Grid::new(8).unwrap();
        let rho = MacroField::constant(&grid, 1.0).unwrap();
        assert!(heat_solve(&rho, 0.0, &[1.0], false).is_err());
        assert!(heat_solve(&rho, -1.0, &[0.01], true).is_ok());
    }
}
