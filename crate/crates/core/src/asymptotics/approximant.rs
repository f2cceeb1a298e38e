//! Composite bulk + layer approximation of the aligned regime.
//!
//! The bulk is the total initial density carried along orientation `k`; the
//! layer `h(t/ε, x)` drains the opposite orientation into it. Component `k`
//! is `ϱ₀(x - kt) - h`, component `-k` is `h`, so at `t = 0` the pair equals
//! the initial datum exactly.

use serde::Serialize;

use crate::asymptotics::layer::{integrate_layer, layer_certificate, separation_constant, LayerCertificate};
use crate::asymptotics::wave::traveling_wave;
use crate::error::{Error, Result};
use crate::model::{Grid, KineticState, MacroField, Orientation};

#[derive(Debug, Clone, Serialize)]
pub struct CompositeApproximant {
    pub k: Orientation,
    pub gamma: f64,
    pub epsilon: f64,
    pub grid: Grid,
    /// `F(k) + F(-k)`: transported by the bulk and frozen in the layer equation.
    pub rho0: MacroField,
    /// Majority datum `F(k)`.
    pub f_k: MacroField,
    /// Layer datum `F(-k)`.
    pub h0: MacroField,
    pub certificate: LayerCertificate,
}

impl CompositeApproximant {
    /// Requires `γ > 1` and `F(k) > c_γ F(-k)` in every cell. Cells with
    /// `F(-k) = 0` carry no layer at all.
    pub fn new(f: &KineticState, k: Orientation, gamma: f64, epsilon: f64, grid: &Grid) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::param("epsilon", format!("must be positive, got {epsilon}")));
        }
        if f.len() != grid.n_cells() {
            return Err(Error::LengthMismatch {
                expected: grid.n_cells(),
                got: f.len(),
            });
        }
        let c_gamma = separation_constant(gamma)?;
        let f_k = f.component(k);
        let f_mk = f.component(-k);
        if let Some(cell) = f_k.iter().zip(f_mk).position(|(a, b)| *a <= c_gamma * b) {
            return Err(Error::Precondition {
                cell,
                reason: format!(
                    "F(k) = {} does not dominate c_gamma * F(-k) = {}",
                    f_k[cell],
                    c_gamma * f_mk[cell]
                ),
            });
        }
        let rho0 = MacroField::from_vec_unchecked(f_k.iter().zip(f_mk).map(|(a, b)| a + b).collect());
        let h0 = MacroField::from_vec_unchecked(f_mk.to_vec());
        let f_k = MacroField::from_vec_unchecked(f_k.to_vec());
        let certificate = layer_certificate(&f_k, &h0, gamma, c_gamma)?;
        Ok(CompositeApproximant {
            k,
            gamma,
            epsilon,
            grid: *grid,
            rho0,
            f_k,
            h0,
            certificate,
        })
    }

    /// Evaluates the approximant at nondecreasing times, each a whole number of cells.
    pub fn at_times(&self, times: &[f64]) -> Result<Vec<KineticState>> {
        if times.windows(2).any(|w| w[1] < w[0]) || times.iter().any(|t| !(*t >= 0.0)) {
            return Err(Error::param("times", "must be nonnegative and nondecreasing"));
        }
        let taus: Vec<f64> = times.iter().map(|t| t / self.epsilon).collect();
        let layer = integrate_layer(self.rho0.values(), self.h0.values(), self.gamma, &taus)?;
        times
            .iter()
            .zip(layer)
            .map(|(&t, h)| {
                // F(k)(x - kt) + (F(-k)(x - kt) - h): exact at t = 0 in floating point
                let major_wave = traveling_wave(&self.f_k, self.k, t, &self.grid)?;
                let minor_wave = traveling_wave(&self.h0, self.k, t, &self.grid)?;
                let major: Vec<f64> = major_wave
                    .values()
                    .iter()
                    .zip(minor_wave.values())
                    .zip(&h)
                    .map(|((a, b), h)| a + (b - h))
                    .collect();
                match self.k {
                    Orientation::Plus => KineticState::new(major, h),
                    Orientation::Minus => KineticState::new(h, major),
                }
            })
            .collect()
    }

    pub fn at(&self, t: f64) -> Result<KineticState> {
        Ok(self.at_times(&[t])?.remove(0))
    }
}

/// One-shot evaluation of the composite approximant at time `t`.
pub fn aligned_approximant(
    f: &KineticState,
    k: Orientation,
    gamma: f64,
    epsilon: f64,
    t: f64,
    grid: &Grid,
) -> Result<KineticState> {
    CompositeApproximant::new(f, k, gamma, epsilon, grid)?.at(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn datum(grid: &Grid) -> KineticState {
        KineticState::from_fn(grid, |x| {
            let c = (2.0 * PI * x).cos();
            (5.0 + c, 0.5 + 0.2 * c)
        })
        .unwrap()
    }

    #[test]
    fn reproduces_datum_at_zero() {
        let grid = Grid::new(32).unwrap();
        let f = datum(&grid);
        for k in Orientation::BOTH {
            let g = if k == Orientation::Plus { f.clone() } else { f.swapped() };
            let a = aligned_approximant(&g, k, 2.0, 0.1, 0.0, &grid).unwrap();
            assert_eq!(a, g);
        }
    }

    #[test]
    fn late_times_approach_traveling_wave() {
        let grid = Grid::new(32).unwrap();
        let f = datum(&grid);
        let approx = CompositeApproximant::new(&f, Orientation::Plus, 2.0, 0.01, &grid).unwrap();
        let t = 0.5;
        let state = approx.at(t).unwrap();
        let bound = f.f_minus().iter().fold(0.0_f64, |m, v| m.max(*v)) * (-approx.certificate.delta * t / 0.01).exp();
        assert!(state.f_minus().iter().all(|v| *v <= bound));
        let wave = traveling_wave(&approx.rho0, Orientation::Plus, t, &grid).unwrap();
        for (a, b) in state.f_plus().iter().zip(wave.values()) {
            assert!((a - b).abs() <= bound);
        }
    }

    #[test]
    fn empty_minority_gives_pure_wave() {
        let grid = Grid::new(16).unwrap();
        let f = KineticState::from_fn(&grid, |x| (2.0 + (2.0 * PI * x).sin(), 0.0)).unwrap();
        let approx = CompositeApproximant::new(&f, Orientation::Plus, 2.0, 0.05, &grid).unwrap();
        for s in approx.at_times(&[0.0, 0.25, 0.5]).unwrap() {
            assert!(s.f_minus().iter().all(|v| *v == 0.0));
        }
        let s = approx.at(0.25).unwrap();
        let wave = traveling_wave(&MacroField::new(f.f_plus().to_vec()).unwrap(), Orientation::Plus, 0.25, &grid).unwrap();
        assert_eq!(s.f_plus(), wave.values());
    }

    #[test]
    fn separation_failure_rejected() {
        let grid = Grid::new(8).unwrap();
        let f = KineticState::constant(&grid, 4.0, 1.0).unwrap();
        assert!(matches!(
            aligned_approximant(&f, Orientation::Plus, 2.0, 0.1, 0.0, &grid),
            Err(Error::Precondition { cell: 0, .. })
        ));
        assert!(aligned_approximant(&f, Orientation::Plus, 0.5, 0.1, 0.0, &grid).is_err());
    }
}
