//! Adaptive Dormand–Prince 5(4) integrator for autonomous scalar ODEs.
//!
//! Used for the per-cell relaxation step and for the initial-layer profile;
//! both reduce to `y' = f(y)` on a bounded interval of admissible values.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Step-size controlled scalar integrator.
#[derive(Debug, Clone, Copy)]
pub struct ScalarIntegrator {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for ScalarIntegrator {
    fn default() -> Self {
        ScalarIntegrator {
            rtol: 1e-10,
            atol: 1e-300,
            max_steps: 1_000_000,
        }
    }
}

impl ScalarIntegrator {
    /// Integrates `y' = f(y)` from `y0` over a time span `span`, keeping the
    /// iterate inside `[lo, hi]`.
    pub fn integrate<F>(&self, y0: f64, span: f64, lo: f64, hi: f64, f: F) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let mut out = [0.0];
        self.integrate_to(y0, &[span], lo, hi, f, &mut out)?;
        Ok(out[0])
    }

    /// Integrates from time 0 and writes the solution at each of the
    /// nondecreasing, nonnegative `times` into `out`.
    pub fn integrate_to<F>(&self, y0: f64, times: &[f64], lo: f64, hi: f64, f: F, out: &mut [f64]) -> Result<()>
    where
        F: Fn(f64) -> f64,
    {
        debug_assert_eq!(times.len(), out.len());
        let clamp = |y: f64| y.clamp(lo, hi);
        let mut y = clamp(y0);
        let mut t = 0.0;
        let mut k1 = f(y);
        let mut h = f64::NAN;
        let mut steps = 0usize;

        for (slot, &target) in out.iter_mut().zip(times) {
            if target < t {
                return Err(Error::Integrator(format!(
                    "output times must be nondecreasing ({target} after {t})"
                )));
            }
            while t < target {
                if k1 == 0.0 {
                    // Autonomous equation at rest: the state is an equilibrium.
                    t = target;
                    break;
                }
                let remaining = target - t;
                if h.is_nan() {
                    let scale = y.abs().max(self.atol);
                    h = (0.05 * scale / k1.abs()).min(remaining);
                }
                let step = h.min(remaining);
                let last = step >= remaining;

                let k2 = f(clamp(y + step * A21 * k1));
                let k3 = f(clamp(y + step * (A31 * k1 + A32 * k2)));
                let k4 = f(clamp(y + step * (A41 * k1 + A42 * k2 + A43 * k3)));
                let k5 = f(clamp(y + step * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4)));
                let k6 = f(clamp(
                    y + step * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
                ));
                let y_new = y + step * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
                let k7 = f(clamp(y_new));
                let err_abs = (step * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)).abs();
                let scale = self.atol + self.rtol * y.abs().max(y_new.abs());
                let err = err_abs / scale;

                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::Integrator(format!(
                        "exceeded {} steps before reaching t = {target}",
                        self.max_steps
                    )));
                }

                if err <= 1.0 && y_new.is_finite() {
                    y = clamp(y_new);
                    t = if last { target } else { t + step };
                    k1 = if y == y_new { k7 } else { f(y) };
                    let factor = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    // A step shortened to hit an output time says little about
                    // the admissible size.
                    if !last || step >= h {
                        h = step * factor;
                    }
                } else {
                    let factor = if err.is_finite() {
                        (0.9 * err.powf(-0.2)).clamp(0.1, 0.5)
                    } else {
                        0.1
                    };
                    h = step * factor;
                    if h <= f64::EPSILON * t.abs().max(1e-300) {
                        return Err(Error::Integrator(format!("step size underflow at t = {t}")));
                    }
                }
            }
            *slot = y;
        }
        Ok(())
    }
}
