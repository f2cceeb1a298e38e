use serde::Serialize;

use crate::error::{Error, Result};

/// Ordinary least-squares line through `(x, y)` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square vertical residual.
    pub rms_residual: f64,
}

pub fn least_squares(points: &[(f64, f64)]) -> Result<LineFit> {
    if points.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "a line fit needs at least two points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
        return Err(Error::InsufficientData("fit points must be finite".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("fit abscissae are all equal".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(LineFit {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    })
}

/// Exponent `p` of `error ≈ C h^p`, fitted on logarithms, with the RMS residual.
pub fn fit_order(h: &[f64], errors: &[f64]) -> Result<(f64, f64)> {
    if h.len() != errors.len() {
        return Err(Error::LengthMismatch {
            expected: h.len(),
            got: errors.len(),
        });
    }
    if h.iter().chain(errors).any(|v| !(*v > 0.0)) {
        return Err(Error::InsufficientData(
            "order fits need strictly positive step sizes and errors".into(),
        ));
    }
    let points: Vec<(f64, f64)> = h.iter().zip(errors).map(|(a, b)| (a.ln(), b.ln())).collect();
    let fit = least_squares(&points)?;
    Ok((fit.slope, fit.rms_residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let h = [0.1, 0.05, 0.025, 0.0125];
        let e: Vec<f64> = h.iter().map(|x| 3.0 * x * x).collect();
        let (p, r) = fit_order(&h, &e).unwrap();
        assert!((p - 2.0).abs() < 1e-12 && r < 1e-12);
    }

    #[test]
    fn single_point_rejected() {
        assert!(matches!(fit_order(&[0.1], &[0.2]), Err(Error::InsufficientData(_))));
        assert!(fit_order(&[0.1, 0.05], &[0.0, 0.1]).is_err());
    }

    #[test]
    fn residual_of_noisy_data() {
        let fit = least_squares(&[(0.0, 0.0), (1.0, 2.0), (2.0, 2.0)]).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-15);
        assert!(fit.rms_residual > 0.0);
    }
}
