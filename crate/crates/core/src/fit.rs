//! Least-squares straight-line fits in log coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Line `y = slope x + intercept` fitted to `npoints` samples.
/// `max_residual` is the largest `|y_i - fit(x_i)|` converted to log₁₀ units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub npoints: usize,
}

/// Ordinary least squares on `(x, y)` where `y` is a logarithm in base
/// `log_base` (so residuals can be reported in decades).
pub fn fit_line(points: &[(f64, f64)], log_base: f64) -> Result<ExponentFit> {
    let finite: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|p| p.0.is_finite() && p.1.is_finite())
        .collect();
    if finite.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 finite points, got {}",
            finite.len()
        )));
    }
    let n = finite.len() as f64;
    let mx = finite.iter().map(|p| p.0).sum::<f64>() / n;
    let my = finite.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = finite.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let sxy: f64 = finite.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let to_decades = log_base.log10();
    let max_residual = finite
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs() * to_decades)
        .fold(0.0, f64::max);
    Ok(ExponentFit {
        slope,
        intercept,
        max_residual,
        npoints: finite.len(),
    })
}

/// Fit `log|y| = slope log x + c` to positive samples (natural logs).
pub fn fit_power_law(samples: &[(f64, f64)]) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.0 > 0.0 && s.1 > 0.0)
        .map(|s| (s.0.ln(), s.1.ln()))
        .collect();
    fit_line(&pts, std::f64::consts::E)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn too_few_points() {
        assert!(matches!(
            fit_line(&[(0.0, 1.0), (1.0, 2.0)], 2.0),
            Err(Error::DegenerateFit(_))
        ));
        assert!(fit_line(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)], 2.0).is_err());
    }

    #[test]
    fn residual_in_decades() {
        // one point off by ln 10 in natural-log units is one decade
        let pts = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)];
        let f = fit_line(&pts, std::f64::consts::E).unwrap();
        assert_eq!(f.max_residual, 0.0);
        let g = fit_power_law(&[(1.0, 1.0), (2.0, 0.25), (4.0, 1.0 / 16.0)]).unwrap();
        assert!((g.slope + 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn recovers_exact_lines(slope in -5.0f64..5.0, c in -10.0f64..10.0, n in 3usize..20) {
            let pts: Vec<(f64, f64)> = (0..n).map(|i| (i as f64 * 0.7, slope * i as f64 * 0.7 + c)).collect();
            let f = fit_line(&pts, 2.0).unwrap();
            prop_assert!((f.slope - slope).abs() < 1e-9);
            prop_assert!((f.intercept - c).abs() < 1e-8);
            prop_assert!(f.max_residual < 1e-8);
        }
    }
}
