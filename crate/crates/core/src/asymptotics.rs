//! Numerical checks of the size, decay and large-`t` structure of the
//! multipliers `m^α_t` and of `c^α`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fit::{fit_power_law, ExponentFit};
use crate::fourier::c_alpha;
use crate::maximal::{multiplier_log_prefactor, multiplier_m_alpha_t, MeanOperatorSpec};
use crate::quadrature::QuadratureConfig;
use crate::special::gamma::ln_gamma_real;
use crate::special::hypergeometric::{hypergeometric_2f1, hypergeometric_2f1_truncated};
use crate::special::legendre::expansion_parameters;
use crate::special::ComplexOrder;

/// Largest `|ν|` accepted by the large-`t` reconstruction.
pub const MAX_EXPANSION_ARG: f64 = 0.45;

/// Outcome of a calibrated uniform bound: the constant fitted on one half of
/// the grid and the worst ratio seen on the other half.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub calibrated_constant: f64,
    pub worst_ratio: f64,
    /// `(λ, t)` of the worst held-out ratio.
    pub worst_location: (f64, f64),
}

/// `|m^α_t(λ)| / ((1+t) e^{-(n-1)t/2})` over `lgrid × tgrid`. Points with
/// even `i + j` calibrate the constant; the rest are held out.
pub fn check_uniform_bound(
    order: &ComplexOrder,
    lgrid: &[f64],
    tgrid: &[f64],
    q: &QuadratureConfig,
) -> Result<BoundReport> {
    if lgrid.is_empty() || tgrid.is_empty() {
        return Err(Error::Config("uniform bound needs nonempty grids".into()));
    }
    let n = order.n() as f64;
    let cells: Vec<(usize, usize)> = (0..lgrid.len())
        .flat_map(|i| (0..tgrid.len()).map(move |j| (i, j)))
        .collect();
    let ratios = cells
        .par_iter()
        .map(|&(i, j)| {
            let (l, t) = (lgrid[i], tgrid[j]);
            let spec = MeanOperatorSpec::new(*order, t, *q)?;
            let m = multiplier_m_alpha_t(l, &spec)?.norm();
            Ok(((i + j) % 2 == 0, (l, t), m / ((1.0 + t) * (-(n - 1.0) * t / 2.0).exp())))
        })
        .collect::<Result<Vec<_>>>()?;
    let calibrated_constant = ratios.iter().filter(|r| r.0).map(|r| r.2).fold(0.0, f64::max);
    let (worst_location, worst_ratio) =
        ratios
            .iter()
            .filter(|r| !r.0 || cells.len() == 1)
            .fold(
                ((lgrid[0], tgrid[0]), 0.0),
                |acc, r| if r.2 > acc.1 { (r.1, r.2) } else { acc },
            );
    Ok(BoundReport {
        calibrated_constant,
        worst_ratio,
        worst_location,
    })
}

/// Envelope of `|g|` on `[lo, hi]`: one `(λ, max)` per window of length
/// `period`, from samples `period/16` apart.
pub fn envelope(lo: f64, hi: f64, period: f64, g: impl Fn(f64) -> Result<f64> + Sync) -> Result<Vec<(f64, f64)>> {
    let windows = ((hi - lo) / period).floor() as usize;
    if windows == 0 {
        return Ok(Vec::new());
    }
    let per = 16;
    let samples = (0..windows * per)
        .into_par_iter()
        .map(|k| {
            let l = lo + (k as f64 + 0.5) * period / per as f64;
            Ok((l, g(l)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(samples
        .chunks(per)
        .map(|w| {
            w.iter()
                .copied()
                .fold((w[0].0, 0.0f64), |a, s| if s.1 > a.1 { s } else { a })
        })
        .collect())
}

/// Log-log slope of the envelope of `|m^α_t(λ)|` over `λ ∈ [lo, hi]`,
/// windows one period `2π/t` long.
pub fn check_oscillatory_decay(
    order: &ComplexOrder,
    t: f64,
    lo: f64,
    hi: f64,
    q: &QuadratureConfig,
) -> Result<ExponentFit> {
    if !(t > 0.0 && t <= std::f64::consts::PI) {
        return domain(format!("oscillatory decay is checked for 0 < t <= π, got {t}"));
    }
    if !(lo * t >= 1.0 && hi > lo) {
        return domain(format!(
            "need λt >= 1 on the whole range, got λ ∈ [{lo}, {hi}], t = {t}"
        ));
    }
    let spec = MeanOperatorSpec::new(*order, t, *q)?;
    let env = envelope(lo, hi, 2.0 * std::f64::consts::PI / t, |l| {
        Ok(multiplier_m_alpha_t(l, &spec)?.norm())
    })?;
    fit_power_law(&env)
}

/// `a^α_2(λ, t)`: the hypergeometric factor of the outgoing wave, scaled so
/// that `m^α_t = e^{-(n-1)t/2} Σ_± e^{±iλt} c^α(±λ) a^α_2(±λ, t)`.
/// `n_terms = None` sums the series to near machine accuracy.
pub fn large_t_amplitude(order: &ComplexOrder, lambda: f64, t: f64, n_terms: Option<usize>) -> Result<Complex64> {
    let (a, b, nu) = expansion_parameters(order, t);
    if nu.abs() >= MAX_EXPANSION_ARG {
        return domain(format!(
            "expansion argument |ν| = {:.3} must stay below {MAX_EXPANSION_ARG} (t = {t})",
            nu.abs()
        ));
    }
    let c = Complex64::new(1.0, -lambda);
    let nu = Complex64::new(nu, 0.0);
    let f = match n_terms {
        Some(k) => hypergeometric_2f1_truncated(a, b, c, nu, k)?,
        None => hypergeometric_2f1(a, b, c, nu, 1e-16)?,
    };
    let n = order.n() as f64;
    let log_scale = multiplier_log_prefactor(order, t) + (n - 1.0) * t / 2.0
        - 0.5 * t.sinh().ln()
        - (n - 1.5) * std::f64::consts::LN_2
        - ln_gamma_real(n / 2.0);
    Ok(log_scale.exp() * f)
}

/// The large-`t` two-wave form of `m^α_t(λ)`.
pub fn large_t_reconstruction(order: &ComplexOrder, lambda: f64, t: f64, n_terms: Option<usize>) -> Result<Complex64> {
    let n = order.n() as f64;
    let wave = |l: f64| -> Result<Complex64> {
        Ok(Complex64::new(0.0, l * t).exp() * c_alpha(l, order)? * large_t_amplitude(order, l, t, n_terms)?)
    };
    Ok((-(n - 1.0) * t / 2.0).exp() * (wave(lambda)? + wave(-lambda)?))
}

/// Relative difference between the large-`t` two-wave form and the
/// integral representation of `m^α_t(λ)`.
pub fn check_large_t_reconstruction(
    order: &ComplexOrder,
    lambda: f64,
    t: f64,
    n_terms: Option<usize>,
    q: &QuadratureConfig,
) -> Result<f64> {
    let spec = MeanOperatorSpec::new(*order, t, *q)?;
    let direct = multiplier_m_alpha_t(lambda, &spec)?;
    let wave = large_t_reconstruction(order, lambda, t, n_terms)?;
    Ok((wave - direct).norm() / direct.norm())
}

/// Step of the finite differences in [`check_c_alpha_decay`].
pub const DIFF_STEP: f64 = 1e-3;

/// `k`-th central difference of `λ ↦ λ c^α(λ)` at `lambda`.
pub fn c_alpha_difference(order: &ComplexOrder, k: u32, lambda: f64) -> Result<Complex64> {
    let g = |l: f64| -> Result<Complex64> { Ok(c_alpha(l, order)? * l) };
    let h = DIFF_STEP;
    match k {
        0 => g(lambda),
        1 => Ok((g(lambda + h)? - g(lambda - h)?) / (2.0 * h)),
        2 => Ok((g(lambda + h)? - g(lambda)? * 2.0 + g(lambda - h)?) / (h * h)),
        _ => domain(format!("derivative order {k} is not supported (0, 1 or 2)")),
    }
}

/// Log-log slope of `|Δ^k (λ c^α(λ))|` over `points` log-spaced λ in `[lo, hi]`.
pub fn check_c_alpha_decay(order: &ComplexOrder, k: u32, lo: f64, hi: f64, points: usize) -> Result<ExponentFit> {
    if !(lo >= 1.0 && hi > lo) {
        return domain(format!("c-function decay is checked on λ >= 1, got [{lo}, {hi}]"));
    }
    let samples = (0..points)
        .map(|i| {
            let l = lo * (hi / lo).powf(i as f64 / (points.max(2) - 1) as f64);
            Ok((l, c_alpha_difference(order, k, l)?.norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_power_law(&samples)
}

/// Machine-readable verdict on one decay claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: String,
    pub parameters: serde_json::Value,
    pub expected_slope: f64,
    pub fitted_slope: f64,
    pub residual: f64,
    pub pass: bool,
}

/// Largest log₁₀ residual a fit may show before it counts as a failure.
pub const MAX_FIT_RESIDUAL: f64 = 0.15;

impl ClaimReport {
    pub fn from_fit(claim: &str, parameters: serde_json::Value, expected: f64, fit: &ExponentFit, tol: f64) -> Self {
        Self {
            claim: claim.to_string(),
            parameters,
            expected_slope: expected,
            fitted_slope: fit.slope,
            residual: fit.max_residual,
            pass: (fit.slope - expected).abs() <= tol && fit.max_residual <= MAX_FIT_RESIDUAL,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Dimension;

    fn order(n: usize, a: f64) -> ComplexOrder {
        ComplexOrder::real(a, Dimension::new(n).unwrap()).unwrap()
    }

    #[test]
    fn amplitude_tends_to_one() {
        // corrections are O(e^{-t})
        let a = large_t_amplitude(&order(3, 0.4), 2.0, 12.0, None).unwrap();
        assert!((a - 1.0).norm() < 1e-4);
        let b = large_t_amplitude(&order(3, 0.4), 2.0, 20.0, None).unwrap();
        assert!((b - 1.0).norm() < 1e-7);
    }

    #[test]
    fn reconstruction_in_three_dimensions_at_order_zero() {
        let q = QuadratureConfig::default();
        let err = check_large_t_reconstruction(&order(3, 0.0), 2.0, 2.0, None, &q).unwrap();
        assert!(err < 1e-8, "{err}");
        let err = check_large_t_reconstruction(&order(2, 0.5), 3.0, 2.0, None, &q).unwrap();
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn truncation_error_falls_with_t() {
        let q = QuadratureConfig::default();
        let o = order(2, 0.3);
        let errs: Vec<f64> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&t| check_large_t_reconstruction(&o, 1.5, t, Some(2), &q).unwrap())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn small_t_is_rejected() {
        assert!(large_t_amplitude(&order(2, 0.3), 1.0, 0.5, None).is_err());
    }

    #[test]
    fn c_alpha_slopes() {
        let f = check_c_alpha_decay(&order(3, 1.0), 0, 1.0, 100.0, 20).unwrap();
        assert!((f.slope + 1.0).abs() < 0.05, "{f:?}");
        // λ c^{1/2}(λ) = -i exactly when n = 2
        let flat = check_c_alpha_decay(&order(2, 0.5), 0, 1.0, 100.0, 20).unwrap();
        assert!(flat.slope.abs() < 1e-9, "{flat:?}");
        let o = order(3, 0.3);
        let f0 = check_c_alpha_decay(&o, 0, 2.0, 200.0, 20).unwrap();
        let f1 = check_c_alpha_decay(&o, 1, 2.0, 200.0, 20).unwrap();
        let f2 = check_c_alpha_decay(&o, 2, 2.0, 200.0, 20).unwrap();
        assert!((f0.slope + 0.3).abs() < 0.05, "{f0:?}");
        assert!((f1.slope - f0.slope + 1.0).abs() < 0.1, "{f1:?}");
        assert!((f2.slope - f1.slope + 1.0).abs() < 0.1, "{f2:?}");
    }

    #[test]
    fn closed_form_envelope_decays_like_one_over_lambda() {
        let q = QuadratureConfig::default();
        let f = check_oscillatory_decay(&order(3, 0.0), 1.0, 5.0, 200.0, &q).unwrap();
        assert!((f.slope + 1.0).abs() < 0.05, "{f:?}");
        assert!(f.max_residual < MAX_FIT_RESIDUAL);
    }
}
