//! Associated Legendre functions `P^{-μ}_{-1/2+iλ}(cosh t)` with
//! `μ = α + (n-2)/2`, by the Mehler–Dirichlet integral and, for larger `t`,
//! by the two-term hypergeometric expansion.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::hypergeometric::{hypergeometric_2f1, hypergeometric_2f1_truncated};
use super::ComplexOrder;
use crate::error::{domain, Result};
use crate::quadrature::{integrate_singular_left, QuadratureConfig};

/// `P^{-μ}_{-1/2+iλ}(cosh t)` with `μ = α + (n-2)/2`:
///
/// `√(2/π) (sinh t)^{-μ} / Γ(μ + 1/2) ∫_0^t (cosh t - cosh s)^{μ-1/2} cos(λ s) ds`.
///
/// The endpoint `s = t` is integrated in `u = t - s` with
/// `cosh t - cosh s = 2 sinh(t - u/2) sinh(u/2)`, so the singular factor is
/// exactly `u^{μ-1/2}`.
pub fn legendre_p(order: &ComplexOrder, lambda: f64, t: f64, q: &QuadratureConfig) -> Result<Complex64> {
    if !(t > 0.0) {
        return domain(format!("Legendre argument needs t > 0, got {t}"));
    }
    let lambda = lambda.abs();
    let beta = order.legendre_order() - 0.5;
    let sinh_t = t.sinh();
    let g = |u: f64| {
        let base = if u == 0.0 {
            1.0
        } else {
            2.0 * (t - 0.5 * u).sinh() * (0.5 * u).sinh() / (u * sinh_t)
        };
        (beta * base.ln()).exp() * (lambda * (t - u)).cos()
    };
    let integral = integrate_singular_left(beta, t, lambda, q, g)?.value;
    let log_prefactor = 0.5 * (2.0 / PI).ln() - 0.5 * sinh_t.ln() - ln_gamma(beta + 1.0)?;
    Ok(log_prefactor.exp() * integral)
}

/// Coefficient `Γ(iλ) / (√(2π) Γ(α + (n-1)/2 + iλ))` of the outgoing wave.
pub fn wave_coefficient(order: &ComplexOrder, lambda: f64) -> Result<Complex64> {
    let il = Complex64::new(0.0, lambda);
    let b = order.alpha() + (order.n() as f64 - 1.0) / 2.0;
    Ok((ln_gamma(il)? - ln_gamma(b + il)? - 0.5 * (2.0 * PI).ln()).exp())
}

/// Hypergeometric parameters `(a, b, ν)` of the large-`t` expansion.
pub fn expansion_parameters(order: &ComplexOrder, t: f64) -> (Complex64, Complex64, f64) {
    let n = order.n() as f64;
    let a = -order.alpha() - (n - 3.0) / 2.0;
    let b = order.alpha() + (n - 1.0) / 2.0;
    let nu = -1.0 / (2.0 * t).exp_m1();
    (a, b, nu)
}

/// The same Legendre function through
/// `(sinh t)^{1/2} P = C(λ) e^{iλt} F(a, b; 1-iλ; ν) + C(-λ) e^{-iλt} F(a, b; 1+iλ; ν)`
/// with `ν = -1/(e^{2t}-1)`, valid for `t > (ln 2)/2` and `λ ≠ 0`.
/// `n_terms` truncates both series; otherwise they are summed to `abs_tol`.
pub fn legendre_p_hypergeometric(
    order: &ComplexOrder,
    lambda: f64,
    t: f64,
    n_terms: Option<usize>,
    abs_tol: f64,
) -> Result<Complex64> {
    if lambda == 0.0 {
        return domain("hypergeometric expansion needs λ ≠ 0");
    }
    let (a, b, nu) = expansion_parameters(order, t);
    let nu = Complex64::new(nu, 0.0);
    let series = |c: Complex64| match n_terms {
        Some(k) => hypergeometric_2f1_truncated(a, b, c, nu, k),
        None => hypergeometric_2f1(a, b, c, nu, abs_tol),
    };
    let mut total = Complex64::new(0.0, 0.0);
    for sign in [1.0, -1.0] {
        let l = sign * lambda;
        let wave = Complex64::new(0.0, l * t).exp();
        total += wave_coefficient(order, l)? * wave * series(Complex64::new(1.0, -l))?;
    }
    Ok(total / t.sinh().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Dimension;

    fn order(alpha: Complex64, n: usize) -> ComplexOrder {
        ComplexOrder::new(alpha, Dimension::new(n).unwrap()).unwrap()
    }

    fn tight() -> QuadratureConfig {
        QuadratureConfig::default().with_tolerances(1e-12, 1e-14)
    }

    #[test]
    fn half_order_closed_form() {
        // n = 3, α = 0: P^{-1/2}_{-1/2+iλ}(cosh t) = √(2/(π sinh t)) sin(λt)/λ
        let o = order(Complex64::new(0.0, 0.0), 3);
        let (l, t) = (2.0, 1.0);
        let v = legendre_p(&o, l, t, &tight()).unwrap();
        let expected = (2.0 / (PI * t.sinh())).sqrt() * (l * t).sin() / l;
        assert!((v.re - expected).abs() < 1e-12 && v.im.abs() < 1e-14);
    }

    #[test]
    fn even_in_lambda() {
        let o = order(Complex64::new(0.3, 0.2), 2);
        for &(l, t) in &[(0.7, 0.4), (5.0, 2.0), (13.0, 3.0)] {
            let a = legendre_p(&o, l, t, &tight()).unwrap();
            let b = legendre_p(&o, -l, t, &tight()).unwrap();
            assert!((a - b).norm() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn matches_hypergeometric_route() {
        let o = order(Complex64::new(0.4, 0.0), 3);
        let md = legendre_p(&o, 1.5, 1.2, &tight()).unwrap();
        let hg = legendre_p_hypergeometric(&o, 1.5, 1.2, None, 1e-15).unwrap();
        assert!((md - hg).norm() <= 1e-6 * hg.norm(), "{md} vs {hg}");
        for &(n, a, l, t) in &[
            (2, Complex64::new(0.5, 0.0), 3.0, 2.0),
            (4, Complex64::new(-1.2, 0.7), 7.0, 0.9),
        ] {
            let o = order(a, n);
            let md = legendre_p(&o, l, t, &tight()).unwrap();
            let hg = legendre_p_hypergeometric(&o, l, t, None, 1e-15).unwrap();
            assert!((md - hg).norm() <= 1e-8 * hg.norm(), "n = {n}: {md} vs {hg}");
        }
    }
}
