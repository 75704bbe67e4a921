//! Gauss hypergeometric series `2F1(a, b; c; ν)` for `|ν| < 1/2`.

use num_complex::Complex64;

use crate::error::{domain, Result};

/// Partial sum of the series with the bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: Complex64,
    pub terms: usize,
    pub tail_bound: f64,
}

const MAX_TERMS: usize = 100_000;

fn check_args(c: Complex64, nu: Complex64) -> Result<()> {
    if nu.norm() >= 0.5 {
        return domain(format!("hypergeometric argument |ν| = {} is not below 1/2", nu.norm()));
    }
    if c.re <= 0.0 && (c.re - c.re.round()).abs() < 1e-12 && c.im.abs() < 1e-12 {
        return domain(format!("hypergeometric parameter c = {c} is a nonpositive integer"));
    }
    Ok(())
}

/// Bound `q_k` on `|t_{j+1} / t_j|` valid for every `j >= k`, or `None` when
/// `k` is not yet large enough for the bound to apply.
fn ratio_bound(a: Complex64, b: Complex64, c: Complex64, nu: f64, k: usize) -> Option<f64> {
    let kf = k as f64;
    if kf + c.re <= 0.0 {
        return None;
    }
    Some(nu * (1.0 + (a - 1.0).norm() / (kf + 1.0)) * (1.0 + (b - c).norm() / (kf + c.re)))
}

/// Sum the series until the rigorous tail bound drops below `abs_tol`.
pub fn hypergeometric_2f1_sum(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    nu: Complex64,
    abs_tol: f64,
) -> Result<SeriesSum> {
    check_args(c, nu)?;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * nu;
        sum += term;
        if let Some(q) = ratio_bound(a, b, c, nu.norm(), k + 1) {
            if q < 1.0 {
                let tail = term.norm() * q / (1.0 - q);
                if tail < abs_tol {
                    return Ok(SeriesSum {
                        value: sum,
                        terms: k + 2,
                        tail_bound: tail,
                    });
                }
            }
        }
    }
    domain(format!("hypergeometric series did not converge in {MAX_TERMS} terms"))
}

/// `2F1(a, b; c; ν)` to absolute accuracy `abs_tol`.
pub fn hypergeometric_2f1(a: Complex64, b: Complex64, c: Complex64, nu: Complex64, abs_tol: f64) -> Result<Complex64> {
    Ok(hypergeometric_2f1_sum(a, b, c, nu, abs_tol)?.value)
}

/// The first `n_terms` terms of the series (terms `k = 0 .. n_terms-1`).
pub fn hypergeometric_2f1_truncated(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    nu: Complex64,
    n_terms: usize,
) -> Result<Complex64> {
    check_args(c, nu)?;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n_terms {
        sum += term;
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * nu;
    }
    Ok(sum)
}
