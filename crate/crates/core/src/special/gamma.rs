//! Complex Gamma function and Pochhammer symbols.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Lanczos approximation of `ln Γ(z)` for `Re z >= 1/2`.
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut sum = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// `ln sin(w)` without overflow for large `|Im w|` (any branch of the log).
fn ln_sin(w: Complex64) -> Complex64 {
    let i = Complex64::i();
    if w.im > 0.0 {
        -i * w + ((i * w * 2.0).exp() - 1.0).ln() - (2.0 * i).ln()
    } else {
        i * w + ((1.0 - (-i * w * 2.0).exp()) / (2.0 * i)).ln()
    }
}

/// Principal-ish logarithm of `Γ(z)`; the imaginary part is only defined
/// modulo `2π`, which is all that exponentiated ratios need.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if z.re <= 0.0 && (z.re - z.re.round()).abs() < 1e-12 && z.im.abs() < 1e-12 {
        return domain(format!("Gamma has a pole at {z}"));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_lanczos(z));
    }
    if z.re > -20.0 {
        // Shift right with Γ(z) = Γ(z + k) / (z (z+1) ... (z+k-1)).
        let k = (0.5 - z.re).ceil() as usize;
        let mut acc = ln_gamma_lanczos(z + k as f64);
        for j in 0..k {
            acc -= (z + j as f64).ln();
        }
        return Ok(acc);
    }
    Ok(Complex64::new(PI.ln(), 0.0) - ln_sin(z * PI) - ln_gamma_lanczos(1.0 - z))
}

/// `Γ(z)` for complex `z`; poles are reported as domain errors.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    ln_gamma_lanczos(Complex64::new(x, 0.0)).re
}

/// `Γ(x)` for real `x`, NaN at poles.
pub fn gamma_real(x: f64) -> f64 {
    complex_gamma(Complex64::new(x, 0.0)).map(|g| g.re).unwrap_or(f64::NAN)
}

/// Rising factorial `(ζ)_k = ζ (ζ+1) ... (ζ+k-1)`.
pub fn pochhammer(zeta: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, l| acc * (zeta + l as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn known_values() {
        assert!(rel(complex_gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(complex_gamma(c(1.5, 0.0)).unwrap(), c(PI.sqrt() / 2.0, 0.0)) < 1e-14);
        let gi = complex_gamma(c(0.0, 1.0)).unwrap();
        assert!((gi.norm_sqr() - PI / PI.sinh()).abs() < 1e-13);
        assert!(rel(complex_gamma(c(-2.5, 0.0)).unwrap(), c(-8.0 * PI.sqrt() / 15.0, 0.0)) < 1e-13);
    }

    #[test]
    fn poles_are_errors() {
        for k in 0..5 {
            assert!(complex_gamma(c(-(k as f64), 0.0)).is_err());
        }
        assert!(complex_gamma(c(-25.0, 0.0)).is_err());
    }

    #[test]
    fn large_imaginary_argument_magnitude() {
        // |Γ(iy)|² = π / (y sinh πy), compared in log form
        for &y in &[50.0, 300.0, 800.0] {
            let lg = ln_gamma(c(0.0, y)).unwrap();
            let expected = 0.5 * (PI.ln() - y.ln() - (PI * y - std::f64::consts::LN_2));
            assert!((lg.re - expected).abs() < 1e-10 * expected.abs().max(1.0), "y = {y}");
        }
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(c(0.3, 0.2), 0), c(1.0, 0.0));
        assert_eq!(pochhammer(c(1.0, 0.0), 5), c(120.0, 0.0));
        assert_eq!(pochhammer(c(0.5, 0.0), 2), c(0.75, 0.0));
    }

    proptest! {
        #[test]
        fn recurrence_holds(re in -30.0f64..30.0, im in -40.0f64..40.0) {
            let z = c(re, im);
            prop_assume!(z.norm() > 0.1 && (re - re.round()).abs() > 1e-3 || im.abs() > 1e-3);
            let lhs = ln_gamma(z + 1.0).unwrap();
            let rhs = ln_gamma(z).unwrap() + z.ln();
            let diff = (lhs - rhs).exp();
            prop_assert!((diff - 1.0).norm() < 1e-12, "z = {}, ratio = {}", z, diff);
        }

        #[test]
        fn reflection_holds(re in -3.0f64..3.0, im in -5.0f64..5.0) {
            let z = c(re, im);
            prop_assume!((re - re.round()).abs() > 1e-2 || im.abs() > 1e-2);
            let prod = complex_gamma(z).unwrap() * complex_gamma(1.0 - z).unwrap();
            let expected = PI / (z * PI).sin();
            prop_assert!(rel(prod, expected) < 1e-12);
        }
    }
}
