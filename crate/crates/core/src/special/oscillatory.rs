//! The oscillatory kernel `J_m(r) = ∫_{-1}^{1} e^{ivr} (1 - v²)^{m-1/2} dv`.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::quadrature::{integrate_singular_left, QuadratureConfig};

/// `J_m(r)` for `Re m > -1/2`. Each half `[-1, 0]`, `[0, 1]` is integrated
/// from its singular endpoint with `1 - v² = u (2 - u)`.
pub fn oscillatory_j(m: Complex64, r: f64, q: &QuadratureConfig) -> Result<Complex64> {
    if !(m.re > -0.5) {
        return domain(format!("J_m needs Re m > -1/2, got m = {m}"));
    }
    let beta = m - 0.5;
    let mut total = Complex64::new(0.0, 0.0);
    for sign in [1.0, -1.0] {
        // v = sign (1 - u)
        let g = |u: f64| (beta * (2.0 - u).ln()).exp() * Complex64::new(0.0, sign * (1.0 - u) * r).exp();
        total += integrate_singular_left(beta, 1.0, r, q, g)?.value;
    }
    Ok(total)
}
