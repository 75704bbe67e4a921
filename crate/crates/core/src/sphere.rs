//! Product quadrature rules on unit spheres and Euclidean balls.

use std::f64::consts::PI;

use crate::quadrature::{gauss_jacobi, gauss_legendre};

/// A point set with weights.
pub type PointRule = Vec<(Vec<f64>, f64)>;

/// Rule on the unit sphere `S^k ⊂ R^{k+1}` exact for trigonometric degree
/// about `order` in each angle; weights sum to the sphere area.
pub fn sphere_rule(k: usize, order: usize) -> PointRule {
    match k {
        0 => vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
        1 => (0..2 * order)
            .map(|i| {
                let phi = PI * (i as f64 + 0.5) / order as f64;
                (vec![phi.cos(), phi.sin()], PI / order as f64)
            })
            .collect(),
        _ => {
            // x = cos θ carries the weight (1 - x²)^{(k-2)/2}
            let inner = sphere_rule(k - 1, order);
            let half = (k as f64 - 2.0) / 2.0;
            let rule = gauss_jacobi(order, half, half).expect("exponents are nonnegative");
            let mut out = Vec::with_capacity(order * inner.len());
            for (&c, &w) in rule.nodes.iter().zip(&rule.weights) {
                let s = (1.0 - c * c).sqrt();
                for (p, wp) in &inner {
                    let mut x = Vec::with_capacity(k + 1);
                    x.push(c);
                    x.extend(p.iter().map(|v| v * s));
                    out.push((x, w * wp));
                }
            }
            out
        }
    }
}

/// Rule on the ball `{|x| <= radius}` in `R^d`; weights sum to its volume.
pub fn ball_rule(d: usize, radius: f64, order: usize) -> PointRule {
    if d == 0 {
        return vec![(vec![], 1.0)];
    }
    if d == 1 {
        return gauss_legendre(order)
            .mapped(-radius, radius)
            .map(|(x, w)| (vec![x], w))
            .collect();
    }
    let sphere = sphere_rule(d - 1, order);
    let mut out = Vec::new();
    for (r, w) in gauss_legendre(order).mapped(0.0, radius) {
        let wr = w * r.powi(d as i32 - 1);
        for (p, wp) in &sphere {
            out.push((p.iter().map(|v| v * r).collect(), wr * wp));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Dimension;

    #[test]
    fn areas_and_volumes() {
        for k in 0..5 {
            let total: f64 = sphere_rule(k, 8).iter().map(|p| p.1).sum();
            let area = Dimension::new(k + 1).map(|d| d.sphere_area()).unwrap_or(2.0);
            assert!((total - area).abs() < 1e-12 * area, "k = {k}");
        }
        let vol: f64 = ball_rule(3, 2.0, 6).iter().map(|p| p.1).sum();
        assert!((vol - 4.0 / 3.0 * PI * 8.0).abs() < 1e-11);
    }

    #[test]
    fn second_moments_on_s2() {
        // ∫_{S^2} x_i x_j dσ = 4π/3 δ_ij
        let rule = sphere_rule(2, 6);
        for i in 0..3 {
            for j in 0..3 {
                let m: f64 = rule.iter().map(|(x, w)| w * x[i] * x[j]).sum();
                let expected = if i == j { 4.0 * PI / 3.0 } else { 0.0 };
                assert!((m - expected).abs() < 1e-12);
            }
        }
    }
}
