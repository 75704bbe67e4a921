//! Piecewise cubic Hermite interpolation of complex samples on a strictly
//! increasing grid. Slopes come from the three-point nonuniform difference
//! formula (one-sided at the ends).

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct CubicInterpolant {
    x: Vec<f64>,
    y: Vec<Complex64>,
    slope: Vec<Complex64>,
}

impl CubicInterpolant {
    /// Panics if the grid has fewer than two points or the lengths differ;
    /// callers validate grids at construction of their own types.
    pub fn new(x: &[f64], y: &[Complex64]) -> Self {
        assert!(x.len() >= 2 && x.len() == y.len());
        let n = x.len();
        let mut slope = vec![Complex64::new(0.0, 0.0); n];
        if n == 2 {
            let s = (y[1] - y[0]) / (x[1] - x[0]);
            slope = vec![s, s];
        } else {
            for i in 0..n {
                let (a, _, c) = if i == 0 {
                    (0, 1, 2)
                } else if i == n - 1 {
                    (n - 3, n - 2, n - 1)
                } else {
                    (i - 1, i, i + 1)
                };
                slope[i] = lagrange_derivative(&x[a..=c], &y[a..=c], x[i]);
            }
        }
        Self {
            x: x.to_vec(),
            y: y.to_vec(),
            slope,
        }
    }

    /// Hermite interpolant with known derivatives at the nodes.
    pub fn with_slopes(x: Vec<f64>, y: Vec<Complex64>, slope: Vec<Complex64>) -> Self {
        assert!(x.len() >= 2 && x.len() == y.len() && y.len() == slope.len());
        Self { x, y, slope }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Value at `t`; outside the grid the end value is held constant.
    pub fn eval(&self, t: f64) -> Complex64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.x.partition_point(|&v| v <= t) - 1;
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        self.y[i] * h00 + self.slope[i] * (h10 * h) + self.y[i + 1] * h01 + self.slope[i + 1] * (h11 * h)
    }
}

/// Derivative at `t` of the quadratic through three points.
fn lagrange_derivative(x: &[f64], y: &[Complex64], t: f64) -> Complex64 {
    let (x0, x1, x2) = (x[0], x[1], x[2]);
    let d0 = ((t - x1) + (t - x2)) / ((x0 - x1) * (x0 - x2));
    let d1 = ((t - x0) + (t - x2)) / ((x1 - x0) * (x1 - x2));
    let d2 = ((t - x0) + (t - x1)) / ((x2 - x0) * (x2 - x1));
    y[0] * d0 + y[1] * d1 + y[2] * d2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_quadratics_and_nodes() {
        let x: Vec<f64> = vec![0.0, 0.3, 0.5, 1.1, 1.2, 2.0];
        let f = |t: f64| Complex64::new(1.0 - 2.0 * t + 0.5 * t * t, t * t);
        let y: Vec<Complex64> = x.iter().map(|&t| f(t)).collect();
        let p = CubicInterpolant::new(&x, &y);
        for &t in &[0.0, 0.1, 0.45, 0.77, 1.15, 1.9, 2.0] {
            assert!((p.eval(t) - f(t)).norm() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn converges_at_fourth_order_on_smooth_data() {
        let err = |m: usize| {
            let x: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64 * 3.0).collect();
            let y: Vec<Complex64> = x.iter().map(|t| Complex64::new(t.sin(), 0.0)).collect();
            let p = CubicInterpolant::new(&x, &y);
            (0..1000)
                .map(|k| {
                    let t = 3.0 * k as f64 / 999.0;
                    (p.eval(t).re - t.sin()).abs()
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(40) / err(80);
        assert!(ratio > 6.0, "ratio {ratio}");
    }
}
