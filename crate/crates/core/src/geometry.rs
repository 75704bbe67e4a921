//! The hyperboloid model of `H^n` inside Minkowski space `R^{n+1}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_adaptive, QuadratureConfig};
use crate::special::gamma::ln_gamma_real;

/// Sheet invariant tolerance, relative to `z0²`.
pub const SHEET_TOL: f64 = 1e-10;
/// Width of the window below 1 in which `[z, w]` is clamped before `arcosh`.
pub const ARCOSH_SLACK: f64 = 1e-9;

/// The dimension `n >= 2` of `H^n`, with the sphere area `ω_{n-1}` cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dimension {
    n: usize,
    sphere_area: f64,
}

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("dimension must be at least 2, got {n}")));
        }
        let half = n as f64 / 2.0;
        let sphere_area = (2.0f64.ln() + half * PI.ln() - ln_gamma_real(half)).exp();
        Ok(Self { n, sphere_area })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ω_{n-1} = 2π^{n/2} / Γ(n/2)`, the area of the unit sphere `S^{n-1}`.
    pub fn sphere_area(&self) -> f64 {
        self.sphere_area
    }
}

/// `[z, w] = z0 w0 - z1 w1 - ... - zn wn` on raw coordinate vectors.
pub fn minkowski_form(z: &[f64], w: &[f64]) -> Result<f64> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            got: w.len(),
        });
    }
    if z.is_empty() {
        return Ok(0.0);
    }
    Ok(z[0] * w[0] - z[1..].iter().zip(&w[1..]).map(|(a, b)| a * b).sum::<f64>())
}

/// `arcosh` with the roundoff clamp applied to arguments just below 1.
pub fn clamped_arcosh(x: f64) -> Result<f64> {
    if x >= 1.0 {
        Ok(x.acosh())
    } else if x >= 1.0 - ARCOSH_SLACK {
        Ok(0.0)
    } else {
        domain(format!("arcosh argument {x} is below 1"))
    }
}

/// A point `(z0, z')` of the upper sheet `[z, z] = 1, z0 >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    coords: Vec<f64>,
}

impl HyperbolicPoint {
    /// Validate raw coordinates `(z0, z1, ..., zn)`.
    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 3 {
            return domain(format!(
                "a point of H^n needs n+1 >= 3 coordinates, got {}",
                coords.len()
            ));
        }
        let form = minkowski_form(&coords, &coords)?;
        if coords[0] < 1.0 - SHEET_TOL || (form - 1.0).abs() > SHEET_TOL * coords[0] * coords[0] {
            return domain(format!(
                "coordinates are off the upper sheet: [z,z] = {form}, z0 = {}",
                coords[0]
            ));
        }
        Ok(Self { coords })
    }

    /// Lift spatial coordinates `z'` to the sheet, `z0 = √(1 + |z'|²)`.
    pub fn from_spatial(zp: &[f64]) -> Self {
        let z0 = (1.0 + zp.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let mut coords = Vec::with_capacity(zp.len() + 1);
        coords.push(z0);
        coords.extend_from_slice(zp);
        Self { coords }
    }

    /// The base point `𝟎 = (1, 0, ..., 0)`.
    pub fn origin(dim: Dimension) -> Self {
        let mut coords = vec![0.0; dim.n() + 1];
        coords[0] = 1.0;
        Self { coords }
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn z0(&self) -> f64 {
        self.coords[0]
    }

    pub fn spatial(&self) -> &[f64] {
        &self.coords[1..]
    }

    pub fn form(&self, other: &Self) -> Result<f64> {
        minkowski_form(&self.coords, &other.coords)
    }

    /// `ρ(z) = d(z, 𝟎) = arsinh |z'|`, accurate near the origin.
    pub fn rho(&self) -> f64 {
        self.spatial().iter().map(|x| x * x).sum::<f64>().sqrt().asinh()
    }
}

/// `d(z, w) = arcosh [z, w]`.
///
/// Near the diagonal the distance is taken from `cosh d - 1 = -[z-w, z-w]/2`,
/// which keeps full relative accuracy for nearby points.
pub fn geodesic_distance(z: &HyperbolicPoint, w: &HyperbolicPoint) -> Result<f64> {
    let form = z.form(w)?;
    if form >= 2.0 {
        return Ok(form.acosh());
    }
    clamped_arcosh(form)?;
    let diff: Vec<f64> = z.coords.iter().zip(&w.coords).map(|(a, b)| a - b).collect();
    let q = -minkowski_form(&diff, &diff)?;
    Ok(2.0 * (0.5 * q.max(0.0).sqrt()).asinh())
}

/// `[e^t z - w]`, the form of `e^t z - w` with itself.
pub fn shifted_form(t: f64, z: &HyperbolicPoint, w: &HyperbolicPoint) -> Result<f64> {
    let et = t.exp();
    let v: Vec<f64> = z.coords.iter().zip(&w.coords).map(|(a, b)| et * a - b).collect();
    if z.coords.len() != w.coords.len() {
        return Err(Error::DimensionMismatch {
            expected: z.coords.len(),
            got: w.coords.len(),
        });
    }
    minkowski_form(&v, &v)
}

/// Geodesic polar coordinates `z = (cosh r, ω sinh r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarCoord {
    pub r: f64,
    pub omega: Vec<f64>,
}

impl PolarCoord {
    pub fn new(r: f64, omega: Vec<f64>) -> Result<Self> {
        let norm = omega.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(r >= 0.0) || (norm - 1.0).abs() > 1e-12 {
            return domain(format!("invalid polar coordinate: r = {r}, |ω| = {norm}"));
        }
        Ok(Self { r, omega })
    }
}

pub fn from_polar(p: &PolarCoord) -> HyperbolicPoint {
    let (s, c) = (p.r.sinh(), p.r.cosh());
    let mut coords = Vec::with_capacity(p.omega.len() + 1);
    coords.push(c);
    coords.extend(p.omega.iter().map(|w| w * s));
    HyperbolicPoint { coords }
}

/// Inverse of [`from_polar`]; at the origin the direction is `e1`.
pub fn to_polar(z: &HyperbolicPoint) -> PolarCoord {
    let zp = z.spatial();
    let norm = zp.iter().map(|x| x * x).sum::<f64>().sqrt();
    let r = norm.asinh();
    let omega = if norm > 0.0 {
        zp.iter().map(|x| x / norm).collect()
    } else {
        let mut e = vec![0.0; zp.len()];
        e[0] = 1.0;
        e
    };
    PolarCoord { r, omega }
}

/// The boost `𝔞(r)`: hyperbolic rotation in the `(z0, z1)` plane.
pub fn lorentz_boost(r: f64, z: &HyperbolicPoint) -> HyperbolicPoint {
    let (c, s) = (r.cosh(), r.sinh());
    let mut coords = z.coords.clone();
    coords[0] = c * z.coords[0] + s * z.coords[1];
    coords[1] = s * z.coords[0] + c * z.coords[1];
    HyperbolicPoint { coords }
}

/// The boost along the geodesic from `𝟎` to `z`, an isometry sending `𝟎` to `z`.
#[derive(Debug, Clone)]
pub struct Translation {
    cosh_r: f64,
    sinh_r: f64,
    dir: Vec<f64>,
}

impl Translation {
    pub fn to(z: &HyperbolicPoint) -> Self {
        let p = to_polar(z);
        Self {
            cosh_r: p.r.cosh(),
            sinh_r: p.r.sinh(),
            dir: p.omega,
        }
    }

    /// Apply to raw coordinates `(x0, x')`.
    pub fn apply_coords(&self, x: &[f64]) -> Vec<f64> {
        let (x0, xp) = (x[0], &x[1..]);
        let proj: f64 = self.dir.iter().zip(xp).map(|(a, b)| a * b).sum();
        let mut out = Vec::with_capacity(x.len());
        out.push(self.cosh_r * x0 + self.sinh_r * proj);
        let along = (self.cosh_r - 1.0) * proj + self.sinh_r * x0;
        out.extend(xp.iter().zip(&self.dir).map(|(xi, di)| xi + along * di));
        out
    }

    pub fn apply(&self, w: &HyperbolicPoint) -> HyperbolicPoint {
        HyperbolicPoint {
            coords: self.apply_coords(&w.coords),
        }
    }
}

/// The chart `τ(x) = (√(1+|x|²), x)`.
pub fn hyperboloid_chart(x: &[f64]) -> HyperbolicPoint {
    HyperbolicPoint::from_spatial(x)
}

/// `d(τ(x), τ(y)) = arcosh(√(1+|x|²) √(1+|y|²) - x·y)`.
pub fn chart_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let nx = 1.0 + x.iter().map(|v| v * v).sum::<f64>();
    let ny = 1.0 + y.iter().map(|v| v * v).sum::<f64>();
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    clamped_arcosh((nx * ny).sqrt() - dot)
}

/// Iwasawa coordinates `(v, u) ∈ R^{n-1} × R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IwasawaCoord {
    pub v: Vec<f64>,
    pub u: f64,
}

impl IwasawaCoord {
    /// Group law `(v, u)(v', u') = (v + e^u v', u + u')`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.v.len() != other.v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.v.len(),
                got: other.v.len(),
            });
        }
        let eu = self.u.exp();
        Ok(Self {
            v: self.v.iter().zip(&other.v).map(|(a, b)| a + eu * b).collect(),
            u: self.u + other.u,
        })
    }
}

/// `arcosh(e^{-u-u'} |v - v'|² + cosh(u - u'))`.
pub fn iwasawa_distance(a: &IwasawaCoord, b: &IwasawaCoord) -> Result<f64> {
    if a.v.len() != b.v.len() {
        return Err(Error::DimensionMismatch {
            expected: a.v.len(),
            got: b.v.len(),
        });
    }
    let dv: f64 = a.v.iter().zip(&b.v).map(|(x, y)| (x - y) * (x - y)).sum();
    clamped_arcosh((-a.u - b.u).exp() * dv + (a.u - b.u).cosh())
}

/// Radial density of the volume in polar coordinates, `ω_{n-1} (sinh r)^{n-1}`.
pub fn polar_measure_weight(r: f64, dim: Dimension) -> f64 {
    dim.sphere_area() * r.sinh().powi(dim.n() as i32 - 1)
}

/// Volume of a geodesic ball of radius `t`.
pub fn ball_volume(t: f64, dim: Dimension, q: &QuadratureConfig) -> Result<f64> {
    if !(t >= 0.0) {
        return domain(format!("ball radius must be nonnegative, got {t}"));
    }
    let est = integrate_adaptive(
        |r| num_complex::Complex64::new(polar_measure_weight(r, dim), 0.0),
        &[0.0, t],
        q,
    )?;
    Ok(est.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn form_and_distance_examples() {
        let o = HyperbolicPoint::origin(dim(2));
        assert_eq!(o.form(&o).unwrap(), 1.0);
        let z = from_polar(&PolarCoord::new(1.0, vec![1.0, 0.0]).unwrap());
        assert_relative_eq!(z.form(&o).unwrap(), 1f64.cosh(), max_relative = 1e-15);
        assert_relative_eq!(z.coords()[1], 1f64.sinh(), max_relative = 1e-15);
        assert_relative_eq!(
            shifted_form(1.0, &o, &o).unwrap(),
            (1f64.exp() - 1.0).powi(2),
            max_relative = 1e-14
        );
        let w = from_polar(&PolarCoord::new(0.7, vec![0.6, 0.8]).unwrap());
        assert_relative_eq!(geodesic_distance(&o, &w).unwrap(), 0.7, max_relative = 1e-14);
        assert_eq!(geodesic_distance(&w, &w).unwrap(), 0.0);
        assert!(minkowski_form(&[1.0, 0.0], &[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn clamp_and_rejection() {
        assert_eq!(clamped_arcosh(1.0 - 1e-10).unwrap(), 0.0);
        assert!(clamped_arcosh(1.0 - 1e-6).is_err());
        assert!(HyperbolicPoint::from_coords(vec![1.0, 0.5, 0.0]).is_err());
    }

    #[test]
    fn boost_of_origin_is_polar_point() {
        let o = HyperbolicPoint::origin(dim(3));
        let b = lorentz_boost(0.5, &o);
        let p = from_polar(&PolarCoord::new(0.5, vec![1.0, 0.0, 0.0]).unwrap());
        for (x, y) in b.coords().iter().zip(p.coords()) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(lorentz_boost(0.0, &p), p);
    }

    #[test]
    fn iwasawa_examples() {
        let a = IwasawaCoord { v: vec![0.0], u: 0.0 };
        let b = IwasawaCoord { v: vec![1.0], u: 0.0 };
        assert_relative_eq!(iwasawa_distance(&a, &b).unwrap(), 2f64.acosh(), max_relative = 1e-15);
        let c = IwasawaCoord { v: vec![0.3], u: -1.2 };
        let d = IwasawaCoord { v: vec![0.3], u: 0.5 };
        assert_relative_eq!(iwasawa_distance(&c, &d).unwrap(), 1.7, max_relative = 1e-14);
    }

    #[test]
    fn measure_examples() {
        assert_relative_eq!(dim(2).sphere_area(), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(dim(3).sphere_area(), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(
            polar_measure_weight(1.0, dim(2)),
            2.0 * PI * 1f64.sinh(),
            max_relative = 1e-14
        );
        let r: f64 = 1e-6;
        assert_relative_eq!(
            polar_measure_weight(r, dim(4)) / (dim(4).sphere_area() * r.powi(3)),
            1.0,
            max_relative = 1e-10
        );
        let v = ball_volume(1.0, dim(2), &QuadratureConfig::default()).unwrap();
        assert_relative_eq!(v, 2.0 * PI * (1f64.cosh() - 1.0), max_relative = 1e-12);
    }

    #[test]
    fn translation_sends_origin_to_target() {
        let z = from_polar(&PolarCoord::new(1.3, vec![0.0, 0.6, -0.8]).unwrap());
        let tr = Translation::to(&z);
        let image = tr.apply(&HyperbolicPoint::origin(dim(3)));
        for (x, y) in image.coords().iter().zip(z.coords()) {
            assert!((x - y).abs() < 1e-14);
        }
    }
}
