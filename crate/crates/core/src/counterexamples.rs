//! The three test-function families that bound the admissible orders from
//! below, their `L^p` norms, and lower bounds for `‖𝔪^α f‖_p / ‖f‖_p`.
//!
//! * `F_DELTA`: `ρ^{1-n-α} / (-log ρ)` on `(B_{1/2}(𝟎) ∖ B_δ(𝟎)) ∩ Γ`, where `Γ`
//!   is the cone at `𝟎` tangent to `B_{3c₁}(𝔞(1/2)𝟎)`.
//! * `G_J`: the indicator of the slab
//!   `R_j = {|w₁ - 2·2^{-j}| <= 2^{-j}, |w''| <= c₂ 2^{-j/2}}`.
//! * `H_EPS`: the indicator of the shell `|ρ - 1 + 2ε| < ε`.
//!
//! Every lower bound integrates the ball kernel
//! `P^α_t (2e^t)^{α-1} (cosh t - cosh d)^{α-1}` over a set that sits strictly
//! inside `B_t(z)`, so it stays valid for `α <= 0` as well; containment is
//! checked geometrically before any quadrature.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fit::{fit_line, ExponentFit};
use crate::fourier::FunctionHandle;
use crate::geometry::{from_polar, Dimension, HyperbolicPoint, PolarCoord, Translation};
use crate::maximal::{ball_kernel_log_prefactor, TGrid};
use crate::quadrature::{gauss_jacobi, gauss_legendre, integrate_adaptive, uniform_breaks, QuadratureConfig};
use crate::special::ComplexOrder;
use crate::sphere::{ball_rule, sphere_rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    FDelta,
    GJ,
    HEps,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::FDelta => "F_DELTA",
            Family::GJ => "G_J",
            Family::HEps => "H_EPS",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "F_DELTA" => Ok(Family::FDelta),
            "G_J" => Ok(Family::GJ),
            "H_EPS" => Ok(Family::HEps),
            _ => Err(Error::Config(format!("unknown family {s:?} (F_DELTA, G_J or H_EPS)"))),
        }
    }
}

pub const DEFAULT_C1: f64 = 0.05;
pub const DEFAULT_C2: f64 = 0.1;
/// `G_J` evaluation points have `ρ(z)` in this range.
pub const G_J_RHO_RANGE: (f64, f64) = (0.9, 1.1);
/// Outer radius of the `F_DELTA` support and of the sets `S_z`.
const F_DELTA_OUTER: f64 = 0.5;
const S_Z_RADIUS: f64 = 0.1;

/// One member of a family. `param` is `δ`, `j` (an integer) or `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    pub family: Family,
    pub param: f64,
    pub dim: Dimension,
    pub alpha: f64,
    pub p: f64,
    pub c1: f64,
    pub c2: f64,
}

impl CounterexampleSpec {
    pub fn new(family: Family, param: f64, dim: Dimension, alpha: f64, p: f64) -> Result<Self> {
        Self {
            family,
            param,
            dim,
            alpha,
            p,
            c1: DEFAULT_C1,
            c2: DEFAULT_C2,
        }
        .validated()
    }

    pub fn with_constants(self, c1: f64, c2: f64) -> Result<Self> {
        Self { c1, c2, ..self }.validated()
    }

    pub fn with_param(self, param: f64) -> Result<Self> {
        Self { param, ..self }.validated()
    }

    fn validated(self) -> Result<Self> {
        let ok = match self.family {
            Family::FDelta => self.param > 0.0 && self.param <= 0.05,
            Family::GJ => self.param.fract() == 0.0 && (3.0..=14.0).contains(&self.param),
            Family::HEps => self.param > 0.0 && self.param <= 0.1,
        };
        if !ok {
            return Err(Error::Config(format!(
                "parameter {} is outside the range of {} (δ ∈ (0, 1/20], j ∈ 3..=14, ε ∈ (0, 1/10])",
                self.param,
                self.family.name()
            )));
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::Config(format!("p must lie in (1, ∞), got {}", self.p)));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err(Error::Config("c1 and c2 must be positive".into()));
        }
        ComplexOrder::real(self.alpha, self.dim)?;
        Ok(self)
    }

    fn order(&self) -> ComplexOrder {
        ComplexOrder::real(self.alpha, self.dim).expect("validated at construction")
    }

    /// `2^{-j}` for `G_J`.
    fn scale(&self) -> f64 {
        2f64.powi(-(self.param as i32))
    }

    /// The critical order `1 - n + n/p` of the `F_DELTA` family.
    pub fn critical_alpha(dim: Dimension, p: f64) -> f64 {
        1.0 - dim.n() as f64 + dim.n() as f64 / p
    }

    /// Predicted slope of the fitted lower bound in the blow-up direction
    /// (`x = j` for `G_J`, `x = ln(1/ε)` for `H_EPS`); `F_DELTA` grows too
    /// slowly to have one.
    pub fn expected_slope(&self) -> Option<f64> {
        let n = self.dim.n() as f64;
        match self.family {
            Family::GJ => Some(1.0 / self.p - self.alpha - (n - 1.0) / 2.0),
            Family::HEps => Some(-(self.alpha + (n - 1.0) / self.p)),
            Family::FDelta => None,
        }
    }
}

/// Half-angle at `𝟎` of the cone tangent to a ball of `radius` whose centre
/// is at distance `centre_dist` (`sin θ = sinh radius / sinh centre_dist`).
pub fn tangent_cone_half_angle(centre_dist: f64, radius: f64) -> Result<f64> {
    let s = radius.sinh() / centre_dist.sinh();
    if !(s < 1.0) {
        return Err(Error::Config(format!(
            "ball of radius {radius} at distance {centre_dist} contains the cone vertex"
        )));
    }
    Ok(s.asin())
}

/// Angle between `w'` and the `e1` axis.
fn angle_to_axis(w: &HyperbolicPoint) -> f64 {
    let sp = w.spatial();
    let norm = sp.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        0.0
    } else {
        (sp[0] / norm).clamp(-1.0, 1.0).acos()
    }
}

/// The function `f` of the family member.
pub fn build(spec: &CounterexampleSpec) -> Result<FunctionHandle> {
    match spec.family {
        Family::FDelta => build_f_delta(spec),
        Family::GJ => build_g_j(spec),
        Family::HEps => build_h_eps(spec),
    }
}

fn check_family(spec: &CounterexampleSpec, family: Family) -> Result<()> {
    if spec.family != family {
        return Err(Error::Config(format!(
            "expected a {} spec, got {}",
            family.name(),
            spec.family.name()
        )));
    }
    Ok(())
}

pub fn build_f_delta(spec: &CounterexampleSpec) -> Result<FunctionHandle> {
    check_family(spec, Family::FDelta)?;
    let gamma = tangent_cone_half_angle(0.5, 3.0 * spec.c1)?;
    let (delta, n, alpha) = (spec.param, spec.dim.n() as f64, spec.alpha);
    Ok(FunctionHandle::general(move |w| {
        let r = w.rho();
        if r < delta || r > F_DELTA_OUTER || angle_to_axis(w) > gamma {
            return 0.0.into();
        }
        (r.powf(1.0 - n - alpha) / -r.ln()).into()
    }))
}

pub fn build_g_j(spec: &CounterexampleSpec) -> Result<FunctionHandle> {
    check_family(spec, Family::GJ)?;
    let h = spec.scale();
    let width = spec.c2 * h.sqrt();
    Ok(FunctionHandle::general(move |w| {
        let sp = w.spatial();
        let tail = sp[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if (sp[0] - 2.0 * h).abs() <= h && tail <= width {
            1.0.into()
        } else {
            0.0.into()
        }
    }))
}

pub fn build_h_eps(spec: &CounterexampleSpec) -> Result<FunctionHandle> {
    check_family(spec, Family::HEps)?;
    let eps = spec.param;
    Ok(FunctionHandle::radial(move |r| {
        if (r - 1.0 + 2.0 * eps).abs() < eps {
            1.0.into()
        } else {
            0.0.into()
        }
    }))
}

/// `(∫ |f|^p dz)^{1/p}` in geodesic polar coordinates about `𝟎`, with `f`
/// supported in `B_R(𝟎)`, `R = radial_breaks.last()`. Interior breakpoints
/// should mark jumps of `f` in `ρ`. General handles use a product rule on
/// each sphere, which is only accurate for functions smooth in angle.
pub fn lp_norm(f: &FunctionHandle, p: f64, dim: Dimension, radial_breaks: &[f64], q: &QuadratureConfig) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("p must lie in (1, ∞), got {p}"));
    }
    let n = dim.n();
    let area = dim.sphere_area();
    let value = match f {
        FunctionHandle::Radial(g) => integrate_adaptive(
            |r| (g(r).norm().powf(p) * area * r.sinh().powi(n as i32 - 1)).into(),
            radial_breaks,
            q,
        )?,
        FunctionHandle::General(g) => {
            let sphere = sphere_rule(n - 1, crate::fourier::SPHERE_ORDER);
            integrate_adaptive(
                |r| {
                    let s: f64 = sphere
                        .iter()
                        .map(|(omega, w)| {
                            let z = from_polar(&PolarCoord {
                                r,
                                omega: omega.clone(),
                            });
                            w * g(&z).norm().powf(p)
                        })
                        .sum();
                    (s * r.sinh().powi(n as i32 - 1)).into()
                },
                radial_breaks,
                q,
            )?
        }
    };
    Ok(value.value.re.powf(1.0 / p))
}

/// `ω_{n-2} ∫_0^θ sin^{n-2} ψ dψ`: the measure of a cap of the unit sphere.
fn cap_measure(dim: Dimension, theta: f64) -> f64 {
    let n = dim.n();
    if n == 2 {
        return 2.0 * theta;
    }
    let lower = Dimension::new(n - 1).map(|d| d.sphere_area()).unwrap_or(2.0);
    gauss_legendre(24)
        .mapped(0.0, theta)
        .map(|(s, w)| w * s.sin().powi(n as i32 - 2))
        .sum::<f64>()
        * lower
}

/// `ω_{n-2}`, the area of the unit sphere in `R^{n-1}` (2 when `n = 2`).
fn lower_sphere_area(dim: Dimension) -> f64 {
    if dim.n() == 2 {
        2.0
    } else {
        Dimension::new(dim.n() - 1).expect("n - 1 >= 2").sphere_area()
    }
}

/// `‖f‖_p` for a family member, by a quadrature adapted to its support.
pub fn family_norm(spec: &CounterexampleSpec, q: &QuadratureConfig) -> Result<f64> {
    let n = spec.dim.n() as i32;
    let p = spec.p;
    let measure = match spec.family {
        Family::FDelta => {
            let gamma = tangent_cone_half_angle(0.5, 3.0 * spec.c1)?;
            // u = ln r resolves every scale between δ and 1/2
            let breaks = uniform_breaks(spec.param.ln(), F_DELTA_OUTER.ln(), 1.0);
            let radial = integrate_adaptive(
                |u| {
                    let r = u.exp();
                    ((r.powf(1.0 - n as f64 - spec.alpha) / -u).powf(p) * r.sinh().powi(n - 1) * r).into()
                },
                &breaks,
                q,
            )?;
            cap_measure(spec.dim, gamma) * radial.value.re
        }
        Family::GJ => slab_rule(spec).iter().map(|(_, w)| w).sum(),
        Family::HEps => {
            let eps = spec.param;
            gauss_legendre(24)
                .mapped(1.0 - 3.0 * eps, 1.0 - eps)
                .map(|(r, w)| w * r.sinh().powi(n - 1))
                .sum::<f64>()
                * spec.dim.sphere_area()
        }
    };
    Ok(measure.powf(1.0 / p))
}

/// Product rule on `R_j` in the coordinates `(w₁, w'')`, weights including
/// the hyperboloid measure `dw₁ dw'' / w₀`.
fn slab_rule(spec: &CounterexampleSpec) -> Vec<(HyperbolicPoint, f64)> {
    let h = spec.scale();
    let width = spec.c2 * h.sqrt();
    let cross = ball_rule(spec.dim.n() - 1, width, 10);
    let mut out = Vec::with_capacity(10 * cross.len());
    for (w1, a) in gauss_legendre(10).mapped(h, 3.0 * h) {
        for (tail, b) in &cross {
            let mut sp = Vec::with_capacity(spec.dim.n());
            sp.push(w1);
            sp.extend_from_slice(tail);
            let w = HyperbolicPoint::from_spatial(&sp);
            let weight = a * b / w.z0();
            out.push((w, weight));
        }
    }
    out
}

/// `cosh t - cosh d(z, w)` without cancellation, for `z`, `w` on the sheet.
fn cosh_gap(t: f64, z: &HyperbolicPoint, w: &HyperbolicPoint) -> f64 {
    let rz = z.rho();
    let head = 2.0 * (0.5 * (t + rz)).sinh() * (0.5 * (t - rz)).sinh();
    let wp = w.spatial();
    let w2: f64 = wp.iter().map(|x| x * x).sum();
    let dot: f64 = z.spatial().iter().zip(wp).map(|(a, b)| a * b).sum();
    // cosh d = z0 w0 - z'·w' and w0 - 1 = |w'|²/(1 + w0)
    head + dot - z.z0() * w2 / (1.0 + w.z0())
}

/// `cosh t - cosh d` for `ρ(z) = s` and `w` at radius `r`, angle `ψ` from `z'`.
fn polar_gap(t: f64, s: f64, r: f64, cos_psi: f64) -> f64 {
    2.0 * (0.5 * (t + r)).sinh() * (0.5 * (t - r)).sinh() - 2.0 * (0.5 * s).sinh().powi(2) * r.cosh()
        + s.sinh() * r.sinh() * cos_psi
}

/// `M^α_t` kernel as a function of `cosh t - cosh d > 0`. The constant is
/// negative when `Γ(α) < 0`.
struct BallKernel {
    prefactor: f64,
    exponent: f64,
}

impl BallKernel {
    fn new(spec: &CounterexampleSpec, t: f64) -> Result<Self> {
        let c = ball_kernel_log_prefactor(&spec.order(), t)?.exp();
        if c.im.abs() > 1e-10 * c.re.abs() {
            return Err(Error::Domain(format!("kernel constant {c} is not real")));
        }
        Ok(Self {
            prefactor: c.re,
            exponent: spec.alpha - 1.0,
        })
    }

    fn eval(&self, gap: f64) -> f64 {
        self.prefactor * (self.exponent * gap.ln()).exp()
    }
}

/// One point of a lower-bound sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub param: f64,
    pub ratio_lower_bound: f64,
    pub fnorm: f64,
}

/// Weighted sample of the evaluation region together with the radius used
/// in the construction at that point.
struct RegionPoint {
    z: HyperbolicPoint,
    weight: f64,
    t: f64,
}

fn h_eps_region(spec: &CounterexampleSpec) -> Vec<RegionPoint> {
    // M h(z) depends on ρ(z) only; integrate in ρ and multiply by the sphere area
    let s_max = spec.param / 100.0;
    let area = spec.dim.sphere_area();
    let n = spec.dim.n() as i32;
    gauss_legendre(6)
        .mapped(0.0, s_max)
        .map(|(s, w)| {
            let mut omega = vec![0.0; spec.dim.n()];
            omega[0] = 1.0;
            RegionPoint {
                z: from_polar(&PolarCoord { r: s, omega }),
                weight: w * area * s.sinh().powi(n - 1),
                t: 1.0,
            }
        })
        .collect()
}

fn g_j_region(spec: &CounterexampleSpec) -> Vec<RegionPoint> {
    // M g(z) depends on ρ(z) and the angle θ between z' and e1
    let width = spec.c2 * spec.scale().sqrt();
    let n = spec.dim.n() as i32;
    let lower = lower_sphere_area(spec.dim);
    let mut out = Vec::new();
    for (r, wr) in gauss_legendre(6).mapped(G_J_RHO_RANGE.0, G_J_RHO_RANGE.1) {
        let theta_max = (width / r.sinh()).min(1.0).asin();
        for (th, wt) in gauss_legendre(6).mapped(0.0, theta_max) {
            let mut sp = vec![0.0; spec.dim.n()];
            sp[0] = r.sinh() * th.cos();
            sp[1] = r.sinh() * th.sin();
            out.push(RegionPoint {
                z: HyperbolicPoint::from_spatial(&sp),
                weight: wr * wt * lower * r.sinh().powi(n - 1) * th.sin().powi(n - 2),
                t: r,
            });
        }
    }
    out
}

fn f_delta_region(spec: &CounterexampleSpec) -> Vec<RegionPoint> {
    let origin = HyperbolicPoint::origin(spec.dim);
    let centre = Translation::to(&crate::geometry::lorentz_boost(0.5, &origin));
    let n = spec.dim.n() as i32;
    let sphere = sphere_rule(spec.dim.n() - 1, 4);
    let mut out = Vec::new();
    for (s, ws) in gauss_legendre(4).mapped(0.0, spec.c1) {
        for (omega, wo) in &sphere {
            let z = centre.apply(&from_polar(&PolarCoord {
                r: s,
                omega: omega.clone(),
            }));
            let t = z.rho();
            out.push(RegionPoint {
                z,
                weight: ws * wo * s.sinh().powi(n - 1),
                t,
            });
        }
    }
    out
}

/// Kernel integral of `g_j` at `z` with radius `t`; `None` if `R_j` is not
/// strictly inside `B_t(z)`.
fn g_j_mean(
    spec: &CounterexampleSpec,
    slab: &[(HyperbolicPoint, f64)],
    z: &HyperbolicPoint,
    t: f64,
) -> Result<Option<f64>> {
    if !g_j_contained(spec, z, t) {
        return Ok(None);
    }
    let k = BallKernel::new(spec, t)?;
    Ok(Some(slab.iter().map(|(w, wt)| wt * k.eval(cosh_gap(t, z, w))).sum()))
}

/// `cosh d(z, ·)` is convex on `R_j`, so its maximum sits at `w₁ ∈ {2^{-j},
/// 3·2^{-j}}` with `w''` on the boundary sphere pointing away from `z''`.
fn g_j_contained(spec: &CounterexampleSpec, z: &HyperbolicPoint, t: f64) -> bool {
    let h = spec.scale();
    let width = spec.c2 * h.sqrt();
    let zt = &z.spatial()[1..];
    let zn = zt.iter().map(|x| x * x).sum::<f64>().sqrt();
    let far: Vec<f64> = if zn > 0.0 {
        zt.iter().map(|x| -x / zn * width).collect()
    } else {
        let mut e = vec![0.0; zt.len()];
        e[0] = width;
        e
    };
    [h, 3.0 * h].iter().all(|&w1| {
        let mut sp = vec![w1];
        sp.extend_from_slice(&far);
        cosh_gap(t, z, &HyperbolicPoint::from_spatial(&sp)) > 0.0
    })
}

fn h_eps_mean(spec: &CounterexampleSpec, z: &HyperbolicPoint, t: f64) -> Result<Option<f64>> {
    let eps = spec.param;
    let s = z.rho();
    // the shell reaches distance at most 1 - ε + ρ(z) from z
    if !(1.0 - eps + s < t) {
        return Ok(None);
    }
    let k = BallKernel::new(spec, t)?;
    let n = spec.dim.n() as i32;
    let half = (spec.dim.n() as f64 - 3.0) / 2.0;
    let angle = gauss_jacobi(16, half, half)?;
    let lower = lower_sphere_area(spec.dim);
    let mut total = 0.0;
    for (r, wr) in gauss_legendre(12).mapped(1.0 - 3.0 * eps, 1.0 - eps) {
        let inner: f64 = angle
            .nodes
            .iter()
            .zip(&angle.weights)
            .map(|(&c, &w)| w * k.eval(polar_gap(t, s, r, c)))
            .sum();
        total += wr * r.sinh().powi(n - 1) * inner * lower;
    }
    Ok(Some(total))
}

/// Kernel integral of `f_δ` over `S_z ∩ supp f_δ`, where `S_z` is the part of
/// `B_{1/10}(𝟎)` inside the cone at `𝟎` tangent to `B_{c₁}(z)`. Needs a
/// positive kernel (`α > 0`) to bound the full mean from below.
fn f_delta_mean(spec: &CounterexampleSpec, z: &HyperbolicPoint, t: f64, gamma: f64) -> Result<Option<f64>> {
    let s = z.rho();
    let psi_max = tangent_cone_half_angle(s, spec.c1)?;
    if angle_to_axis(z) + psi_max > gamma {
        return Err(Error::Config(format!(
            "c1 = {} is too large: the cone S_z leaves the support cone",
            spec.c1
        )));
    }
    let c = psi_max.cos();
    let contained = (1..=64).all(|i| polar_gap(t, s, S_Z_RADIUS * i as f64 / 64.0, c) > 0.0)
        && polar_gap(t, s, spec.param, c) > 0.0;
    if !contained {
        return Ok(None);
    }
    let k = BallKernel::new(spec, t)?;
    let n = spec.dim.n() as f64;
    let lower = lower_sphere_area(spec.dim);
    let angles: Vec<(f64, f64)> = gauss_legendre(8).mapped(0.0, psi_max).collect();
    let rule = crate::quadrature::composite_rule(&uniform_breaks(spec.param.ln(), S_Z_RADIUS.ln(), 1.0), 12);
    let mut total = 0.0;
    for (u, wu) in rule {
        let r = u.exp();
        let f = r.powf(1.0 - n - spec.alpha) / -u;
        let radial = f * r.sinh().powi(n as i32 - 1) * r;
        let inner: f64 = angles
            .iter()
            .map(|&(psi, w)| w * psi.sin().powi(n as i32 - 2) * k.eval(polar_gap(t, s, r, psi.cos())))
            .sum();
        total += wu * radial * inner * lower;
    }
    Ok(Some(total))
}

/// Lower bound for `‖𝔪^α f‖_p / ‖f‖_p`: the mean at the construction's radius
/// (or the largest over it and the admissible radii of `extra`) integrated
/// over the evaluation region.
pub fn maximal_lower_bound(
    spec: &CounterexampleSpec,
    extra: Option<&TGrid>,
    q: &QuadratureConfig,
) -> Result<RatioSample> {
    let region = match spec.family {
        Family::HEps => h_eps_region(spec),
        Family::GJ => g_j_region(spec),
        Family::FDelta => {
            if !(spec.alpha > 0.0) {
                return domain("the F_DELTA bound restricts a positive kernel; it needs α > 0");
            }
            f_delta_region(spec)
        }
    };
    let slab = if spec.family == Family::GJ {
        slab_rule(spec)
    } else {
        Vec::new()
    };
    let gamma = tangent_cone_half_angle(0.5, 3.0 * spec.c1)?;
    let mean_at = |z: &HyperbolicPoint, t: f64| -> Result<Option<f64>> {
        match spec.family {
            Family::HEps => h_eps_mean(spec, z, t),
            Family::GJ => g_j_mean(spec, &slab, z, t),
            Family::FDelta => f_delta_mean(spec, z, t, gamma),
        }
    };
    let values = region
        .par_iter()
        .map(|pt| {
            let base = mean_at(&pt.z, pt.t)?.ok_or_else(|| {
                Error::Config(format!(
                    "support is not inside the ball of radius {:.4} about an evaluation point; reduce c1/c2",
                    pt.t
                ))
            })?;
            let mut best = base.abs();
            if let Some(tg) = extra {
                for &t in tg.values() {
                    if let Some(v) = mean_at(&pt.z, t)? {
                        best = best.max(v.abs());
                    }
                }
            }
            Ok(pt.weight * best.powf(spec.p))
        })
        .collect::<Result<Vec<f64>>>()?;
    let numerator = values.iter().sum::<f64>().powf(1.0 / spec.p);
    let fnorm = family_norm(spec, q)?;
    Ok(RatioSample {
        param: spec.param,
        ratio_lower_bound: numerator / fnorm,
        fnorm,
    })
}

/// Lower bounds for every parameter of `params`.
pub fn sweep(
    spec: &CounterexampleSpec,
    params: &[f64],
    extra: Option<&TGrid>,
    q: &QuadratureConfig,
) -> Result<Vec<RatioSample>> {
    params
        .iter()
        .map(|&p| maximal_lower_bound(&spec.with_param(p)?, extra, q))
        .collect()
}

/// Abscissa of an exponent fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FitScale {
    /// `x = ln(1/param)`, `y = ln ratio`.
    LogParam,
    /// `x = j`, `y = log₂ ratio`.
    Log2J,
}

pub fn fit_exponent(samples: &[RatioSample], scale: FitScale) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| match scale {
            FitScale::LogParam => (-s.param.ln(), s.ratio_lower_bound.ln()),
            FitScale::Log2J => (s.param, s.ratio_lower_bound.log2()),
        })
        .collect();
    let base = match scale {
        FitScale::LogParam => std::f64::consts::E,
        FitScale::Log2J => 2.0,
    };
    fit_line(&pts, base)
}

pub fn default_scale(family: Family) -> FitScale {
    match family {
        Family::GJ => FitScale::Log2J,
        _ => FitScale::LogParam,
    }
}

/// Rows `family,param,alpha,p,n,ratio_lower_bound,fnorm`.
pub fn write_samples_csv<W: Write>(out: W, spec: &CounterexampleSpec, samples: &[RatioSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["family", "param", "alpha", "p", "n", "ratio_lower_bound", "fnorm"])?;
    for s in samples {
        w.write_record([
            spec.family.name().to_string(),
            s.param.to_string(),
            spec.alpha.to_string(),
            spec.p.to_string(),
            spec.dim.n().to_string(),
            format!("{:.12e}", s.ratio_lower_bound),
            format!("{:.12e}", s.fnorm),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// JSON summary of a family sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub family: Family,
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
    pub c1: f64,
    pub c2: f64,
    pub fit: Option<ExponentFit>,
    pub expected_slope: Option<f64>,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Tolerance on fitted exponents.
pub const SLOPE_TOL: f64 = 0.1;

/// Fit (for `G_J`, `H_EPS`) or monotonicity check (for `F_DELTA`).
pub fn summarize(spec: &CounterexampleSpec, samples: &[RatioSample]) -> Result<SweepSummary> {
    let mut notes = Vec::new();
    let (fit, pass) = match spec.expected_slope() {
        Some(expected) => {
            let fit = fit_exponent(samples, default_scale(spec.family))?;
            let pass =
                (fit.slope - expected).abs() <= SLOPE_TOL && fit.max_residual <= crate::asymptotics::MAX_FIT_RESIDUAL;
            (Some(fit), pass)
        }
        None => {
            let mut sorted = samples.to_vec();
            sorted.sort_by(|a, b| b.param.total_cmp(&a.param));
            let grows = sorted
                .windows(2)
                .all(|w| w[1].ratio_lower_bound > w[0].ratio_lower_bound);
            notes.push("pass = strict growth of the lower bound as δ decreases".into());
            (None, grows && sorted.len() >= 2)
        }
    };
    if spec.family == Family::GJ {
        notes.push(format!(
            "evaluation region: z1 > 0, ρ(z) ∈ [{}, {}], |z''| <= c2 2^(-j/2)",
            G_J_RHO_RANGE.0, G_J_RHO_RANGE.1
        ));
    }
    Ok(SweepSummary {
        family: spec.family,
        n: spec.dim.n(),
        alpha: spec.alpha,
        p: spec.p,
        c1: spec.c1,
        c2: spec.c2,
        fit,
        expected_slope: spec.expected_slope(),
        pass,
        notes,
    })
}
