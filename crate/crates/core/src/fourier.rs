//! Radial Helgason–Fourier analysis: the c-function, Plancherel density,
//! spherical functions, the radial transform pair and radial convolution.
//!
//! Both transforms go through the Abel factorisation of the spherical
//! function,
//!
//! `φ_λ(r) = C_n (sinh r)^{2-n} ∫_0^r (cosh r - cosh s)^{(n-3)/2} cos(λs) ds`,
//!
//! which turns the forward transform into a cosine transform of a single
//! λ-independent profile, and the inverse into a fractional integral of a
//! cosine transform.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::geometry::{Dimension, HyperbolicPoint, Translation};
use crate::interp::CubicInterpolant;
use crate::quadrature::{
    composite_rule, integrate_adaptive, integrate_singular_left, uniform_breaks, QuadratureConfig,
};
use crate::special::gamma::{ln_gamma, ln_gamma_real};
use crate::special::ComplexOrder;
use crate::sphere::sphere_rule;

/// Harish-Chandra c-function
/// `c(λ) = 2^{n-2} Γ(n/2)/√π · Γ(iλ)/Γ((n-1)/2 + iλ)`.
pub fn harish_chandra_c(lambda: f64, dim: Dimension) -> Result<Complex64> {
    let order = ComplexOrder::real(0.0, dim)?;
    c_alpha(lambda, &order)
}

/// `c^α(λ) = 2^{n-2} Γ(n/2)/√π · Γ(iλ)/Γ((n-1)/2 + α + iλ)`.
pub fn c_alpha(lambda: f64, order: &ComplexOrder) -> Result<Complex64> {
    if lambda == 0.0 {
        return domain("the c-function has a pole at λ = 0");
    }
    let n = order.n() as f64;
    let il = Complex64::new(0.0, lambda);
    let log = (n - 2.0) * std::f64::consts::LN_2 + ln_gamma_real(n / 2.0) - 0.5 * PI.ln() + ln_gamma(il)?
        - ln_gamma((n - 1.0) / 2.0 + order.alpha() + il)?;
    Ok(log.exp())
}

/// Plancherel density `|c(λ)|^{-2}`, extended by 0 at `λ = 0`.
pub fn plancherel_density(lambda: f64, dim: Dimension) -> f64 {
    let l = lambda.abs();
    if l == 0.0 {
        return 0.0;
    }
    let n = dim.n() as f64;
    let x = PI * l;
    // ln sinh x without overflow
    let ln_sinh = if x > 20.0 {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
    } else {
        x.sinh().ln()
    };
    let lg = ln_gamma(Complex64::new((n - 1.0) / 2.0, l))
        .map(|g| g.re)
        .unwrap_or(f64::NAN);
    (l.ln() + ln_sinh + 2.0 * lg - 2.0 * (n - 2.0) * std::f64::consts::LN_2 - 2.0 * ln_gamma_real(n / 2.0)).exp()
}

/// `Γ(n/2) / (√π Γ((n-1)/2))`, normalising the sphere-average form.
fn sphere_average_constant(n: f64) -> f64 {
    (ln_gamma_real(n / 2.0) - 0.5 * PI.ln() - ln_gamma_real((n - 1.0) / 2.0)).exp()
}

/// `C_n = 2^{(n-1)/2} Γ(n/2) / (√π Γ((n-1)/2))` of the Abel form.
pub fn abel_constant(dim: Dimension) -> f64 {
    let n = dim.n() as f64;
    2f64.powf((n - 1.0) / 2.0) * sphere_average_constant(n)
}

/// Inversion constant `2^{n-2} / (π ω_{n-1})` of the radial transform pair.
pub fn inversion_constant(dim: Dimension) -> f64 {
    2f64.powi(dim.n() as i32 - 2) / (PI * dim.sphere_area())
}

/// The spherical function as a complex quadrature result, before the
/// imaginary part is discarded.
pub fn spherical_function_complex(lambda: f64, r: f64, dim: Dimension, q: &QuadratureConfig) -> Result<Complex64> {
    if !(r >= 0.0) {
        return domain(format!("spherical function needs r >= 0, got {r}"));
    }
    let n = dim.n() as f64;
    let expo = Complex64::new(-(n - 1.0) / 2.0, lambda);
    let sh = r.sinh();
    let integrand = |s: f64| {
        // cosh r - sinh r cos s, written to avoid cancellation near s = 0
        let base = (-r).exp() + 2.0 * sh * (0.5 * s).sin().powi(2);
        (expo * base.ln()).exp() * s.sin().powi(dim.n() as i32 - 2)
    };
    // The integrand concentrates in s ≲ 2 e^{-r}; grade the breakpoints there.
    let s_star = (2.0 * (-r).exp()).min(1.0);
    let mut breaks = vec![0.0];
    breaks.extend((0..=40).rev().map(|k| s_star * 0.5f64.powi(k)));
    breaks.extend(uniform_breaks(s_star, PI, PI / 8.0).into_iter().skip(1));
    let est = integrate_adaptive(integrand, &breaks, q)?;
    Ok(est.value * sphere_average_constant(n))
}

/// `φ_λ(r) = Γ(n/2)/(√π Γ((n-1)/2)) ∫_0^π (cosh r - sinh r cos s)^{-(n-1)/2+iλ} sin^{n-2} s ds`.
pub fn spherical_function(lambda: f64, r: f64, dim: Dimension, q: &QuadratureConfig) -> Result<f64> {
    Ok(spherical_function_complex(lambda, r, dim, q)?.re)
}

fn check_grid(grid: &[f64], what: &str) -> Result<()> {
    if grid.len() < 2 {
        return domain(format!("{what} needs at least two points"));
    }
    if !(grid[0] >= 0.0) || grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|x| !x.is_finite()) {
        return domain(format!("{what} must be finite, nonnegative and strictly increasing"));
    }
    Ok(())
}

/// A sampled radial profile `f(r)` on `H^n`.
#[derive(Debug, Clone)]
pub struct RadialFunction {
    dim: Dimension,
    grid: Vec<f64>,
    values: Vec<Complex64>,
    interp: Arc<CubicInterpolant>,
}

impl RadialFunction {
    pub fn new(dim: Dimension, grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        check_grid(&grid, "radial grid")?;
        if grid.len() != values.len() || values.iter().any(|v| !v.is_finite()) {
            return domain("radial values must be finite and match the grid");
        }
        let interp = Arc::new(CubicInterpolant::new(&grid, &values));
        Ok(Self {
            dim,
            grid,
            values,
            interp,
        })
    }

    pub fn from_fn(dim: Dimension, grid: Vec<f64>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.iter().map(|&r| f(r)).collect();
        Self::new(dim, grid, values)
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Interpolated value; zero beyond the last grid point.
    pub fn eval(&self, r: f64) -> Complex64 {
        if r > self.grid[self.grid.len() - 1] {
            Complex64::new(0.0, 0.0)
        } else {
            self.interp.eval(r)
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_samples(out, "r", &self.grid, &self.values)
    }

    pub fn read_csv<R: Read>(input: R, dim: Dimension) -> Result<Self> {
        let (grid, values) = read_samples(input)?;
        Self::new(dim, grid, values)
    }
}

/// A sampled spectral multiplier `m(λ)`, `λ >= 0`.
#[derive(Debug, Clone)]
pub struct SpectralFunction {
    dim: Dimension,
    lgrid: Vec<f64>,
    values: Vec<Complex64>,
    interp: Arc<CubicInterpolant>,
}

impl SpectralFunction {
    pub fn new(dim: Dimension, lgrid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        check_grid(&lgrid, "spectral grid")?;
        if lgrid.len() != values.len() || values.iter().any(|v| !v.is_finite()) {
            return domain("spectral values must be finite and match the grid");
        }
        let interp = Arc::new(CubicInterpolant::new(&lgrid, &values));
        Ok(Self {
            dim,
            lgrid,
            values,
            interp,
        })
    }

    pub fn from_fn(dim: Dimension, lgrid: Vec<f64>, m: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = lgrid.iter().map(|&l| m(l)).collect();
        Self::new(dim, lgrid, values)
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn lgrid(&self) -> &[f64] {
        &self.lgrid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn eval(&self, lambda: f64) -> Complex64 {
        self.interp.eval(lambda.abs())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_samples(out, "lambda", &self.lgrid, &self.values)
    }

    pub fn read_csv<R: Read>(input: R, dim: Dimension) -> Result<Self> {
        let (grid, values) = read_samples(input)?;
        Self::new(dim, grid, values)
    }
}

fn write_samples<W: Write>(out: W, key: &str, grid: &[f64], values: &[Complex64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([key, "value_re", "value_im"])?;
    for (x, v) in grid.iter().zip(values) {
        w.write_record(&[format!("{x:e}"), format!("{:e}", v.re), format!("{:e}", v.im)])?;
    }
    w.flush()?;
    Ok(())
}

fn read_samples<R: Read>(input: R) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Config(format!("bad numeric field {i} in CSV record {rec:?}")))
        };
        grid.push(field(0)?);
        values.push(Complex64::new(field(1)?, field(2)?));
    }
    Ok((grid, values))
}

/// Gauss–Legendre order used for the cosine sums of both transforms.
const PANEL_ORDER: usize = 20;

/// Precomputed forward transform of a compactly supported radial profile:
/// `ℱf(λ) = ω_{n-1} C_n ∫_0^R cos(λs) A(s) ds` with
/// `A(s) = ∫_s^R f(r) sinh r (cosh r - cosh s)^{(n-3)/2} dr`.
#[derive(Debug, Clone)]
pub struct ForwardTransform {
    dim: Dimension,
    nodes: Vec<(f64, Complex64)>,
}

impl ForwardTransform {
    /// `lambda_max` bounds the frequencies that will be requested; it sets
    /// the panel width of the cosine sum.
    pub fn new<F>(f: F, support: f64, dim: Dimension, lambda_max: f64, q: &QuadratureConfig) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Sync,
    {
        if !(support > 0.0) {
            return domain("forward transform needs a positive support radius");
        }
        let beta = (dim.n() as f64 - 3.0) / 2.0;
        let width = (6.0 / lambda_max.max(1.0)).min(0.25);
        let rule = composite_rule(&uniform_breaks(0.0, support, width), PANEL_ORDER);
        let scale = dim.sphere_area() * abel_constant(dim);
        let nodes = rule
            .par_iter()
            .map(|&(s, w)| {
                let g = |u: f64| {
                    let r = s + u;
                    let base = if u == 0.0 {
                        s.sinh()
                    } else {
                        2.0 * (s + 0.5 * u).sinh() * (0.5 * u).sinh() / u
                    };
                    f(r) * r.sinh() * base.powf(beta)
                };
                let a = integrate_singular_left(Complex64::new(beta, 0.0), support - s, 0.0, q, g)?;
                Ok((s, a.value * (w * scale)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, nodes })
    }

    pub fn from_radial(f: &RadialFunction, lambda_max: f64, q: &QuadratureConfig) -> Result<Self> {
        let support = f.grid[f.grid.len() - 1];
        Self::new(|r| f.eval(r), support, f.dim, lambda_max, q)
    }

    pub fn eval(&self, lambda: f64) -> Complex64 {
        self.nodes.iter().map(|&(s, a)| a * (lambda * s).cos()).sum()
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }
}

/// `ℱf(λ) = ω_{n-1} ∫ f(r) φ_λ(r) (sinh r)^{n-1} dr` on `lgrid`; `f` is taken
/// to vanish beyond its grid.
pub fn radial_fourier(f: &RadialFunction, lgrid: &[f64], q: &QuadratureConfig) -> Result<SpectralFunction> {
    check_grid(lgrid, "spectral grid")?;
    let fwd = ForwardTransform::from_radial(f, lgrid[lgrid.len() - 1], q)?;
    let values = lgrid.par_iter().map(|&l| fwd.eval(l)).collect();
    SpectralFunction::new(f.dim, lgrid.to_vec(), values)
}

/// Options for the inverse transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseOptions {
    /// Largest admissible estimate of the discarded tail `∫_Λ^∞ |m| |c|^{-2} dλ`;
    /// `f64::INFINITY` skips the estimate, for callers that bound the tail themselves.
    pub tail_tol: f64,
    /// Optional Gaussian taper `exp(-(λ/Λ_taper)²)` applied to `m`.
    pub taper: Option<f64>,
}

impl Default for InverseOptions {
    fn default() -> Self {
        Self {
            tail_tol: 1e-8,
            taper: None,
        }
    }
}

/// Estimate `∫_Λ^∞ env(λ) dλ` from the decay of `env` near `Λ`, assuming
/// `env ~ λ^{-p}`; fails when the samples do not decay faster than `1/λ`.
pub fn tail_estimate(samples: &[(f64, f64)]) -> Result<f64> {
    let m = samples.len();
    if m < 8 {
        return Err(Error::TailBound("too few samples to estimate the spectral tail".into()));
    }
    let last = samples[m - 1];
    if last.1 == 0.0 {
        return Ok(0.0);
    }
    // envelope maxima over the two final quarters of the window
    let quarter = m / 4;
    let peak = |lo: usize, hi: usize| {
        samples[lo..hi]
            .iter()
            .fold((0.0f64, 0.0f64), |acc, &(l, v)| if v > acc.1 { (l, v) } else { acc })
    };
    let a = peak(m - 2 * quarter, m - quarter);
    let b = peak(m - quarter, m);
    if b.1 == 0.0 {
        return Ok(0.0);
    }
    if a.1 == 0.0 || b.0 <= a.0 {
        return Err(Error::TailBound(
            "spectral integrand does not decay near the cutoff".into(),
        ));
    }
    let p = -(b.1 / a.1).ln() / (b.0 / a.0).ln();
    let lambda = last.0;
    let env = b.1.max(last.1);
    if p > 40.0 {
        // decay faster than any power the window can resolve
        return Ok(env * lambda / 40.0);
    }
    if !(p > 1.0) {
        return Err(Error::TailBound(format!(
            "spectral integrand decays like λ^-{p:.3}, not integrable beyond the cutoff"
        )));
    }
    Ok(env * lambda / (p - 1.0))
}

fn inverse_rule(lambda_min: f64, lambda_max: f64, r_max: f64) -> Vec<(f64, f64)> {
    let width = (1.5 / r_max.max(1e-3)).min(0.5);
    composite_rule(&uniform_breaks(lambda_min, lambda_max, width), PANEL_ORDER)
}

/// Frequencies at which [`inverse_fourier_fn`] samples its multiplier for a
/// grid ending at `r_max`; lets callers tabulate expensive multipliers once.
pub fn inverse_nodes(lambda_min: f64, lambda_max: f64, r_max: f64) -> Vec<f64> {
    inverse_rule(lambda_min, lambda_max, r_max)
        .into_iter()
        .map(|(l, _)| l)
        .collect()
}

/// `K(r) = c_n ∫_0^Λ m(λ) φ_λ(r) |c(λ)|^{-2} dλ` for a multiplier given as a
/// function, on `rgrid`. The cutoff `Λ = lambda_max` must leave a tail below
/// `opts.tail_tol`.
pub fn inverse_fourier_fn<M>(
    m: M,
    dim: Dimension,
    lambda_min: f64,
    lambda_max: f64,
    rgrid: &[f64],
    q: &QuadratureConfig,
    opts: &InverseOptions,
) -> Result<RadialFunction>
where
    M: Fn(f64) -> Complex64 + Sync,
{
    check_grid(rgrid, "radial grid")?;
    let r_max = rgrid[rgrid.len() - 1];
    let rule = inverse_rule(lambda_min, lambda_max, r_max);
    let weighted: Vec<(f64, Complex64, f64)> = rule
        .par_iter()
        .map(|&(l, w)| {
            let taper = opts.taper.map_or(1.0, |lt| (-(l / lt).powi(2)).exp());
            let v = m(l) * (taper * plancherel_density(l, dim));
            (l, v * w, v.norm())
        })
        .collect();
    if opts.tail_tol.is_finite() {
        let tail_window: Vec<(f64, f64)> = weighted[weighted.len() * 3 / 4..]
            .iter()
            .map(|&(l, _, a)| (l, a))
            .collect();
        let tail = tail_estimate(&tail_window)?;
        if tail > opts.tail_tol {
            return Err(Error::TailBound(format!(
                "estimated tail {tail:e} beyond Λ = {lambda_max} exceeds {:e}",
                opts.tail_tol
            )));
        }
    }
    let cosine = CosineSum::new(&weighted, lambda_max, r_max);
    let cn = inversion_constant(dim);
    let values = rgrid
        .par_iter()
        .map(|&r| Ok(cn * abel_average(&cosine, r, dim, lambda_max, q)?))
        .collect::<Result<Vec<_>>>()?;
    RadialFunction::new(dim, rgrid.to_vec(), values)
}

/// Inverse transform of a sampled multiplier; `m` is interpolated between its
/// grid points and the integral runs over the sampled range.
pub fn radial_inverse_fourier(
    m: &SpectralFunction,
    rgrid: &[f64],
    q: &QuadratureConfig,
    opts: &InverseOptions,
) -> Result<RadialFunction> {
    let lg = m.lgrid();
    inverse_fourier_fn(|l| m.eval(l), m.dim, lg[0], lg[lg.len() - 1], rgrid, q, opts)
}

/// `B(s) = Σ W_k cos(λ_k s)`, tabulated with exact slopes on a fine grid.
struct CosineSum {
    table: CubicInterpolant,
}

impl CosineSum {
    fn new(weighted: &[(f64, Complex64, f64)], lambda_max: f64, s_max: f64) -> Self {
        let h = 0.05 / lambda_max.max(1.0);
        let count = ((s_max / h).ceil() as usize).max(2);
        let xs: Vec<f64> = (0..=count).map(|i| s_max * i as f64 / count as f64).collect();
        let pairs: Vec<(Complex64, Complex64)> = xs
            .par_iter()
            .map(|&s| {
                weighted.iter().fold(
                    (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
                    |(v, d), &(l, w, _)| {
                        let (sn, cs) = (l * s).sin_cos();
                        (v + w * cs, d - w * (l * sn))
                    },
                )
            })
            .collect();
        let (ys, ds) = pairs.into_iter().unzip();
        Self {
            table: CubicInterpolant::with_slopes(xs, ys, ds),
        }
    }

    fn eval(&self, s: f64) -> Complex64 {
        self.table.eval(s)
    }
}

/// `C_n (sinh r)^{2-n} ∫_0^r (cosh r - cosh s)^{(n-3)/2} B(s) ds`, which
/// equals `B(0)` at `r = 0`.
fn abel_average(b: &CosineSum, r: f64, dim: Dimension, lambda_max: f64, q: &QuadratureConfig) -> Result<Complex64> {
    if r == 0.0 {
        return Ok(b.eval(0.0));
    }
    let n = dim.n() as f64;
    let beta = (n - 3.0) / 2.0;
    let sinh_r = r.sinh();
    // normalise (cosh r - cosh s) by sinh r so large r stays finite
    let g = |u: f64| {
        let base = if u == 0.0 {
            1.0
        } else {
            2.0 * (r - 0.5 * u).sinh() * (0.5 * u).sinh() / (u * sinh_r)
        };
        b.eval(r - u) * base.powf(beta)
    };
    let integral = integrate_singular_left(Complex64::new(beta, 0.0), r, lambda_max, q, g)?.value;
    // (sinh r)^{2-n} (sinh r)^{β} with the u^β of the weight left in `integral`
    Ok(integral * (abel_constant(dim) * sinh_r.powf(beta + 2.0 - n)))
}

/// A function on `H^n` handed to the means and convolutions.
#[derive(Clone)]
pub enum FunctionHandle {
    /// `f(w) = profile(ρ(w))`.
    Radial(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
    General(Arc<dyn Fn(&HyperbolicPoint) -> Complex64 + Send + Sync>),
}

impl std::fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Radial(_) => f.write_str("FunctionHandle::Radial"),
            Self::General(_) => f.write_str("FunctionHandle::General"),
        }
    }
}

impl FunctionHandle {
    pub fn radial(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self::Radial(Arc::new(f))
    }

    pub fn general(f: impl Fn(&HyperbolicPoint) -> Complex64 + Send + Sync + 'static) -> Self {
        Self::General(Arc::new(f))
    }

    pub fn eval(&self, w: &HyperbolicPoint) -> Complex64 {
        match self {
            Self::Radial(p) => p(w.rho()),
            Self::General(g) => g(w),
        }
    }
}

/// Angular order of the sphere rule used for non-radial integrands.
pub const SPHERE_ORDER: usize = 24;

/// `∫_{S^{n-1}} f(z ⊕ (s, ω)) dω`: the integral of `f` over the geodesic
/// sphere of radius `s` about `z`, in the angular measure of the unit sphere.
pub fn sphere_integral(f: &FunctionHandle, z: &HyperbolicPoint, s: f64, q: &QuadratureConfig) -> Result<Complex64> {
    let n = z.n();
    match f {
        FunctionHandle::Radial(p) => {
            let rz = z.rho();
            let (cz, sz, cs, ss) = (rz.cosh(), rz.sinh(), s.cosh(), s.sinh());
            let lower_area = if n == 2 {
                2.0
            } else {
                Dimension::new(n - 1)?.sphere_area()
            };
            if rz == 0.0 || s == 0.0 {
                let d = if rz == 0.0 { s } else { rz };
                return Ok(p(d) * Dimension::new(n)?.sphere_area());
            }
            let integrand = |theta: f64| {
                let ch = (cz * cs - sz * ss * theta.cos()).max(1.0);
                p(ch.acosh()) * theta.sin().powi(n as i32 - 2)
            };
            let est = integrate_adaptive(integrand, &uniform_breaks(0.0, PI, PI / 4.0), q)?;
            Ok(est.value * lower_area)
        }
        FunctionHandle::General(g) => {
            let tr = Translation::to(z);
            let (cs, ss) = (s.cosh(), s.sinh());
            let rule = sphere_rule(n - 1, SPHERE_ORDER);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut x = vec![0.0; n + 1];
            for (omega, w) in &rule {
                x[0] = cs;
                for (xi, oi) in x[1..].iter_mut().zip(omega) {
                    *xi = ss * oi;
                }
                let p = HyperbolicPoint::from_coords(tr.apply_coords(&x))
                    .unwrap_or_else(|_| HyperbolicPoint::from_spatial(&tr.apply_coords(&x)[1..]));
                acc += g(&p) * *w;
            }
            Ok(acc)
        }
    }
}

/// `(f * K)(z) = ∫ f(w) K(d(z, w)) dw` for a radial kernel sampled on its grid
/// (and zero beyond it).
pub fn radial_convolution(
    f: &FunctionHandle,
    k: &RadialFunction,
    z: &HyperbolicPoint,
    q: &QuadratureConfig,
) -> Result<Complex64> {
    if z.n() != k.dim.n() {
        return Err(Error::DimensionMismatch {
            expected: k.dim.n() + 1,
            got: z.n() + 1,
        });
    }
    let n = k.dim.n() as i32;
    let reach = k.grid[k.grid.len() - 1];
    let mut breaks: Vec<f64> = k.grid.iter().copied().step_by((k.grid.len() / 64).max(1)).collect();
    if *breaks.last().unwrap() < reach {
        breaks.push(reach);
    }
    let est = integrate_adaptive(
        |s| {
            let inner = sphere_integral(f, z, s, q).unwrap_or(Complex64::new(f64::NAN, 0.0));
            inner * k.eval(s) * s.sinh().powi(n - 1)
        },
        &breaks,
        q,
    )?;
    if !est.value.is_finite() {
        return Err(Error::Domain(
            "inner sphere integral failed in radial convolution".into(),
        ));
    }
    Ok(est.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn c_function_closed_forms() {
        let c = harish_chandra_c(2.0, dim(3)).unwrap();
        assert!((c - Complex64::new(0.0, -0.5)).norm() < 1e-14);
        let o = ComplexOrder::real(1.0, dim(3)).unwrap();
        let c1 = c_alpha(1.0, &o).unwrap();
        assert!((c1 - Complex64::new(-0.5, -0.5)).norm() < 1e-14);
        assert!(harish_chandra_c(0.0, dim(2)).is_err());
        for &l in &[0.3, 2.0, 17.0] {
            let a = harish_chandra_c(l, dim(4)).unwrap().norm();
            let b = harish_chandra_c(-l, dim(4)).unwrap().norm();
            assert_relative_eq!(a, b, max_relative = 1e-13);
        }
    }

    #[test]
    fn plancherel_density_properties() {
        assert_relative_eq!(plancherel_density(3.0, dim(3)), 9.0, max_relative = 1e-12);
        assert_eq!(plancherel_density(0.0, dim(2)), 0.0);
        for n in 2..6 {
            for &l in &[0.1, 1.0, 7.5, 300.0] {
                let c = harish_chandra_c(l, dim(n)).unwrap();
                let cm = harish_chandra_c(-l, dim(n)).unwrap();
                let prod = plancherel_density(l, dim(n)) * (c * cm).re;
                assert_relative_eq!(prod, 1.0, max_relative = 1e-10);
                assert_eq!(plancherel_density(-l, dim(n)), plancherel_density(l, dim(n)));
            }
        }
    }

    #[test]
    fn spherical_function_normalisation_and_closed_form() {
        let q = QuadratureConfig::default().with_tolerances(1e-12, 1e-14);
        for n in 2..5 {
            for &l in &[0.0, 1.0, 5.0] {
                assert_relative_eq!(
                    spherical_function(l, 0.0, dim(n), &q).unwrap(),
                    1.0,
                    max_relative = 1e-12
                );
            }
        }
        let v = spherical_function(2.0, 1.0, dim(3), &q).unwrap();
        assert_relative_eq!(v, 2f64.sin() / (2.0 * 1f64.sinh()), max_relative = 1e-11);
        let z = spherical_function_complex(3.3, 7.0, dim(2), &q).unwrap();
        assert!(z.im.abs() < 1e-12);
    }

    #[test]
    fn gaussian_multiplier_inverse_in_three_dimensions() {
        // m = e^{-λ²}: K(r) = (1/(2π²)) √π r e^{-r²/4} / (4 sinh r)
        let q = QuadratureConfig::default().with_tolerances(1e-11, 1e-14);
        let rgrid: Vec<f64> = (0..=40).map(|i| 0.1 * i as f64).collect();
        let k = inverse_fourier_fn(
            |l| Complex64::new((-l * l).exp(), 0.0),
            dim(3),
            0.0,
            9.0,
            &rgrid,
            &q,
            &InverseOptions::default(),
        )
        .unwrap();
        for (&r, v) in rgrid.iter().zip(k.values()) {
            let expected = if r == 0.0 {
                PI.sqrt() / 4.0 / (2.0 * PI * PI)
            } else {
                PI.sqrt() * r * (-r * r / 4.0).exp() / (4.0 * r.sinh()) / (2.0 * PI * PI)
            };
            assert!((v.re - expected).abs() < 1e-9, "r = {r}: {} vs {expected}", v.re);
        }
    }

    #[test]
    fn tail_check_rejects_slow_decay() {
        let q = QuadratureConfig::default();
        let rgrid = vec![0.0, 0.5, 1.0];
        let err = inverse_fourier_fn(
            |_| Complex64::new(1.0, 0.0),
            dim(2),
            0.0,
            20.0,
            &rgrid,
            &q,
            &InverseOptions::default(),
        );
        assert!(matches!(err, Err(Error::TailBound(_))));
    }

    #[test]
    fn csv_round_trip() {
        let f = RadialFunction::from_fn(dim(2), vec![0.0, 0.5, 1.0], |r| Complex64::new(r, -r * r)).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let g = RadialFunction::read_csv(buf.as_slice(), dim(2)).unwrap();
        assert_eq!(f.values(), g.values());
        assert_eq!(f.grid(), g.grid());
    }
}
