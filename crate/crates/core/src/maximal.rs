//! Fractional spherical means `M^α_t`, their multipliers, the maximal
//! function over a t-grid, and dyadic sups of the multiplier.
//!
//! For `Re α > 0` the mean is the ball integral
//!
//! `M^α_t f(z) = P^α_t ∫_{B_t(z)} [e^t z - w]^{α-1} f(w) dw`,
//! `P^α_t = 2e^t ((e^t-1)/sinh t)^{n-2} (e^t-1)^{-(2α+n-2)} / Γ(α)`,
//!
//! and `[e^t z - w] = 2e^t (cosh t - cosh d(z, w))`. For every admissible `α`
//! it is also the Fourier multiplier `ω_{n-1} m^α_t(λ)` under the radial
//! transform of [`crate::fourier`]; the spectral route below is what extends
//! the family to `Re α <= 0`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fourier::{
    inverse_fourier_fn, plancherel_density, sphere_integral, ForwardTransform, FunctionHandle, InverseOptions,
    RadialFunction,
};
use crate::geometry::{Dimension, HyperbolicPoint};
use crate::quadrature::{integrate_singular_left, QuadratureConfig};
use crate::special::gamma::{ln_gamma, ln_gamma_real};
use crate::special::legendre::legendre_p;
use crate::special::ComplexOrder;

/// Order, radius and quadrature settings of one mean operator `M^α_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanOperatorSpec {
    pub order: ComplexOrder,
    pub t: f64,
    pub q: QuadratureConfig,
}

impl MeanOperatorSpec {
    pub fn new(order: ComplexOrder, t: f64, q: QuadratureConfig) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Config(format!("mean radius must be positive, got t = {t}")));
        }
        q.validate()?;
        Ok(Self { order, t, q })
    }

    pub fn dim(&self) -> Dimension {
        self.order.dim()
    }

    pub fn with_t(&self, t: f64) -> Result<Self> {
        Self::new(self.order, t, self.q)
    }
}

/// `ln` of `2^{(n-2)/2+α} Γ(n/2) e^{αt} (e^t-1)^{-2α} (sinh t)^{α-(n-2)/2}`.
pub(crate) fn multiplier_log_prefactor(order: &ComplexOrder, t: f64) -> Complex64 {
    let n = order.n() as f64;
    let a = order.alpha();
    let half = (n - 2.0) / 2.0;
    (a + half) * std::f64::consts::LN_2 + ln_gamma_real(n / 2.0) + a * t - 2.0 * a * t.exp_m1().ln()
        + (a - half) * t.sinh().ln()
}

/// `m^α_t(λ) = 2^{(n-2)/2+α} Γ(n/2) e^{αt} (e^t-1)^{-2α} (sinh t)^{α-(n-2)/2} P^{-α-(n-2)/2}_{-1/2+iλ}(cosh t)`.
pub fn multiplier_m_alpha_t(lambda: f64, spec: &MeanOperatorSpec) -> Result<Complex64> {
    let p = legendre_p(&spec.order, lambda, spec.t, &spec.q)?;
    Ok(multiplier_log_prefactor(&spec.order, spec.t).exp() * p)
}

/// `ln P^α_t (2e^t)^{α-1}`: the constant in front of `∫ (cosh t - cosh d)^{α-1} f`.
pub fn ball_kernel_log_prefactor(order: &ComplexOrder, t: f64) -> Result<Complex64> {
    let n = order.n() as f64;
    let a = order.alpha();
    let l2 = std::f64::consts::LN_2;
    let lem1 = t.exp_m1().ln();
    Ok(l2 + t + (n - 2.0) * (lem1 - t.sinh().ln()) - (2.0 * a + n - 2.0) * lem1 - ln_gamma(a)? + (a - 1.0) * (l2 + t))
}

/// `M^α_t f(z)` as the ball integral: a radial integral in geodesic polar
/// coordinates about `z`, with `(cosh t - cosh s)^{α-1}` integrated as a
/// Jacobi weight at `s = t`. Requires `Re α > 0`.
pub fn spherical_mean_direct(f: &FunctionHandle, z: &HyperbolicPoint, spec: &MeanOperatorSpec) -> Result<Complex64> {
    let a = spec.order.alpha();
    if !(a.re > 0.0) {
        return domain(format!(
            "the ball integral needs Re α > 0 (got α = {a}); use the spectral route"
        ));
    }
    if z.n() != spec.order.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.order.n() + 1,
            got: z.n() + 1,
        });
    }
    let t = spec.t;
    let n = spec.order.n() as i32;
    let beta = a - 1.0;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let g = |u: f64| {
        let s = t - u;
        let base = if u == 0.0 {
            t.sinh()
        } else {
            2.0 * (t - 0.5 * u).sinh() * (0.5 * u).sinh() / u
        };
        let inner = match sphere_integral(f, z, s, &spec.q) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        };
        (beta * base.ln()).exp() * inner * s.sinh().powi(n - 1)
    };
    let integral = integrate_singular_left(beta, t, 0.0, &spec.q, g)?.value;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(ball_kernel_log_prefactor(&spec.order, t)?.exp() * integral)
}

/// Cached multiplier samples at the quadrature nodes of one inverse transform.
type MultiplierKey = (usize, u64, u64, u64, u64);

/// Read-mostly cache of multiplier tables keyed by `(n, α, t, Λ)`.
#[derive(Default)]
pub struct MultiplierCache {
    map: RwLock<HashMap<MultiplierKey, Arc<HashMap<u64, Complex64>>>>,
}

impl MultiplierCache {
    pub fn global() -> &'static MultiplierCache {
        static CACHE: OnceLock<MultiplierCache> = OnceLock::new();
        CACHE.get_or_init(MultiplierCache::default)
    }

    fn key(spec: &MeanOperatorSpec, lambda_max: f64) -> MultiplierKey {
        let a = spec.order.alpha();
        (
            spec.order.n(),
            a.re.to_bits(),
            a.im.to_bits(),
            spec.t.to_bits(),
            lambda_max.to_bits(),
        )
    }

    /// Multiplier values at `nodes`, computed once per key and node set.
    pub fn values(
        &self,
        spec: &MeanOperatorSpec,
        lambda_max: f64,
        nodes: &[f64],
    ) -> Result<Arc<HashMap<u64, Complex64>>> {
        let key = Self::key(spec, lambda_max);
        if let Some(table) = self.map.read().unwrap().get(&key) {
            if nodes.iter().all(|l| table.contains_key(&l.to_bits())) {
                return Ok(table.clone());
            }
        }
        let computed = nodes
            .par_iter()
            .map(|&l| Ok((l.to_bits(), multiplier_m_alpha_t(l, spec)?)))
            .collect::<Result<HashMap<_, _>>>()?;
        let table = Arc::new(computed);
        self.map.write().unwrap().insert(key, table.clone());
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Spectral evaluation of `M^α_t` on a compactly supported radial profile:
/// `M^α_t f = ℱ^{-1}[ω_{n-1} m^α_t ℱf]`. The forward transform of `f` is
/// computed once and reused for every `t`.
pub struct SpectralMean {
    forward: ForwardTransform,
    order: ComplexOrder,
    q: QuadratureConfig,
    lambda_max: f64,
    tail_tol: f64,
    /// `∫_Λ^{2Λ} |ℱf| |c|^{-2} dλ` from the cutoff scan; further out the scan
    /// only sees the interpolation floor of the sampled profile.
    fhat_tail: f64,
}

/// Ceiling on the frequency cutoff chosen for spectral means.
pub const SPECTRAL_LAMBDA_CAP: f64 = 240.0;
/// Spectral cutoff: `|ℱf(λ)|` stays below this fraction of its peak beyond `Λ`.
pub const SPECTRAL_CUTOFF_REL: f64 = 1e-8;

impl SpectralMean {
    pub fn new(f: &RadialFunction, order: ComplexOrder, q: QuadratureConfig) -> Result<Self> {
        if f.dim().n() != order.n() {
            return Err(Error::Config("profile and order have different dimensions".into()));
        }
        let forward = ForwardTransform::from_radial(f, SPECTRAL_LAMBDA_CAP, &q)?;
        let dim = f.dim();
        // cutoff: where |ℱf| has fallen below a fixed fraction of its peak for good;
        // the Plancherel weight is left out so sampling noise in f cannot hold it up
        let step = 0.25;
        let samples: Vec<(f64, f64)> = (0..=((SPECTRAL_LAMBDA_CAP / step) as usize))
            .map(|i| {
                let l = i as f64 * step;
                (l, forward.eval(l).norm())
            })
            .collect();
        let peak = samples.iter().map(|s| s.1).fold(0.0, f64::max);
        if peak == 0.0 {
            return domain("profile has a vanishing transform");
        }
        let threshold = SPECTRAL_CUTOFF_REL * peak;
        let last_big = samples.iter().rposition(|s| s.1 > threshold).unwrap_or(0);
        let lambda_max = ((samples[last_big].0 + 4.0) / 4.0).ceil() * 4.0;
        if lambda_max > SPECTRAL_LAMBDA_CAP {
            return Err(Error::TailBound(format!(
                "profile transform does not decay below {threshold:e} before λ = {SPECTRAL_LAMBDA_CAP}"
            )));
        }
        let weighted_peak = samples
            .iter()
            .map(|&(l, v)| v * plancherel_density(l, dim))
            .fold(0.0, f64::max);
        let fhat_tail = samples
            .iter()
            .filter(|s| s.0 > lambda_max && s.0 <= 2.0 * lambda_max)
            .map(|&(l, v)| v * plancherel_density(l, dim) * step)
            .sum();
        Ok(Self {
            forward,
            order,
            q,
            lambda_max,
            // 1e-4 of the crude size ω max(|ℱf||c|^-2) Λ of the retained integral
            tail_tol: 1e-4 * dim.sphere_area() * weighted_peak * lambda_max,
            fhat_tail,
        })
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// `M^α_t f` on `rgrid`.
    pub fn mean(&self, t: f64, rgrid: &[f64]) -> Result<RadialFunction> {
        let spec = MeanOperatorSpec::new(self.order, t, self.q)?;
        let dim = self.order.dim();
        let omega = dim.sphere_area();
        // The discarded tail is bounded from the ℱf scan and the multiplier's
        // size at both ends of [Λ, 2Λ]; a power-law fit of the integrand near Λ
        // would only see the sampling floor of ℱf when m^α_t has not started to decay.
        let m_size = multiplier_m_alpha_t(self.lambda_max, &spec)?
            .norm()
            .max(multiplier_m_alpha_t(2.0 * self.lambda_max, &spec)?.norm());
        let tail = self.fhat_tail * m_size * omega;
        if tail > self.tail_tol {
            return Err(Error::TailBound(format!(
                "spectral tail {tail:e} beyond Λ = {} exceeds {:e}",
                self.lambda_max, self.tail_tol
            )));
        }
        let opts = InverseOptions {
            tail_tol: f64::INFINITY,
            taper: None,
        };
        let cache = MultiplierCache::global();
        // The node set depends on r_max; collect it by a dry run of the rule.
        let nodes = crate::fourier::inverse_nodes(0.0, self.lambda_max, rgrid[rgrid.len() - 1]);
        let table = cache.values(&spec, self.lambda_max, &nodes)?;
        let m = |l: f64| {
            let mv = table
                .get(&l.to_bits())
                .copied()
                .unwrap_or_else(|| multiplier_m_alpha_t(l, &spec).unwrap_or(Complex64::new(f64::NAN, 0.0)));
            mv * self.forward.eval(l) * omega
        };
        let out = inverse_fourier_fn(m, dim, 0.0, self.lambda_max, rgrid, &self.q, &opts)?;
        if out.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "multiplier evaluation failed inside the spectral mean".into(),
            ));
        }
        Ok(out)
    }

    /// `M^α_t f(z)` at a single point.
    pub fn mean_at(&self, t: f64, z: &HyperbolicPoint) -> Result<Complex64> {
        let r = z.rho();
        let grid = if r > 0.0 { vec![0.0, r] } else { vec![0.0, 1e-3] };
        let k = self.mean(t, &grid)?;
        Ok(if r > 0.0 { k.values()[1] } else { k.values()[0] })
    }
}

/// `M^α_t f` for a compactly supported radial profile, on `rgrid`.
pub fn spherical_mean_spectral(f: &RadialFunction, spec: &MeanOperatorSpec, rgrid: &[f64]) -> Result<RadialFunction> {
    SpectralMean::new(f, spec.order, spec.q)?.mean(spec.t, rgrid)
}

/// The kernel `K^α_t = ℱ^{-1}[ω_{n-1} m^α_t]`, regularised by the Gaussian
/// taper `exp(-(λ/Λ_taper)²)` (the untapered multiplier is not integrable
/// against the Plancherel density).
pub fn mean_kernel(spec: &MeanOperatorSpec, rgrid: &[f64], taper: f64) -> Result<RadialFunction> {
    let dim = spec.dim();
    let lambda_max = 6.0 * taper;
    let omega = dim.sphere_area();
    let opts = InverseOptions {
        tail_tol: 1e-8,
        taper: Some(taper),
    };
    let nodes = crate::fourier::inverse_nodes(0.0, lambda_max, rgrid[rgrid.len() - 1]);
    let table = MultiplierCache::global().values(spec, lambda_max, &nodes)?;
    let m = |l: f64| {
        table
            .get(&l.to_bits())
            .copied()
            .unwrap_or(Complex64::new(f64::NAN, 0.0))
            * omega
    };
    inverse_fourier_fn(m, dim, 0.0, lambda_max, rgrid, &spec.q, &opts)
}

/// The literal ball-integral kernel `P^α_t (2e^t)^{α-1} (cosh t - cosh r)^{α-1}`
/// for `r < t` (zero outside); `Re α > 0`.
pub fn direct_kernel(spec: &MeanOperatorSpec, r: f64) -> Result<Complex64> {
    if r >= spec.t {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let a = spec.order.alpha();
    let base = 2.0 * (0.5 * (spec.t + r)).sinh() * (0.5 * (spec.t - r)).sinh();
    Ok((ball_kernel_log_prefactor(&spec.order, spec.t)? + (a - 1.0) * base.ln()).exp())
}

/// A strictly increasing set of positive radii standing in for `t > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    values: Vec<f64>,
    factor: f64,
}

impl TGrid {
    /// `t_k = t_min γ^k` up to `t_max` (inclusive when it lands on the grid).
    pub fn geometric(t_min: f64, gamma: f64, t_max: f64) -> Result<Self> {
        if !(t_min > 0.0 && gamma > 1.0 && t_max >= t_min) {
            return Err(Error::Config(format!(
                "invalid t-grid (t_min = {t_min}, γ = {gamma}, t_max = {t_max})"
            )));
        }
        let mut values = Vec::new();
        let mut t = t_min;
        let mut k = 0;
        while t <= t_max * (1.0 + 1e-12) {
            values.push(t);
            k += 1;
            t = t_min * gamma.powi(k);
        }
        Ok(Self { values, factor: gamma })
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values[0] <= 0.0 || values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("t-grid must be positive and strictly increasing".into()));
        }
        let factor = values.windows(2).map(|w| w[1] / w[0]).fold(1.0, f64::max);
        Ok(Self {
            values,
            factor: factor.max(1.0 + f64::EPSILON),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest ratio of neighbouring radii.
    pub fn factor(&self) -> f64 {
        self.factor
    }

    /// Superset obtained by inserting the geometric midpoint of every gap.
    pub fn refine(&self) -> Self {
        let mut values = Vec::with_capacity(2 * self.values.len());
        for w in self.values.windows(2) {
            values.push(w[0]);
            values.push((w[0] * w[1]).sqrt());
        }
        values.push(self.values[self.values.len() - 1]);
        Self {
            values,
            factor: self.factor.sqrt(),
        }
    }
}

impl Default for TGrid {
    fn default() -> Self {
        Self::geometric(0.05, 1.05, 15.0).expect("default grid is valid")
    }
}

/// Anything that can evaluate `M^α_t f(z)` for a fixed `f` and `α`.
pub trait MeanEvaluator: Sync {
    fn mean(&self, t: f64, z: &HyperbolicPoint) -> Result<Complex64>;
}

/// Ball-integral evaluator (`Re α > 0`).
pub struct DirectMean {
    pub f: FunctionHandle,
    pub order: ComplexOrder,
    pub q: QuadratureConfig,
}

impl MeanEvaluator for DirectMean {
    fn mean(&self, t: f64, z: &HyperbolicPoint) -> Result<Complex64> {
        spherical_mean_direct(&self.f, z, &MeanOperatorSpec::new(self.order, t, self.q)?)
    }
}

impl MeanEvaluator for SpectralMean {
    fn mean(&self, t: f64, z: &HyperbolicPoint) -> Result<Complex64> {
        self.mean_at(t, z)
    }
}

/// `max_k |M^α_{t_k} f(z)|` together with every sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalSample {
    pub value: f64,
    pub argmax_t: f64,
    pub samples: Vec<(f64, Complex64)>,
}

/// The maximal function `sup_t |M^α_t f(z)|` discretised on `tg`.
pub fn maximal_function(eval: &dyn MeanEvaluator, z: &HyperbolicPoint, tg: &TGrid) -> Result<MaximalSample> {
    let samples = tg
        .values()
        .par_iter()
        .map(|&t| Ok((t, eval.mean(t, z)?)))
        .collect::<Result<Vec<_>>>()?;
    let (argmax_t, value) = samples.iter().fold((samples[0].0, 0.0f64), |acc, &(t, v)| {
        if v.norm() > acc.1 {
            (t, v.norm())
        } else {
            acc
        }
    });
    Ok(MaximalSample {
        value,
        argmax_t,
        samples,
    })
}

/// Frequency window `[2^{j-1}, 2^{j+1}]` of the dyadic piece `j` (`[0, 2]` for `j = 0`).
pub fn dyadic_window(j: u32) -> (f64, f64) {
    if j == 0 {
        (0.0, 2.0)
    } else {
        (2f64.powi(j as i32 - 1), 2f64.powi(j as i32 + 1))
    }
}

/// `sup |m^α_t(λ)|` over a frequency window: samples at one fifth of the
/// oscillation period `2π/t`, then golden-section refinement around the
/// three largest samples.
pub fn multiplier_sup(lo: f64, hi: f64, spec: &MeanOperatorSpec) -> Result<f64> {
    let spacing = (2.0 * std::f64::consts::PI / spec.t / 5.0).min((hi - lo) / 64.0);
    let count = ((hi - lo) / spacing).ceil() as usize;
    let grid: Vec<f64> = (0..=count).map(|i| lo + (hi - lo) * i as f64 / count as f64).collect();
    let vals = grid
        .par_iter()
        .map(|&l| Ok(multiplier_m_alpha_t(l, spec)?.norm()))
        .collect::<Result<Vec<f64>>>()?;
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let mut best = vals[idx[0]];
    for &i in idx.iter().take(3) {
        let a = grid[i.saturating_sub(1)];
        let b = grid[(i + 1).min(grid.len() - 1)];
        best = best.max(golden_max(a, b, |l| multiplier_m_alpha_t(l, spec).map(|v| v.norm()))?);
    }
    Ok(best)
}

fn golden_max(mut a: f64, mut b: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..30 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(fc.max(fd))
}

/// `sup_{λ ∈ window(j)} |m^α_t(λ)|`.
pub fn dyadic_multiplier_sup(j: u32, spec: &MeanOperatorSpec) -> Result<f64> {
    let (lo, hi) = dyadic_window(j);
    multiplier_sup(lo, hi, spec)
}
