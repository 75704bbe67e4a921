//! Quadrature building blocks: Gauss–Legendre and Gauss–Jacobi rules,
//! adaptive Gauss–Kronrod integration, and an integrator for integrands with
//! an algebraic (possibly complex-order) singularity at the left endpoint.

use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::gamma::ln_gamma_real;

/// Tolerances and work limits shared by every quadrature in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub jacobi_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_panels: 4096,
            jacobi_nodes: 64,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        if self.max_panels < 1 {
            return Err(Error::Config("max_panels must be at least 1".into()));
        }
        if self.jacobi_nodes < 2 {
            return Err(Error::Config("jacobi_nodes must be at least 2".into()));
        }
        Ok(())
    }

    /// Same limits with both tolerances replaced.
    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    fn accept(&self, value: Complex64, error: f64) -> bool {
        error <= self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// Result of a quadrature together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        panels: 0,
    };

    fn add(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
            panels: self.panels + other.panels,
        }
    }
}

/// Nodes and weights of a rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

type RuleCache = Mutex<HashMap<(usize, u64, u64), Arc<Rule>>>;

fn rule_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `n`-point Gauss–Legendre rule (Newton iteration on the three-term recurrence).
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    let key = (n, u64::MAX, u64::MAX);
    if let Some(rule) = rule_cache().lock().unwrap().get(&key) {
        return rule.clone();
    }
    let rule = Arc::new(legendre_rule(n));
    rule_cache().lock().unwrap().insert(key, rule.clone());
    rule
}

fn legendre_rule(n: usize) -> Rule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// `n`-point Gauss–Jacobi rule for the weight `(1-x)^a (1+x)^b` on [-1, 1],
/// computed with the Golub–Welsch eigenvalue method.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Arc<Rule>> {
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Domain(format!(
            "Jacobi exponents must exceed -1 (got a = {a}, b = {b})"
        )));
    }
    let key = (n, a.to_bits(), b.to_bits());
    if let Some(rule) = rule_cache().lock().unwrap().get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(jacobi_rule(n, a, b));
    rule_cache().lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

fn jacobi_rule(n: usize, a: f64, b: f64) -> Rule {
    let ab = a + b;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        m[(k, k)] = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
    }
    for k in 1..n {
        let kf = k as f64;
        let off = if k == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            let s = 2.0 * kf + ab;
            4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        }
        .sqrt();
        m[(k, k - 1)] = off;
        m[(k - 1, k)] = off;
    }
    let ln_mu0 =
        (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma_real(a + 1.0) + ln_gamma_real(b + 1.0) - ln_gamma_real(ab + 2.0);
    let mu0 = ln_mu0.exp();
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.norm() * WGK[7];
    let mut fv1 = [Complex64::new(0.0, 0.0); 7];
    let mut fv2 = [Complex64::new(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            res_g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let result = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod integration over the partition given by
/// `breaks` (sorted, at least two entries). Panels with the largest error
/// estimate are bisected until the total error meets the tolerance.
pub fn integrate_adaptive<F>(f: F, breaks: &[f64], q: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    if breaks.len() < 2 {
        return Ok(Estimate::ZERO);
    }
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (value, error) = kronrod15(&f, w[0], w[1]);
            heap.push(Panel {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }
    }
    loop {
        let (value, error) = heap
            .iter()
            .chain(done.iter())
            .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| (v + p.value, e + p.error));
        let panels = heap.len() + done.len();
        if q.accept(value, error) {
            return Ok(Estimate { value, error, panels });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Err(Error::NonConvergence {
                    estimate: value,
                    error,
                    panels,
                })
            }
        };
        if panels >= q.max_panels {
            return Err(Error::NonConvergence {
                estimate: value,
                error,
                panels,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-15 * worst.a.abs().max(1e-300) {
            done.push(worst);
            continue;
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = kronrod15(&f, a, b);
            heap.push(Panel { a, b, value, error });
        }
    }
}

/// Breakpoints on `[a, b]` spaced no wider than `max_width`.
pub fn uniform_breaks(a: f64, b: f64, max_width: f64) -> Vec<f64> {
    let count = if max_width.is_finite() && max_width > 0.0 {
        (((b - a) / max_width).ceil() as usize).max(1)
    } else {
        1
    };
    (0..=count)
        .map(|i| {
            if i == count {
                b
            } else {
                a + (b - a) * i as f64 / count as f64
            }
        })
        .collect()
}

/// Widest panel allowed for an integrand oscillating like `cos(freq * x)`:
/// half a period, resolved by the 15-point Kronrod rule.
pub fn oscillation_width(freq: f64) -> f64 {
    if freq.abs() > 0.0 {
        PI / freq.abs()
    } else {
        f64::INFINITY
    }
}

/// `∫_0^len u^beta g(u) du` where `g` is smooth on `[0, len]` and may oscillate
/// with angular frequency up to `osc`.
///
/// The real part of `beta` is absorbed into a Gauss–Jacobi weight on the first
/// panel. A nonzero imaginary part makes `u^{i Im beta}` non-polynomial at the
/// origin, so the first panel is additionally graded geometrically towards 0.
pub fn integrate_singular_left<G>(beta: Complex64, len: f64, osc: f64, q: &QuadratureConfig, g: G) -> Result<Estimate>
where
    G: Fn(f64) -> Complex64,
{
    if len <= 0.0 {
        return Ok(Estimate::ZERO);
    }
    let a = beta.re;
    if a <= -1.0 {
        return Err(Error::Domain(format!("endpoint exponent {beta} is not integrable")));
    }
    let full = |u: f64| (beta * u.ln()).exp() * g(u);
    let mut first = len.min(2.0 * oscillation_width(osc));

    let mut total = if beta.im.abs() < 1e-14 {
        // Shrink the Jacobi panel until the half-order comparison passes;
        // `g` may have structure on a scale much smaller than `len`.
        let outer = first;
        let mut est = jacobi_panel(a, first, q.jacobi_nodes, &g)?;
        while !q.accept(est.value, est.error) && first > 1e-12 * outer {
            first *= 0.25;
            est = jacobi_panel(a, first, q.jacobi_nodes, &g)?;
        }
        if first < outer {
            let breaks = geometric_breaks(first, outer);
            est = est.add(integrate_adaptive(full, &breaks, q)?);
            first = outer;
        }
        est
    } else {
        let levels = ((36.0 / (a + 1.0)).ceil() as usize).clamp(8, 200);
        let smallest = first * 0.5f64.powi(levels as i32);
        let tilt = |u: f64| (Complex64::new(0.0, beta.im) * u.ln()).exp() * g(u);
        let mut est = jacobi_panel(a, smallest, q.jacobi_nodes, &tilt)?;
        let mut lo = smallest;
        for _ in 0..levels {
            let hi = 2.0 * lo;
            est = est.add(integrate_adaptive(full, &[lo, hi], q)?);
            lo = hi;
        }
        est
    };
    if len > first {
        let breaks = uniform_breaks(first, len, oscillation_width(osc));
        total = total.add(integrate_adaptive(full, &breaks, q)?);
    }
    Ok(total)
}

/// Breakpoints `lo, 2 lo, 4 lo, ...` ending exactly at `hi`.
fn geometric_breaks(lo: f64, hi: f64) -> Vec<f64> {
    let mut breaks = vec![lo];
    let mut x = 2.0 * lo;
    while x < hi {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.push(hi);
    breaks
}

/// `∫_0^h u^a g(u) du` by Gauss–Jacobi, with the half-order rule as error estimate.
fn jacobi_panel<G: Fn(f64) -> Complex64>(a: f64, h: f64, nodes: usize, g: &G) -> Result<Estimate> {
    let apply = |rule: &Rule| -> Complex64 {
        let scale = (0.5 * h).powf(a + 1.0);
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| g(0.5 * h * (1.0 + x)) * w)
            .sum::<Complex64>()
            * scale
    };
    let fine = apply(&*gauss_jacobi(nodes, 0.0, a)?);
    let coarse = apply(&*gauss_jacobi((nodes / 2).max(1), 0.0, a)?);
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).norm(),
        panels: 1,
    })
}

/// Composite Gauss–Legendre nodes and weights on the given partition.
pub fn composite_rule(breaks: &[f64], order: usize) -> Vec<(f64, f64)> {
    let rule = gauss_legendre(order);
    breaks
        .windows(2)
        .flat_map(|w| rule.mapped(w[0], w[1]).collect::<Vec<_>>())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn real(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
        move |x| Complex64::new(f(x), 0.0)
    }

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(10);
        let s: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(18)).sum();
        assert_relative_eq!(s, 2.0 / 19.0, max_relative = 1e-14);
        let total: f64 = rule.weights.iter().sum();
        assert_relative_eq!(total, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn jacobi_matches_beta_moments() {
        // ∫_{-1}^{1} (1+x)^b x^2 dx in closed form through the beta function
        let b = -0.6;
        let rule = gauss_jacobi(12, 0.0, b).unwrap();
        let s: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x * x).sum();
        // substitute y = 1 + x: ∫_0^2 y^b (y-1)^2 dy
        let p = |k: f64| 2f64.powf(b + k + 1.0) / (b + k + 1.0);
        let exact = p(2.0) - 2.0 * p(1.0) + p(0.0);
        assert_relative_eq!(s, exact, max_relative = 1e-12);
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let q = QuadratureConfig::default();
        let lam = 40.0;
        let breaks = uniform_breaks(0.0, 3.0, oscillation_width(lam));
        let est = integrate_adaptive(real(|x| (lam * x).cos() * x.exp()), &breaks, &q).unwrap();
        // ∫ e^x cos(λx) = e^x (cos λx + λ sin λx)/(1+λ²)
        let anti = |x: f64| x.exp() * ((lam * x).cos() + lam * (lam * x).sin()) / (1.0 + lam * lam);
        assert_relative_eq!(est.value.re, anti(3.0) - anti(0.0), max_relative = 1e-9);
    }

    #[test]
    fn adaptive_reports_non_convergence() {
        let q = QuadratureConfig {
            max_panels: 3,
            ..Default::default()
        };
        let err = integrate_adaptive(real(|x| (1.0 / x).sin() / x.sqrt()), &[1e-6, 1.0], &q);
        assert!(matches!(err, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn singular_left_real_and_complex_exponent() {
        let q = QuadratureConfig::default().with_tolerances(1e-12, 1e-14);
        // ∫_0^2 u^{-0.7} e^{-u} du = γ(0.3, 2)
        let est = integrate_singular_left(Complex64::new(-0.7, 0.0), 2.0, 0.0, &q, real(|u| (-u).exp())).unwrap();
        let check = integrate_adaptive(
            real(|v: f64| {
                // u = v^{1/0.3}, du = (1/0.3) v^{1/0.3 - 1} dv
                let u = v.powf(1.0 / 0.3);
                (-u).exp() / 0.3
            }),
            &[0.0, 2f64.powf(0.3)],
            &q,
        )
        .unwrap();
        assert_relative_eq!(est.value.re, check.value.re, max_relative = 1e-11);

        // ∫_0^1 u^{β} du = 1/(β+1) for complex β
        let beta = Complex64::new(-0.5, 0.3);
        let est = integrate_singular_left(beta, 1.0, 0.0, &q, real(|_| 1.0)).unwrap();
        let exact = Complex64::new(1.0, 0.0) / (beta + 1.0);
        assert!(
            (est.value - exact).norm() < 1e-9 * exact.norm(),
            "{} vs {}",
            est.value,
            exact
        );
    }
}
