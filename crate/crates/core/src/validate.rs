//! The acceptance suite: ten numbered checks, each reporting a measured
//! quantity against its tolerance.

use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::asymptotics::{check_large_t_reconstruction, check_oscillatory_decay, MAX_FIT_RESIDUAL};
use crate::counterexamples::{summarize, sweep, CounterexampleSpec, Family};
use crate::error::{Error, Result};
use crate::fit::fit_line;
use crate::fourier::{
    inverse_fourier_fn, plancherel_density, spherical_function, ForwardTransform, FunctionHandle, InverseOptions,
    RadialFunction,
};
use crate::geometry::{
    geodesic_distance, iwasawa_distance, lorentz_boost, minkowski_form, Dimension, HyperbolicPoint, IwasawaCoord,
};
use crate::maximal::{
    dyadic_multiplier_sup, multiplier_m_alpha_t, spherical_mean_direct, MeanOperatorSpec, SpectralMean,
};
use crate::quadrature::QuadratureConfig;
use crate::regions::{
    anchors, classify, kohen_sufficient_boundary, necessary_boundary, new_sufficient_boundary, p_critical, RegionQuery,
    Status,
};
use crate::special::ComplexOrder;

/// Schema tag of the JSON report.
pub const REPORT_SCHEMA: &str = "hypmax.validate/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    /// One-line summary of what was measured.
    pub summary: String,
    pub details: serde_json::Value,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {} ({:.1} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.summary,
            self.seconds
        )
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "direct and spectral means agree"),
    (2, "order-zero multiplier is a fixed multiple of the spherical function"),
    (3, "three-dimensional closed forms"),
    (4, "oscillatory decay of the multiplier"),
    (5, "large-t reconstruction of the multiplier"),
    (6, "dyadic multiplier sups"),
    (7, "counterexample exponents"),
    (8, "region map anchors and consistency"),
    (9, "Plancherel round trip"),
    (10, "geometry identities"),
];

struct Outcome {
    pass: bool,
    summary: String,
    details: serde_json::Value,
}

fn dim(n: usize) -> Dimension {
    Dimension::new(n).expect("fixed dimensions are valid")
}

/// Run one criterion; errors inside it count as a failure.
pub fn run_criterion(id: u8, q: &QuadratureConfig) -> Result<CriterionResult> {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::Config(format!("no criterion {id} (valid: 1-10)")))?
        .1;
    let start = Instant::now();
    let outcome = match id {
        1 => mean_oracle(q),
        2 => order_zero_proportionality(q),
        3 => closed_forms(q),
        4 => oscillatory_decay(q),
        5 => reconstruction(q),
        6 => dyadic_sups(q),
        7 => counterexample_exponents(q),
        8 => region_map(),
        9 => round_trip(q),
        _ => geometry_identities(),
    };
    let outcome = outcome.unwrap_or_else(|e| Outcome {
        pass: false,
        summary: format!("error: {e}"),
        details: json!({ "error": e.to_string() }),
    });
    Ok(CriterionResult {
        id,
        name: name.to_string(),
        pass: outcome.pass,
        summary: outcome.summary,
        details: outcome.details,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// All criteria in order.
pub fn run_suite(q: &QuadratureConfig) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, q).expect("ids come from the table"))
        .collect()
}

/// The radial test bump shared by the mean and round-trip checks.
pub fn test_bump(r: f64) -> f64 {
    (-(r / 0.6).powi(2)).exp()
}

/// Support radius of [`test_bump`]; the value there is below `1e-10`.
pub const BUMP_SUPPORT: f64 = 3.0;

fn mean_oracle(q: &QuadratureConfig) -> Result<Outcome> {
    let tol = 1e-3;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for n in [2usize, 3] {
        let d = dim(n);
        let grid: Vec<f64> = (0..=600).map(|i| BUMP_SUPPORT * i as f64 / 600.0).collect();
        let profile = RadialFunction::from_fn(d, grid, |r| test_bump(r).into())?;
        let handle = FunctionHandle::radial(|r| {
            if r <= BUMP_SUPPORT {
                test_bump(r).into()
            } else {
                0.0.into()
            }
        });
        let z = lorentz_boost(0.7, &HyperbolicPoint::origin(d));
        let mut alphas = vec![Complex64::new(1.0, 0.0), Complex64::new(0.7, 0.0)];
        if n == 3 {
            alphas.push(Complex64::new(0.5, 0.3));
        }
        for a in alphas {
            let order = ComplexOrder::new(a, d)?;
            let spectral = SpectralMean::new(&profile, order, *q)?;
            for t in [0.5, 1.0, 2.0] {
                let spec = MeanOperatorSpec::new(order, t, *q)?;
                let direct = spherical_mean_direct(&handle, &z, &spec)?;
                let via_multiplier = spectral.mean_at(t, &z)?;
                let rel = (direct - via_multiplier).norm() / direct.norm();
                worst = worst.max(rel);
                rows.push(json!({"n": n, "alpha": [a.re, a.im], "t": t, "rel_err": rel}));
            }
        }
    }
    Ok(Outcome {
        pass: worst <= tol,
        summary: format!(
            "max relative difference {worst:.2e} over {} cases (tol {tol:e})",
            rows.len()
        ),
        details: json!({ "cases": rows, "tolerance": tol }),
    })
}

fn order_zero_proportionality(q: &QuadratureConfig) -> Result<Outcome> {
    let tol = 1e-6;
    let lambdas = [0.25, 0.5, 1.0, 1.5, 2.5];
    let ts = [0.2, 0.5, 1.0, 2.0, 3.0];
    let mut worst: f64 = 0.0;
    let mut kappas = Vec::new();
    for n in [2usize, 3] {
        let d = dim(n);
        let order = ComplexOrder::real(0.0, d)?;
        let mut ratios = Vec::new();
        for &t in &ts {
            let spec = MeanOperatorSpec::new(order, t, *q)?;
            for &l in &lambdas {
                ratios.push(multiplier_m_alpha_t(l, &spec)? / spherical_function(l, t, d, q)?);
            }
        }
        let kappa = ratios[ratios.len() / 2];
        let spread = ratios.iter().map(|r| (r / kappa - 1.0).norm()).fold(0.0, f64::max);
        worst = worst.max(spread);
        kappas.push(json!({"n": n, "kappa": [kappa.re, kappa.im], "max_rel_spread": spread}));
    }
    Ok(Outcome {
        pass: worst <= tol,
        summary: format!("largest relative spread of m/φ over 5×5 grids {worst:.2e} (tol {tol:e})"),
        details: json!({ "per_dimension": kappas, "tolerance": tol }),
    })
}

fn closed_forms(q: &QuadratureConfig) -> Result<Outcome> {
    let d = dim(3);
    let mut density_err: f64 = 0.0;
    for i in 0..200 {
        let l = 0.1 * (500f64).powf(i as f64 / 199.0);
        density_err = density_err.max((plancherel_density(l, d) / (l * l) - 1.0).abs());
    }
    let mut phi_err: f64 = 0.0;
    for i in 0..10 {
        let l = 0.1 + 19.9 * i as f64 / 9.0;
        for k in 0..10 {
            let r = 0.05 + 4.95 * k as f64 / 9.0;
            let exact = (l * r).sin() / (l * r.sinh());
            phi_err = phi_err.max((spherical_function(l, r, d, q)? - exact).abs());
        }
    }
    let pass = density_err <= 1e-10 && phi_err <= 1e-8;
    Ok(Outcome {
        pass,
        summary: format!(
            "|c|^-2 vs λ²: {density_err:.2e} (tol 1e-10); φ vs sin λr/(λ sinh r): {phi_err:.2e} (tol 1e-8)"
        ),
        details: json!({ "density_rel_err": density_err, "phi_abs_err": phi_err }),
    })
}

fn oscillatory_decay(q: &QuadratureConfig) -> Result<Outcome> {
    let tol = 0.1;
    let mut pass = true;
    let mut rows = Vec::new();
    for (n, a, t) in [(2usize, 0.5, 1.0), (3, 0.0, 1.0), (3, 0.7, 2.0)] {
        let order = ComplexOrder::real(a, dim(n))?;
        let fit = check_oscillatory_decay(&order, t, 5.0, 200.0, q)?;
        let expected = -(a + (n as f64 - 1.0) / 2.0);
        let ok = (fit.slope - expected).abs() <= tol && fit.max_residual <= MAX_FIT_RESIDUAL;
        pass &= ok;
        rows.push(json!({"n": n, "alpha": a, "t": t, "expected": expected, "fit": fit, "pass": ok}));
    }
    let summary = rows
        .iter()
        .map(|r| {
            format!(
                "{:.3} vs {:.2}",
                r["fit"]["slope"].as_f64().unwrap_or(f64::NAN),
                r["expected"]
            )
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Outcome {
        pass,
        summary: format!("envelope slopes {summary} (tol {tol})"),
        details: json!({ "cases": rows }),
    })
}

fn reconstruction(q: &QuadratureConfig) -> Result<Outcome> {
    let tol = 1e-5;
    let mut worst: f64 = 0.0;
    let mut at = json!(null);
    let mut count = 0;
    for n in [2usize, 3, 4] {
        for a in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let order = ComplexOrder::real(a, dim(n))?;
            for t in [2.0, 3.0, 5.0] {
                for l in [1.0, 2.5, 5.0, 10.0, 20.0] {
                    let err = check_large_t_reconstruction(&order, l, t, None, q)?;
                    count += 1;
                    if err > worst {
                        worst = err;
                        at = json!({"n": n, "alpha": a, "t": t, "lambda": l});
                    }
                }
            }
        }
    }
    Ok(Outcome {
        pass: worst <= tol,
        summary: format!("max relative error {worst:.2e} over {count} points (tol {tol:e})"),
        details: json!({ "worst": worst, "worst_at": at, "points": count }),
    })
}

fn dyadic_sups(q: &QuadratureConfig) -> Result<Outcome> {
    let tol = 0.1;
    let (n, a, t) = (3usize, 0.5, 12.0);
    let spec = MeanOperatorSpec::new(ComplexOrder::real(a, dim(n))?, t, *q)?;
    let pts = (3..=8u32)
        .map(|j| Ok((j as f64, dyadic_multiplier_sup(j, &spec)?.log2())))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_line(&pts, 2.0)?;
    let expected = -(a + (n as f64 - 1.0) / 2.0);
    Ok(Outcome {
        pass: (fit.slope - expected).abs() <= tol && fit.max_residual <= MAX_FIT_RESIDUAL,
        summary: format!("slope {:.4} vs {expected} (tol {tol})", fit.slope),
        details: json!({ "log2_sup": pts, "fit": fit, "expected": expected }),
    })
}

fn counterexample_exponents(q: &QuadratureConfig) -> Result<Outcome> {
    let d2 = dim(2);
    let g = CounterexampleSpec::new(Family::GJ, 4.0, d2, -0.3, 4.0)?;
    let g_samples = sweep(&g, &[4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0], None, q)?;
    let g_sum = summarize(&g, &g_samples)?;
    let h = CounterexampleSpec::new(Family::HEps, 0.1, d2, 0.2, 4.0)?;
    let eps: Vec<f64> = (0..7).map(|i| 0.1 * 10f64.powf(-(i as f64) / 3.0)).collect();
    let h_samples = sweep(&h, &eps, None, q)?;
    let h_sum = summarize(&h, &h_samples)?;
    let p = 4.0 / 3.0;
    let f = CounterexampleSpec::new(Family::FDelta, 1e-2, d2, CounterexampleSpec::critical_alpha(d2, p), p)?;
    let f_samples = sweep(&f, &[1e-2, 1e-4, 1e-8], None, q)?;
    let f_sum = summarize(&f, &f_samples)?;
    let norms: Vec<f64> = f_samples.iter().map(|s| s.fnorm).collect();
    let (lo, hi) = norms.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    let norm_variation = hi / lo - 1.0;
    let f_pass = f_sum.pass && norm_variation < 0.5;
    let slope = |s: &crate::counterexamples::SweepSummary| s.fit.map_or(f64::NAN, |f| f.slope);
    Ok(Outcome {
        pass: g_sum.pass && h_sum.pass && f_pass,
        summary: format!(
            "G_J slope {:.3} vs {:.2}; H_EPS slope {:.3} vs {:.2}; F_DELTA growing {} with ‖f‖_p variation {:.0}%",
            slope(&g_sum),
            g.expected_slope().unwrap_or(f64::NAN),
            slope(&h_sum),
            h.expected_slope().unwrap_or(f64::NAN),
            f_sum.pass,
            100.0 * norm_variation
        ),
        details: json!({
            "G_J": {"summary": g_sum, "samples": g_samples},
            "H_EPS": {"summary": h_sum, "samples": h_samples},
            "F_DELTA": {"summary": f_sum, "samples": f_samples, "norm_variation": norm_variation},
        }),
    })
}

fn region_map() -> Result<Outcome> {
    let mut anchor_err: f64 = 0.0;
    for n in 2..=6 {
        let d = dim(n);
        for (name, x, a) in anchors(d) {
            let vals = match name {
                "O" => vec![
                    necessary_boundary(x, d)?.alpha,
                    kohen_sufficient_boundary(x, d)?.alpha,
                    new_sufficient_boundary(x, d)?.alpha,
                ],
                "B" => vec![
                    necessary_boundary(x, d)?.alpha,
                    kohen_sufficient_boundary(x, d)?.alpha,
                    new_sufficient_boundary(x, d)?.alpha,
                ],
                "C" => vec![new_sufficient_boundary(x, d)?.alpha],
                "D" => vec![necessary_boundary(x, d)?.alpha],
                // A = (1, 1) is the limit p -> 1 of 1 - n + n/p
                _ => vec![necessary_boundary(1.0 - 1e-15, d)?.alpha],
            };
            for v in vals {
                anchor_err = anchor_err.max((v - a).abs());
            }
        }
    }
    let pn_ok = p_critical(dim(2)) == 4.0 && p_critical(dim(3)) == 4.0;
    // 10⁴ points: both verdicts would require α above the sufficient and below the necessary curve
    let mut contradictions = 0;
    let mut status_mismatch = 0;
    let mut points = 0;
    for n in 2..=5usize {
        let d = dim(n);
        for i in 0..50 {
            let x = i as f64 / 50.0;
            let p = if x == 0.0 { f64::INFINITY } else { 1.0 / x };
            for k in 0..50 {
                let a = -(n as f64) + (n as f64 + 1.0) * k as f64 / 49.0;
                points += 1;
                let nec = necessary_boundary(x, d)?;
                let suf = new_sufficient_boundary(x, d)?;
                let bounded = a > suf.alpha;
                let unbounded = a < nec.alpha || (nec.strict && a == nec.alpha);
                if bounded && unbounded {
                    contradictions += 1;
                }
                let v = classify(&RegionQuery::new(d, p, a)?)?;
                let expected = if bounded {
                    Status::ProvenBounded
                } else if unbounded {
                    Status::ProvenUnbounded
                } else {
                    Status::Unknown
                };
                if v.status != expected {
                    status_mismatch += 1;
                }
            }
        }
    }
    let pass = anchor_err <= 1e-14 && pn_ok && contradictions == 0 && status_mismatch == 0;
    Ok(Outcome {
        pass,
        summary: format!(
            "anchor error {anchor_err:.1e}, p_2 = p_3 = 4: {pn_ok}, {contradictions} contradictory points of {points}"
        ),
        details: json!({
            "anchor_max_abs_err": anchor_err,
            "p_critical_ok": pn_ok,
            "sweep_points": points,
            "contradictions": contradictions,
            "status_mismatch": status_mismatch,
        }),
    })
}

/// Relative `L²(H^n)` distance between a profile and its transform-inverse;
/// `lambda_max` bounds the frequency cutoff, which is chosen from `|ℱf| |c|^-2`.
pub fn round_trip_error(
    profile: impl Fn(f64) -> f64 + Sync,
    support: f64,
    d: Dimension,
    lambda_max: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    let forward = ForwardTransform::new(|r| profile(r).into(), support, d, lambda_max, q)?;
    // cut where |ℱf| |c|^-2 has dropped for good below 1e-10 of its peak, above the quadrature noise floor
    let scan: Vec<(f64, f64)> = (0..=400)
        .map(|i| {
            let l = lambda_max * i as f64 / 400.0;
            (l, forward.eval(l).norm() * plancherel_density(l, d))
        })
        .collect();
    let peak = scan.iter().map(|s| s.1).fold(0.0, f64::max);
    let cutoff = scan
        .iter()
        .rev()
        .find(|s| s.1 > 1e-10 * peak)
        .map_or(lambda_max, |s| (s.0 + 1.0).min(lambda_max));
    let m = 240;
    let rgrid: Vec<f64> = (0..=m).map(|i| support * i as f64 / m as f64).collect();
    let back = inverse_fourier_fn(
        |l| forward.eval(l),
        d,
        0.0,
        cutoff,
        &rgrid,
        q,
        &InverseOptions::default(),
    )?;
    // Simpson's rule in r with the polar weight
    let (mut num, mut den) = (0.0, 0.0);
    let h = support / m as f64;
    for (i, (&r, v)) in rgrid.iter().zip(back.values()).enumerate() {
        let c = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let w = c * h / 3.0 * r.sinh().powi(d.n() as i32 - 1);
        let f = profile(r);
        num += w * (v - f).norm_sqr();
        den += w * f * f;
    }
    Ok((num / den).sqrt())
}

fn round_trip(q: &QuadratureConfig) -> Result<Outcome> {
    let tol = 1e-4;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    type Bump = (&'static str, fn(f64) -> f64);
    let bumps: [Bump; 2] = [
        ("gaussian", |r| (-(r / 0.5).powi(2)).exp()),
        ("weighted gaussian", |r| {
            (1.0 + 2.0 * r * r) * (-(r / 0.5).powi(2)).exp()
        }),
    ];
    for n in [2usize, 3, 4] {
        for (name, f) in bumps {
            let err = round_trip_error(f, BUMP_SUPPORT, dim(n), 32.0, q)?;
            worst = worst.max(err);
            rows.push(json!({"n": n, "bump": name, "rel_l2_err": err}));
        }
    }
    Ok(Outcome {
        pass: worst <= tol,
        summary: format!("max relative L² error {worst:.2e} (tol {tol:e})"),
        details: json!({ "cases": rows }),
    })
}

fn random_point(rng: &mut StdRng, n: usize) -> HyperbolicPoint {
    let sp: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
    HyperbolicPoint::from_spatial(&sp)
}

fn geometry_identities() -> Result<Outcome> {
    let tol = 1e-9;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut sheet, mut boost, mut shifted, mut iwasawa) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..100 {
        let n = 2 + k % 3;
        let z = random_point(&mut rng, n);
        let w = random_point(&mut rng, n);
        let scale = z.z0() * z.z0();
        sheet = sheet.max((z.form(&z)? - 1.0).abs() / scale);

        let r = rng.gen_range(-2.0..2.0);
        let (bz, bw) = (lorentz_boost(r, &z), lorentz_boost(r, &w));
        let f = z.form(&w)?;
        boost = boost.max((bz.form(&bw)? - f).abs() / f.abs().max(1.0));

        let t: f64 = rng.gen_range(0.0..3.0);
        let diff: Vec<f64> = z
            .coords()
            .iter()
            .zip(w.coords())
            .map(|(a, b)| t.exp() * a - b)
            .collect();
        let lhs = minkowski_form(&diff, &diff)?;
        let rhs = 2.0 * t.exp() * (t.cosh() - geodesic_distance(&z, &w)?.cosh());
        shifted = shifted.max((lhs - rhs).abs() / (t.exp() * f.abs()).max(1.0));

        let mut coord = || IwasawaCoord {
            v: (0..n - 1).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            u: rng.gen_range(-2.0..2.0),
        };
        let (g, a, b) = (coord(), coord(), coord());
        let d0 = iwasawa_distance(&a, &b)?;
        let d1 = iwasawa_distance(&g.compose(&a)?, &g.compose(&b)?)?;
        iwasawa = iwasawa.max((d1 - d0).abs() / d0.max(1.0));
    }
    let worst = sheet.max(boost).max(shifted).max(iwasawa);
    Ok(Outcome {
        pass: worst <= tol,
        summary: format!(
            "sheet {sheet:.1e}, boost {boost:.1e}, shifted form {shifted:.1e}, Iwasawa {iwasawa:.1e} (tol {tol:e}, 100 samples each)"
        ),
        details: json!({"sheet": sheet, "boost": boost, "shifted_form": shifted, "iwasawa": iwasawa, "samples": 100}),
    })
}
