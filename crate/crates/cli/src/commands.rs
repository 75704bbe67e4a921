use std::fmt;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use hypmax::asymptotics::{
    check_c_alpha_decay, check_large_t_reconstruction, check_oscillatory_decay, check_uniform_bound, ClaimReport,
};
use hypmax::counterexamples::{summarize, sweep, write_samples_csv, CounterexampleSpec, Family, SLOPE_TOL};
use hypmax::fourier::{FunctionHandle, RadialFunction};
use hypmax::geometry::lorentz_boost;
use hypmax::maximal::{
    dyadic_multiplier_sup, maximal_function, multiplier_m_alpha_t, spherical_mean_direct, DirectMean, MeanEvaluator,
    MeanOperatorSpec, SpectralMean, TGrid,
};
use hypmax::regions::{anchors, classify, emit_region_csv, region_rows, RegionQuery};
use hypmax::validate::{run_criterion, CRITERIA, REPORT_SCHEMA};
use hypmax::{ComplexOrder, Dimension, Error, HyperbolicPoint, QuadratureConfig};

use crate::output::{csv_header, emit, json_bytes, json_document};
use crate::{Cli, Command, Failure, Format, QuadArgs};

/// A list `a,b,c` or an evenly spaced `lo:hi:count`.
#[derive(Clone)]
pub struct Grid {
    spec: String,
    pub values: Vec<f64>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self.spec)
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("`{x}` is not a number"));
        let values = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("expected lo:hi:count, got `{s}`"));
            }
            let (lo, hi) = (num(parts[0])?, num(parts[1])?);
            let k: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| format!("bad point count in `{s}`"))?;
            match k {
                0 => return Err("a grid needs at least one point".into()),
                1 => vec![lo],
                _ => (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect(),
            }
        } else {
            s.split(',').map(num).collect::<Result<_, _>>()?
        };
        if values.iter().any(|v: &f64| !v.is_finite()) {
            return Err(format!("grid `{s}` has non-finite entries"));
        }
        Ok(Self {
            spec: s.to_string(),
            values,
        })
    }
}

fn fail(e: Error) -> Failure {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::DimensionMismatch { .. } | Error::Io(_) => {
            Failure::Usage(e.to_string())
        }
        other => Failure::Validation(other.to_string()),
    }
}

fn dim(n: usize) -> Result<Dimension, Failure> {
    Dimension::new(n).map_err(fail)
}

fn order(n: usize, re: f64, im: f64) -> Result<ComplexOrder, Failure> {
    ComplexOrder::new(Complex64::new(re, im), dim(n)?).map_err(fail)
}

fn write_out(cli: &Cli, bytes: &[u8]) -> Result<(), Failure> {
    emit(cli.out.as_deref(), bytes).map_err(|e| {
        Failure::Usage(format!(
            "cannot write {}: {e}",
            cli.out.as_ref().map_or("stdout".into(), |p| p.display().to_string())
        ))
    })
}

fn fmt_f(x: f64) -> String {
    format!("{x:.15e}")
}

pub fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let name = cli.command.name();
    let config = format!("{:?}", cli.command);
    match &cli.command {
        Command::Multiplier(a) => multiplier(cli, name, &config, a),
        Command::Mean(a) => mean(cli, name, &config, a),
        Command::Maximal(a) => maximal(cli, name, &config, a),
        Command::Asymptotics(a) => asymptotics(cli, name, &config, a),
        Command::Counterexample(a) => counterexample(cli, name, &config, a),
        Command::Regions(a) => regions(cli, name, &config, a),
        Command::Validate(a) => validate(cli, name, &config, a),
    }
}

/// Emit `rows` (already formatted) as CSV, or as a JSON array of objects.
fn table(
    cli: &Cli,
    name: &str,
    config: &str,
    schema: &str,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<(), Failure> {
    let bytes = match cli.format {
        Format::Csv => {
            let mut s = csv_header(name, config);
            s.push_str(&columns.join(","));
            s.push('\n');
            for r in rows {
                s.push_str(&r.join(","));
                s.push('\n');
            }
            s.into_bytes()
        }
        Format::Json => {
            let objs: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let m: serde_json::Map<String, Value> = columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| (c.to_string(), v.parse::<f64>().map_or_else(|_| json!(v), |x| json!(x))))
                        .collect();
                    Value::Object(m)
                })
                .collect();
            json_bytes(&json_document(schema, name, config, json!({ "rows": objs })))
        }
    };
    write_out(cli, &bytes)
}

#[derive(Debug, Args)]
pub struct MultiplierArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Real part of α
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
    #[arg(long)]
    pub t: f64,
    /// Frequencies: `lo:hi:count` or a comma list (columns lambda,m_re,m_im)
    #[arg(long, default_value = "0:20:201")]
    pub lambda: Grid,
    /// Dyadic pieces `jmin:jmax`; emits `j,sup` rows instead of samples
    #[arg(long)]
    pub dyadic: Option<String>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn multiplier(cli: &Cli, name: &str, config: &str, a: &MultiplierArgs) -> Result<(), Failure> {
    let spec = MeanOperatorSpec::new(order(a.n, a.alpha, a.alpha_im)?, a.t, a.quad.resolve()).map_err(fail)?;
    if let Some(range) = &a.dyadic {
        let bad = || Failure::Usage(format!("--dyadic expects jmin:jmax, got `{range}`"));
        let (lo, hi) = range.split_once(':').ok_or_else(bad)?;
        let (lo, hi): (u32, u32) = (
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
        );
        if lo > hi || hi > 30 {
            return Err(bad());
        }
        let rows = (lo..=hi)
            .map(|j| {
                Ok(vec![
                    j.to_string(),
                    fmt_f(dyadic_multiplier_sup(j, &spec).map_err(fail)?),
                ])
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        return table(cli, name, config, "hypmax.dyadic/1", &["j", "sup"], &rows);
    }
    let rows = a
        .lambda
        .values
        .iter()
        .map(|&l| {
            let m = multiplier_m_alpha_t(l, &spec).map_err(fail)?;
            Ok(vec![fmt_f(l), fmt_f(m.re), fmt_f(m.im)])
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    table(
        cli,
        name,
        config,
        "hypmax.multiplier/1",
        &["lambda", "m_re", "m_im"],
        &rows,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Multiply by the multiplier on the spectral side (any α)
    Spectral,
    /// Ball integral (Re α > 0)
    Direct,
    /// Both, with their relative difference
    Compare,
}

/// The radial test function `exp(-(r/width)²)` cut off at `support`.
#[derive(Debug, Args)]
pub struct BumpArgs {
    #[arg(long, default_value_t = 0.6)]
    pub width: f64,
    #[arg(long, default_value_t = 3.0)]
    pub support: f64,
}

impl BumpArgs {
    fn check(&self) -> Result<(), Failure> {
        if self.width > 0.0 && self.support > 0.0 {
            Ok(())
        } else {
            Err(Failure::Usage("--width and --support must be positive".into()))
        }
    }

    fn profile(&self, d: Dimension) -> Result<RadialFunction, Failure> {
        let grid: Vec<f64> = (0..=600).map(|i| self.support * i as f64 / 600.0).collect();
        let w = self.width;
        RadialFunction::from_fn(d, grid, |r| (-(r / w).powi(2)).exp().into()).map_err(fail)
    }

    fn handle(&self) -> FunctionHandle {
        let (w, s) = (self.width, self.support);
        FunctionHandle::radial(move |r| {
            if r <= s {
                (-(r / w).powi(2)).exp().into()
            } else {
                0.0.into()
            }
        })
    }
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
    /// Radii t
    #[arg(long, default_value = "0.5,1,2")]
    pub t: Grid,
    /// Distances ρ(z) of the evaluation points from the origin
    #[arg(long, default_value = "0:2:21")]
    pub r: Grid,
    #[arg(long, value_enum, default_value_t = Route::Spectral)]
    pub route: Route,
    #[command(flatten)]
    pub bump: BumpArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn check_radii(r: &Grid) -> Result<(), Failure> {
    if r.values.iter().any(|&x| x < 0.0) || r.values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::Usage("--r must be nonnegative and strictly increasing".into()));
    }
    Ok(())
}

fn mean(cli: &Cli, name: &str, config: &str, a: &MeanArgs) -> Result<(), Failure> {
    a.bump.check()?;
    check_radii(&a.r)?;
    let q = a.quad.resolve();
    let ord = order(a.n, a.alpha, a.alpha_im)?;
    let d = ord.dim();
    let spectral = match a.route {
        Route::Direct => None,
        _ => Some(SpectralMean::new(&a.bump.profile(d)?, ord, q).map_err(fail)?),
    };
    let handle = a.bump.handle();
    let mut rows = Vec::new();
    for &t in &a.t.values {
        let spec = MeanOperatorSpec::new(ord, t, q).map_err(fail)?;
        let via_spectrum = match &spectral {
            Some(s) => Some(s.mean(t, &a.r.values).map_err(fail)?),
            None => None,
        };
        for (i, &r) in a.r.values.iter().enumerate() {
            let z = lorentz_boost(r, &HyperbolicPoint::origin(d));
            let direct = match a.route {
                Route::Spectral => None,
                _ => Some(spherical_mean_direct(&handle, &z, &spec).map_err(fail)?),
            };
            let mut row = vec![fmt_f(t), fmt_f(r)];
            match (a.route, &via_spectrum, direct) {
                (Route::Direct, _, Some(v)) => row.extend([fmt_f(v.re), fmt_f(v.im)]),
                (_, Some(s), dv) => {
                    let v = s.values()[i];
                    row.extend([fmt_f(v.re), fmt_f(v.im)]);
                    if let Some(dv) = dv {
                        let rel = (v - dv).norm() / dv.norm().max(f64::MIN_POSITIVE);
                        row.extend([fmt_f(dv.re), fmt_f(dv.im), fmt_f(rel)]);
                    }
                }
                _ => unreachable!("each route computes at least one value"),
            }
            rows.push(row);
        }
    }
    let mut columns = vec!["t", "z_r", "value_re", "value_im"];
    if a.route == Route::Compare {
        columns.extend(["direct_re", "direct_im", "rel_diff"]);
    }
    table(cli, name, config, "hypmax.mean/1", &columns, &rows)
}

#[derive(Debug, Args)]
pub struct MaximalArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
    #[arg(long, default_value = "0:2:11")]
    pub r: Grid,
    #[arg(long, default_value_t = 0.05)]
    pub t_min: f64,
    #[arg(long, default_value_t = 15.0)]
    pub t_max: f64,
    /// Ratio of consecutive radii of the t-grid
    #[arg(long, default_value_t = 1.05)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value_t = Route::Spectral)]
    pub route: Route,
    #[command(flatten)]
    pub bump: BumpArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn maximal(cli: &Cli, name: &str, config: &str, a: &MaximalArgs) -> Result<(), Failure> {
    a.bump.check()?;
    check_radii(&a.r)?;
    let q = a.quad.resolve();
    let ord = order(a.n, a.alpha, a.alpha_im)?;
    let d = ord.dim();
    let tg = TGrid::geometric(a.t_min, a.gamma, a.t_max).map_err(fail)?;
    let eval: Box<dyn MeanEvaluator> = match a.route {
        Route::Spectral => Box::new(SpectralMean::new(&a.bump.profile(d)?, ord, q).map_err(fail)?),
        Route::Direct => Box::new(DirectMean {
            f: a.bump.handle(),
            order: ord,
            q,
        }),
        Route::Compare => return Err(Failure::Usage("maximal takes --route spectral or direct".into())),
    };
    let samples = a
        .r
        .values
        .iter()
        .map(|&r| {
            Ok((
                r,
                maximal_function(eval.as_ref(), &lorentz_boost(r, &HyperbolicPoint::origin(d)), &tg).map_err(fail)?,
            ))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    match cli.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = samples
                .iter()
                .flat_map(|(r, s)| {
                    s.samples
                        .iter()
                        .map(move |&(t, v)| vec![fmt_f(t), fmt_f(*r), fmt_f(v.re), fmt_f(v.im)])
                })
                .collect();
            table(
                cli,
                name,
                config,
                "hypmax.maximal/1",
                &["t", "z_r", "value_re", "value_im"],
                &rows,
            )
        }
        Format::Json => {
            let points: Vec<Value> = samples
                .iter()
                .map(|(r, s)| json!({"z_r": r, "sup": s.value, "argmax_t": s.argmax_t}))
                .collect();
            let body = json!({"t_grid_factor": tg.factor(), "t_points": tg.values().len(), "points": points});
            write_out(cli, &json_bytes(&json_document("hypmax.maximal/1", name, config, body)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Envelope decay slope of |m^α_t(λ)| on [lo, hi]
    Oscillatory,
    /// Calibrated bound |m^α_t(λ)| <= C (1+t) e^{-(n-1)t/2}
    Uniform,
    /// Large-t two-wave reconstruction error
    Reconstruction,
    /// Decay slope of the k-th difference of c^α
    CAlpha,
    All,
}

#[derive(Debug, Args)]
pub struct AsymptoticsArgs {
    #[arg(long, value_enum, default_value_t = Check::All)]
    pub check: Check,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
    /// Radius for the oscillatory check (t <= π)
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Frequency window of the decay fits
    #[arg(long, default_value_t = 5.0)]
    pub lo: f64,
    #[arg(long, default_value_t = 200.0)]
    pub hi: f64,
    /// Difference order for the c^α check
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    /// Frequencies of the uniform and reconstruction checks
    #[arg(long, default_value = "1,2.5,5,10,20")]
    pub lambda: Grid,
    /// Radii of the uniform and reconstruction checks
    #[arg(long, default_value = "2,3,5")]
    pub t_grid: Grid,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn claim_row(r: &ClaimReport) -> Vec<String> {
    vec![
        r.claim.clone(),
        fmt_f(r.expected_slope),
        fmt_f(r.fitted_slope),
        fmt_f(r.residual),
        r.pass.to_string(),
    ]
}

fn asymptotics(cli: &Cli, name: &str, config: &str, a: &AsymptoticsArgs) -> Result<(), Failure> {
    let q = a.quad.resolve();
    let ord = order(a.n, a.alpha, a.alpha_im)?;
    let n = a.n as f64;
    let re = a.alpha;
    let run = |c: Check| a.check == Check::All || a.check == c;
    let params = json!({"n": a.n, "alpha": [a.alpha, a.alpha_im]});
    let mut reports: Vec<ClaimReport> = Vec::new();
    let mut extra = serde_json::Map::new();
    if run(Check::Oscillatory) {
        let fit = check_oscillatory_decay(&ord, a.t, a.lo, a.hi, &q).map_err(fail)?;
        let mut p = params.clone();
        p["t"] = json!(a.t);
        p["window"] = json!([a.lo, a.hi]);
        reports.push(ClaimReport::from_fit(
            "oscillatory_decay",
            p,
            -(re + (n - 1.0) / 2.0),
            &fit,
            SLOPE_TOL,
        ));
    }
    if run(Check::CAlpha) {
        let fit = check_c_alpha_decay(&ord, a.k, a.lo.max(1.0), a.hi, 24).map_err(fail)?;
        let mut p = params.clone();
        p["k"] = json!(a.k);
        p["window"] = json!([a.lo.max(1.0), a.hi]);
        let expected = 1.0 - re - (n - 1.0) / 2.0 - a.k as f64;
        reports.push(ClaimReport::from_fit("c_alpha_decay", p, expected, &fit, SLOPE_TOL));
    }
    let mut pass = reports.iter().all(|r| r.pass);
    if run(Check::Uniform) {
        let b = check_uniform_bound(&ord, &a.lambda.values, &a.t_grid.values, &q).map_err(fail)?;
        let ok = b.worst_ratio <= 1.2 * b.calibrated_constant;
        pass &= ok;
        extra.insert(
            "uniform_bound".into(),
            json!({"report": b, "held_out_margin": 1.2, "pass": ok}),
        );
    }
    if run(Check::Reconstruction) {
        let mut worst = 0.0f64;
        for &t in &a.t_grid.values {
            for &l in &a.lambda.values {
                worst = worst.max(check_large_t_reconstruction(&ord, l, t, None, &q).map_err(fail)?);
            }
        }
        let ok = worst <= 1e-5;
        pass &= ok;
        extra.insert(
            "reconstruction".into(),
            json!({"max_rel_err": worst, "tolerance": 1e-5, "pass": ok}),
        );
    }
    let bytes = match cli.format {
        Format::Json => {
            let mut body = json!({"claims": reports, "pass": pass});
            body.as_object_mut().expect("object literal").extend(extra);
            json_bytes(&json_document("hypmax.asymptotics/1", name, config, body))
        }
        Format::Csv => {
            let mut s = csv_header(name, config);
            s.push_str("claim,expected_slope,fitted_slope,residual,pass\n");
            for r in &reports {
                s.push_str(&claim_row(r).join(","));
                s.push('\n');
            }
            for (k, v) in &extra {
                s.push_str(&format!("# {k}: {v}\n"));
            }
            s.into_bytes()
        }
    };
    write_out(cli, &bytes)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Validation(
            "asymptotics: at least one check is out of tolerance".into(),
        ))
    }
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// f_delta, g_j or h_eps
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Order α (defaults to the critical order 1-n+n/p for f_delta)
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub p: f64,
    /// Parameters: a comma list, `a:b` or `a:b:count` (log-spaced for δ and ε, integer steps for j)
    #[arg(long)]
    pub sweep: String,
    #[arg(long, default_value_t = hypmax::counterexamples::DEFAULT_C1)]
    pub c1: f64,
    #[arg(long, default_value_t = hypmax::counterexamples::DEFAULT_C2)]
    pub c2: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).map_err(|e| e.to_string())
}

/// Resolve a sweep descriptor for `family`.
pub fn sweep_params(family: Family, s: &str) -> Result<Vec<f64>, String> {
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("`{x}` is not a number"));
    if !s.contains(':') {
        return s.split(',').map(num).collect();
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() > 3 {
        return Err(format!("expected a:b or a:b:count, got `{s}`"));
    }
    let (a, b) = (num(parts[0])?, num(parts[1])?);
    if family == Family::GJ {
        if parts.len() == 3 || a.fract() != 0.0 || b.fract() != 0.0 || a > b {
            return Err(format!("j sweeps are jmin:jmax with integers, got `{s}`"));
        }
        return Ok((a as i64..=b as i64).map(|j| j as f64).collect());
    }
    let k: usize = match parts.get(2) {
        Some(c) => c.trim().parse().map_err(|_| format!("bad point count in `{s}`"))?,
        None => 7,
    };
    if !(a > 0.0 && b > 0.0) || k < 2 {
        return Err(format!(
            "log-spaced sweeps need positive endpoints and at least two points, got `{s}`"
        ));
    }
    Ok((0..k).map(|i| a * (b / a).powf(i as f64 / (k - 1) as f64)).collect())
}

fn counterexample(cli: &Cli, name: &str, config: &str, a: &CounterexampleArgs) -> Result<(), Failure> {
    let q = a.quad.resolve();
    let d = dim(a.n)?;
    let params = sweep_params(a.family, &a.sweep).map_err(Failure::Usage)?;
    let alpha = match (a.alpha, a.family) {
        (Some(x), _) => x,
        (None, Family::FDelta) => CounterexampleSpec::critical_alpha(d, a.p),
        (None, _) => return Err(Failure::Usage("--alpha is required for this family".into())),
    };
    let first = *params.first().ok_or_else(|| Failure::Usage("empty sweep".into()))?;
    let spec = CounterexampleSpec::new(a.family, first, d, alpha, a.p)
        .and_then(|s| s.with_constants(a.c1, a.c2))
        .map_err(fail)?;
    let samples = sweep(&spec, &params, None, &q).map_err(fail)?;
    let summary = summarize(&spec, &samples).map_err(fail)?;
    let bytes = match cli.format {
        Format::Csv => {
            let mut buf = csv_header(name, config).into_bytes();
            write_samples_csv(&mut buf, &spec, &samples).map_err(fail)?;
            eprintln!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            buf
        }
        Format::Json => json_bytes(&json_document(
            "hypmax.counterexample/1",
            name,
            config,
            json!({"summary": summary, "samples": samples}),
        )),
    };
    write_out(cli, &bytes)?;
    if summary.pass {
        Ok(())
    } else {
        Err(Failure::Validation(format!(
            "{}: sweep out of tolerance",
            a.family.name()
        )))
    }
}

#[derive(Debug, Args)]
pub struct RegionsArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Number of 1/p samples in [0, 1)
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    /// Classify one point instead of emitting curves; `inf` for p = ∞
    #[arg(long)]
    pub classify_p: Option<String>,
    /// Re α of the classified point
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
}

fn regions(cli: &Cli, name: &str, config: &str, a: &RegionsArgs) -> Result<(), Failure> {
    let d = dim(a.n)?;
    if let Some(p) = &a.classify_p {
        let pv = if p.eq_ignore_ascii_case("inf") {
            f64::INFINITY
        } else {
            p.parse()
                .map_err(|_| Failure::Usage(format!("--classify-p expects a number or `inf`, got `{p}`")))?
        };
        let alpha = a
            .alpha
            .ok_or_else(|| Failure::Usage("--classify-p needs --alpha".into()))?;
        let v = classify(&RegionQuery::new(d, pv, alpha).map_err(fail)?).map_err(fail)?;
        let p_json = if pv.is_infinite() { json!("inf") } else { json!(pv) };
        let body = json!({"n": a.n, "p": p_json, "alpha": alpha, "status": v.status, "binding_constraint": v.binding_constraint, "note": v.note});
        return write_out(cli, &json_bytes(&json_document("hypmax.verdict/1", name, config, body)));
    }
    if a.grid == 0 {
        return Err(Failure::Usage("--grid must be positive".into()));
    }
    let inv_p: Vec<f64> = (0..a.grid).map(|i| i as f64 / a.grid as f64).collect();
    let bytes = match cli.format {
        Format::Csv => {
            let mut buf = csv_header(name, config).into_bytes();
            emit_region_csv(&mut buf, d, &inv_p).map_err(fail)?;
            buf
        }
        Format::Json => {
            let anchors: Vec<Value> = anchors(d)
                .into_iter()
                .map(|(label, x, y)| json!({"label": label, "inv_p": x, "alpha": y}))
                .collect();
            let rows = region_rows(d, &inv_p).map_err(fail)?;
            json_bytes(&json_document(
                "hypmax.regions/1",
                name,
                config,
                json!({"n": a.n, "p_critical": hypmax::regions::p_critical(d), "anchors": anchors, "rows": rows}),
            ))
        }
    };
    write_out(cli, &bytes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Criteria 1 to 10
    Primary,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = Suite::Primary)]
    pub suite: Suite,
    /// Run only these criteria (comma list of ids)
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn validate(cli: &Cli, name: &str, config: &str, a: &ValidateArgs) -> Result<(), Failure> {
    let q: QuadratureConfig = a.quad.resolve();
    let ids: Vec<u8> = if a.only.is_empty() {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        a.only.clone()
    };
    let mut results = Vec::new();
    for id in ids {
        let r = run_criterion(id, &q).map_err(fail)?;
        eprintln!("{}", r.line());
        results.push(r);
    }
    let pass = results.iter().all(|r| r.pass);
    let bytes = match cli.format {
        Format::Json => json_bytes(&json_document(
            REPORT_SCHEMA,
            name,
            config,
            json!({"pass": pass, "results": results}),
        )),
        Format::Csv => {
            let mut buf = csv_header(name, config).into_bytes();
            {
                let mut w = csv::Writer::from_writer(&mut buf);
                w.write_record(["id", "name", "pass", "summary"]).map_err(io_fail)?;
                for r in &results {
                    w.write_record([r.id.to_string(), r.name.clone(), r.pass.to_string(), r.summary.clone()])
                        .map_err(io_fail)?;
                }
                w.flush().map_err(|e| Failure::Usage(e.to_string()))?;
            }
            buf
        }
    };
    write_out(cli, &bytes)?;
    if pass {
        Ok(())
    } else {
        let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| r.id.to_string()).collect();
        Err(Failure::Validation(format!("failing criteria: {}", failed.join(", "))))
    }
}

fn io_fail(e: csv::Error) -> Failure {
    Failure::Usage(e.to_string())
}
