use hypmax::counterexamples::{
    build, family_norm, fit_exponent, maximal_lower_bound, summarize, sweep, write_samples_csv, CounterexampleSpec,
    Family, FitScale,
};
use hypmax::{Dimension, HyperbolicPoint, QuadratureConfig};

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

#[test]
fn parameters_outside_their_ranges_are_rejected() {
    assert!(CounterexampleSpec::new(Family::GJ, 2.5, dim(2), 0.0, 4.0).is_err());
    assert!(CounterexampleSpec::new(Family::HEps, 0.5, dim(2), 0.0, 4.0).is_err());
    assert!(CounterexampleSpec::new(Family::FDelta, 0.01, dim(2), 0.5, 1.0).is_err());
    assert_eq!(Family::parse("g_j").unwrap(), Family::GJ);
    assert!(Family::parse("k").is_err());
}

#[test]
fn shell_family_slope_in_three_dimensions() {
    let q = QuadratureConfig::default();
    let spec = CounterexampleSpec::new(Family::HEps, 0.1, dim(3), 0.1, 3.0).unwrap();
    let eps: Vec<f64> = (0..6).map(|i| 0.1 * 10f64.powf(-(i as f64) * 0.4)).collect();
    let samples = sweep(&spec, &eps, None, &q).unwrap();
    let summary = summarize(&spec, &samples).unwrap();
    assert!(summary.pass, "{summary:?}");
}

#[test]
fn slab_family_slope_in_three_dimensions() {
    let q = QuadratureConfig::default();
    let spec = CounterexampleSpec::new(Family::GJ, 4.0, dim(3), -0.6, 4.0).unwrap();
    let js: Vec<f64> = (4..=9).map(f64::from).collect();
    let samples = sweep(&spec, &js, None, &q).unwrap();
    let fit = fit_exponent(&samples, FitScale::Log2J).unwrap();
    let expected = spec.expected_slope().unwrap();
    assert!((fit.slope - expected).abs() < 0.1, "slope {} vs {expected}", fit.slope);
}

#[test]
fn shell_norm_matches_its_volume() {
    // H_EPS is the indicator of an annulus of width 2ε about radius 1 in the plane
    let q = QuadratureConfig::default();
    let spec = CounterexampleSpec::new(Family::HEps, 0.05, dim(2), 0.2, 2.0).unwrap();
    let area = 2.0 * std::f64::consts::PI * ((1.0 - 0.05f64).cosh() - (1.0 - 3.0 * 0.05f64).cosh());
    let norm = family_norm(&spec, &q).unwrap();
    let f = build(&spec).unwrap();
    let inside = HyperbolicPoint::from_spatial(&[(1.0 - 0.1f64).sinh(), 0.0]);
    assert_eq!(f.eval(&inside).re, 1.0);
    assert!((norm - area.sqrt()).abs() < 1e-6 * norm, "{norm} vs {}", area.sqrt());
}

#[test]
fn samples_csv_has_one_row_per_parameter() {
    let q = QuadratureConfig::default();
    let spec = CounterexampleSpec::new(Family::HEps, 0.1, dim(2), 0.2, 4.0).unwrap();
    let samples = sweep(&spec, &[0.1, 0.05, 0.02], None, &q).unwrap();
    let single = maximal_lower_bound(&spec.with_param(0.05).unwrap(), None, &q).unwrap();
    assert_eq!(single.ratio_lower_bound, samples[1].ratio_lower_bound);
    let file = tempfile::NamedTempFile::new().unwrap();
    write_samples_csv(file.reopen().unwrap(), &spec, &samples).unwrap();
    let text = std::fs::read_to_string(file.path()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,param,alpha,p,n,ratio_lower_bound,fnorm");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("H_EPS,0.1,0.2,4,2,"));
}
