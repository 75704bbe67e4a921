use std::f64::consts::PI;

use hypmax::fourier::{FunctionHandle, RadialFunction};
use hypmax::geometry::lorentz_boost;
use hypmax::maximal::{
    direct_kernel, dyadic_multiplier_sup, maximal_function, mean_kernel, multiplier_m_alpha_t, multiplier_sup,
    spherical_mean_direct, DirectMean, MeanOperatorSpec, SpectralMean, TGrid,
};
use hypmax::{ComplexOrder, Dimension, HyperbolicPoint, QuadratureConfig};
use num_complex::Complex64;

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

fn spec(n: usize, a: f64, t: f64) -> MeanOperatorSpec {
    MeanOperatorSpec::new(ComplexOrder::real(a, dim(n)).unwrap(), t, QuadratureConfig::default()).unwrap()
}

fn bump(r: f64) -> f64 {
    (-(r / 0.6).powi(2)).exp()
}

fn bump_profile(n: usize) -> RadialFunction {
    let grid: Vec<f64> = (0..=600).map(|i| 3.0 * i as f64 / 600.0).collect();
    RadialFunction::from_fn(dim(n), grid, |r| bump(r).into()).unwrap()
}

#[test]
fn constant_function_averages_to_two_pi() {
    let one = FunctionHandle::general(|_| Complex64::new(1.0, 0.0));
    let z = HyperbolicPoint::from_spatial(&[0.4, -1.1]);
    for t in [0.5, 2.0] {
        let v = spherical_mean_direct(&one, &z, &spec(2, 1.0, t)).unwrap();
        assert!((v - 2.0 * PI).norm() < 1e-8, "t = {t}: {v}");
    }
}

#[test]
fn tapered_kernel_lives_on_the_ball() {
    let s = spec(2, 1.0, 1.0);
    let rgrid: Vec<f64> = (0..=40).map(|i| 0.05 + 1.95 * i as f64 / 40.0).collect();
    let k = mean_kernel(&s, &rgrid, 80.0).unwrap();
    let peak = k.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (&r, v) in rgrid.iter().zip(k.values()) {
        if r > 1.1 {
            assert!(v.norm() <= 1e-3 * peak, "K({r}) = {v}, peak {peak}");
        }
        if r < 0.9 {
            let exact = direct_kernel(&s, r).unwrap();
            assert!(
                (v - exact).norm() <= 1e-2 * exact.norm(),
                "K({r}) = {v}, ball kernel {exact}"
            );
        }
    }
}

#[test]
fn spectral_mean_is_continuous_through_order_zero() {
    let profile = bump_profile(3);
    let z = lorentz_boost(0.4, &HyperbolicPoint::origin(dim(3)));
    let at = |a: f64| {
        let order = ComplexOrder::real(a, dim(3)).unwrap();
        SpectralMean::new(&profile, order, QuadratureConfig::default())
            .unwrap()
            .mean_at(1.0, &z)
            .unwrap()
    };
    let (lo, mid, hi) = (at(-0.05), at(0.0), at(0.05));
    assert!((hi - lo).norm() < 0.3 * mid.norm(), "{lo} {mid} {hi}");
    // a smooth family is nearly linear over a short interval
    assert!(((hi + lo) * 0.5 - mid).norm() < 1e-2 * mid.norm(), "{lo} {mid} {hi}");
}

#[test]
fn refined_grid_never_lowers_the_maximal_function() {
    let eval = DirectMean {
        f: FunctionHandle::radial(|r| if r <= 3.0 { bump(r).into() } else { 0.0.into() }),
        order: ComplexOrder::real(0.8, dim(2)).unwrap(),
        q: QuadratureConfig::default(),
    };
    let z = lorentz_boost(0.5, &HyperbolicPoint::origin(dim(2)));
    let coarse = TGrid::geometric(0.1, 1.5, 4.0).unwrap();
    let fine = coarse.refine();
    assert!(fine.factor() < coarse.factor());
    let a = maximal_function(&eval, &z, &coarse).unwrap();
    let b = maximal_function(&eval, &z, &fine).unwrap();
    assert!(b.value >= a.value);
    assert_eq!(b.samples.len(), 2 * a.samples.len() - 1);
}

#[test]
fn lowest_dyadic_piece_is_the_sup_over_zero_to_two() {
    let s = spec(3, 0.5, 2.0);
    assert_eq!(
        dyadic_multiplier_sup(0, &s).unwrap(),
        multiplier_sup(0.0, 2.0, &s).unwrap()
    );
    // brute force on a fine grid from below
    let brute = (0..=2000)
        .map(|i| multiplier_m_alpha_t(2.0 * i as f64 / 2000.0, &s).unwrap().norm())
        .fold(0.0, f64::max);
    let sup = dyadic_multiplier_sup(0, &s).unwrap();
    assert!(sup >= brute * (1.0 - 1e-12) && sup <= brute * (1.0 + 1e-6));
}
