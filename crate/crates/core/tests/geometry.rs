use hypmax::geometry::{
    from_polar, geodesic_distance, iwasawa_distance, lorentz_boost, shifted_form, to_polar, IwasawaCoord, Translation,
};
use hypmax::HyperbolicPoint;
use proptest::prelude::*;

fn point(n: usize) -> impl Strategy<Value = HyperbolicPoint> {
    prop::collection::vec(-3.0..3.0f64, n).prop_map(|sp| HyperbolicPoint::from_spatial(&sp))
}

fn pair() -> impl Strategy<Value = (HyperbolicPoint, HyperbolicPoint)> {
    (2usize..5).prop_flat_map(|n| (point(n), point(n)))
}

fn iwasawa(n: usize) -> impl Strategy<Value = IwasawaCoord> {
    (prop::collection::vec(-2.0..2.0f64, n - 1), -2.0..2.0f64).prop_map(|(v, u)| IwasawaCoord { v, u })
}

proptest! {
    #[test]
    fn boosts_and_translations_are_isometries((z, w) in pair(), r in -2.0..2.0f64) {
        let d = geodesic_distance(&z, &w).unwrap();
        let boosted = geodesic_distance(&lorentz_boost(r, &z), &lorentz_boost(r, &w)).unwrap();
        prop_assert!((boosted - d).abs() <= 1e-9 * d.max(1.0));
        let tr = Translation::to(&z);
        let moved = geodesic_distance(&tr.apply(&z), &tr.apply(&w)).unwrap();
        prop_assert!((moved - d).abs() <= 1e-9 * d.max(1.0));
    }

    #[test]
    fn translation_sends_origin_to_target((z, _w) in pair()) {
        let image = Translation::to(&z).apply(&HyperbolicPoint::origin(hypmax::Dimension::new(z.n()).unwrap()));
        prop_assert!(geodesic_distance(&image, &z).unwrap() < 1e-9);
    }

    #[test]
    fn triangle_inequality((z, w) in pair(), s in prop::collection::vec(-3.0..3.0f64, 4)) {
        let v = HyperbolicPoint::from_spatial(&s[..z.n()]);
        let d = |a, b| geodesic_distance(a, b).unwrap();
        prop_assert!(d(&z, &w) <= d(&z, &v) + d(&v, &w) + 1e-9);
    }

    #[test]
    fn shifted_form_matches_distance((z, w) in pair(), t in 0.0..3.0f64) {
        let lhs = shifted_form(t, &z, &w).unwrap();
        let rhs = 2.0 * t.exp() * (t.cosh() - geodesic_distance(&z, &w).unwrap().cosh());
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (t.exp() * z.form(&w).unwrap()).max(1.0));
    }

    #[test]
    fn polar_round_trip((z, _w) in pair()) {
        let back = from_polar(&to_polar(&z));
        prop_assert!(geodesic_distance(&back, &z).unwrap() < 1e-9);
    }

    #[test]
    fn iwasawa_distance_is_left_invariant(
        (g, a, b) in (2usize..5).prop_flat_map(|n| (iwasawa(n), iwasawa(n), iwasawa(n)))
    ) {
        let d0 = iwasawa_distance(&a, &b).unwrap();
        let d1 = iwasawa_distance(&g.compose(&a).unwrap(), &g.compose(&b).unwrap()).unwrap();
        prop_assert!((d1 - d0).abs() <= 1e-9 * d0.max(1.0));
    }
}

#[test]
fn nearby_points_keep_relative_accuracy() {
    let z = HyperbolicPoint::from_spatial(&[0.3, -0.2]);
    let w = HyperbolicPoint::from_spatial(&[0.3 + 1e-9, -0.2]);
    let d = geodesic_distance(&z, &w).unwrap();
    // ds² = |dx|² - (x·dx)²/(1+|x|²) in the spatial coordinates
    let expected = 1e-9 * (1.0 - 0.09 / 1.13f64).sqrt();
    assert!((d / expected - 1.0).abs() < 1e-6, "d = {d:e}, expected {expected:e}");
}
