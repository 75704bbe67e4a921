use hypmax::asymptotics::{check_c_alpha_decay, check_uniform_bound, large_t_amplitude};
use hypmax::{ComplexOrder, Dimension, QuadratureConfig};

fn order(n: usize, a: f64) -> ComplexOrder {
    ComplexOrder::real(a, Dimension::new(n).unwrap()).unwrap()
}

fn grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
}

#[test]
fn held_out_points_respect_the_calibrated_bound() {
    let q = QuadratureConfig::default();
    let o = order(2, 0.5);
    let coarse = check_uniform_bound(&o, &grid(0.0, 20.0, 21), &grid(0.5, 8.0, 16), &q).unwrap();
    assert!(coarse.worst_ratio <= 1.2 * coarse.calibrated_constant, "{coarse:?}");
    let fine = check_uniform_bound(&o, &grid(0.0, 20.0, 41), &grid(0.5, 8.0, 31), &q).unwrap();
    let change = (fine.calibrated_constant / coarse.calibrated_constant - 1.0).abs();
    assert!(change < 0.05, "calibrated constant moved by {change}");
}

#[test]
fn amplitude_is_even_up_to_conjugation() {
    let o = order(3, 0.4);
    for t in [2.0, 4.0] {
        let a = large_t_amplitude(&o, 3.0, t, None).unwrap();
        let b = large_t_amplitude(&o, -3.0, t, None).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
    }
}

#[test]
fn c_alpha_decays_at_the_order_dependent_rate() {
    // |c^α(λ)| ~ λ^{1-α-(n-1)/2} at k = 0, one more power per difference
    let o = order(4, 0.5);
    let fit0 = check_c_alpha_decay(&o, 0, 10.0, 200.0, 24).unwrap();
    assert!((fit0.slope + 1.0).abs() < 0.05, "{fit0:?}");
    let fit1 = check_c_alpha_decay(&o, 1, 10.0, 200.0, 24).unwrap();
    assert!((fit1.slope - fit0.slope + 1.0).abs() < 0.1, "{fit1:?}");
}
