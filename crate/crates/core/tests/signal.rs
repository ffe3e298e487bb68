mod common;

use core::f64::consts::PI;

use derivsamp_core::signal::{
    kernel_derivative, switch_radius, unit_sinc_closed, unit_sinc_series, BandlimitedSignal, Grid,
    GridFunction, LocalizedSignalSpec, Quadrature,
};
use derivsamp_core::Error;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn kernel_values_at_origin() {
    assert_eq!(kernel_derivative(PI, 0, 0.0).unwrap(), 1.0);
    assert_eq!(kernel_derivative(PI, 1, 0.0).unwrap(), 0.0);
    let k2 = kernel_derivative(PI, 2, 0.0).unwrap();
    assert!((k2 + PI * PI / 3.0).abs() < 1e-14);
}

#[test]
fn kernel_order_above_table_is_rejected() {
    assert!(matches!(
        kernel_derivative(PI, 99, 0.3),
        Err(Error::UnsupportedOrder { .. })
    ));
}

#[test]
fn kernel_series_and_closed_form_meet_at_switch() {
    for order in 0..=10 {
        let u = switch_radius(order);
        let s = unit_sinc_series(order, u);
        let c = unit_sinc_closed(order, u);
        assert!(
            (s - c).abs() <= 1e-12 * s.abs().max(1e-3),
            "order {order}: {s} vs {c}"
        );
    }
}

#[test]
fn kernel_matches_central_differences() {
    let mut rng = common::rng(1);
    let h = 1e-5;
    for _ in 0..100 {
        let t: f64 = rng.gen_range(-6.0..6.0);
        let order = rng.gen_range(1..=5);
        let fd = (kernel_derivative(2.0, order - 1, t + h).unwrap()
            - kernel_derivative(2.0, order - 1, t - h).unwrap())
            / (2.0 * h);
        let exact = kernel_derivative(2.0, order, t).unwrap();
        let scale = 2.0f64.powi(order as i32);
        assert!(
            (fd - exact).abs() < 1e-6 * scale,
            "t={t} order={order}: {fd} vs {exact}"
        );
    }
}

#[test]
fn signal_evaluation_examples() {
    let f = BandlimitedSignal::sinc(PI).unwrap();
    assert_eq!(f.eval(0.0, 0).unwrap(), 1.0);
    assert!(f.eval(1.0, 0).unwrap().abs() < 1e-16);
    let g = BandlimitedSignal::new(PI, 0, vec![1.0, 1.0]).unwrap();
    let direct = kernel_derivative(PI, 0, 0.5).unwrap() + kernel_derivative(PI, 0, -0.5).unwrap();
    assert!((g.eval(0.5, 0).unwrap() - direct).abs() < 1e-15);
    assert!((direct - 4.0 / PI).abs() < 1e-15);
}

#[test]
fn l2_norm_examples() {
    assert_eq!(
        BandlimitedSignal::new(PI, 0, vec![1.0]).unwrap().l2_norm(),
        1.0
    );
    assert!(
        (BandlimitedSignal::new(PI, 0, vec![3.0, 4.0])
            .unwrap()
            .l2_norm()
            - 5.0)
            .abs()
            < 1e-14
    );
    let half = BandlimitedSignal::new(2.0 * PI, 0, vec![1.0])
        .unwrap()
        .l2_norm();
    assert!((half - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn grid_norm_examples() {
    let grid = Grid::new(0.0, 1.0, 0.125).unwrap();
    assert_eq!(GridFunction::zeros(grid).norm(), 0.0);
    assert!((GridFunction::from_fn(grid, |_| 1.0).norm() - 1.0).abs() < 1e-15);
    let fine = Grid::new(0.0, 2.0, 1e-3).unwrap();
    let s = GridFunction::from_fn(fine, |x| (PI * x).sin());
    for rule in [Quadrature::Trapezoid, Quadrature::Simpson] {
        assert!((s.norm_with(rule).powi(2) - 1.0).abs() < 1e-8);
    }
}

#[test]
fn parseval_matches_quadrature_for_localized_signals() {
    for seed in 0..5 {
        let (f, window) = common::localized(PI, seed);
        let grid = Grid::with_max_step(window.0, window.1, PI / (8.0 * PI)).unwrap();
        let q = f.render(&grid, 0).unwrap().norm();
        assert!(
            common::rel_close(q, f.l2_norm(), 1e-6),
            "{q} vs {}",
            f.l2_norm()
        );
    }
}

#[test]
fn bernstein_examples() {
    let sinc = BandlimitedSignal::sinc(PI).unwrap();
    for k in 1..=2 {
        let r = sinc.bernstein_ratio(k, 1e-4).unwrap();
        assert!(r > 0.0 && r <= 1.0 + 1e-8, "k={k}: {r}");
    }
    let f = BandlimitedSignal::random(PI, -5, 10, &mut common::rng(9)).unwrap();
    let r = f.bernstein_ratio(1, 1e-4).unwrap();
    assert!(r > 0.0 && r <= 1.0);
}

#[test]
fn localized_signals_are_negligible_at_window_edges() {
    let spec = LocalizedSignalSpec::new(PI, 3.0);
    let f = spec.generate(&mut common::rng(4)).unwrap();
    let (a, b) = spec.window();
    let peak = (0..200)
        .map(|j| f.eval(3.0 + (j as f64 - 100.0) * 0.1, 0).unwrap().abs())
        .fold(0.0, f64::max);
    for x in [a, b] {
        for l in 0..3 {
            assert!(f.eval(x, l).unwrap().abs() < 1e-12 * peak);
        }
    }
}

#[test]
fn bandpass_spec_rejects_empty_carrier_range() {
    let spec = LocalizedSignalSpec::bandpass(PI, 0.45, 0.0);
    assert!(spec.generate(&mut common::rng(0)).is_err());
}

proptest! {
    #[test]
    fn kernel_parity(order in 0usize..8, t in -20.0f64..20.0) {
        let a = kernel_derivative(1.3, order, t).unwrap();
        let b = kernel_derivative(1.3, order, -t).unwrap();
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() <= 1e-14 * a.abs().max(1.0));
    }
}
