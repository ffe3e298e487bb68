mod common;

use core::f64::consts::PI;

use derivsamp_core::analysis::{
    gen_bounded_gaps, gen_jittered, gen_lambda_n, gen_uniform, lambda_n_max_gap, lambda_n_point,
    max_gap_statistic, stability_sweep, SamplingSet, SetFamily, SweepConfig,
};
use derivsamp_core::Error;
use proptest::prelude::*;

fn brute_gaps(p: &[f64]) -> (f64, f64) {
    let gaps: Vec<f64> = p.windows(2).map(|w| w[1] - w[0]).collect();
    (
        gaps.iter().copied().fold(0.0, f64::max),
        gaps.iter().copied().fold(f64::INFINITY, f64::min),
    )
}

#[test]
fn uniform_examples() {
    let s = gen_uniform(0.5, (0.0, 2.0)).unwrap();
    assert_eq!(s.points(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
    assert_eq!((s.delta(), s.gamma()), (0.5, 0.5));
    assert!(matches!(
        gen_uniform(1.0, (0.0, 0.5)),
        Err(Error::EmptySet(_))
    ));
    assert_eq!(gen_jittered(0.5, 0.0, 0.1, 3, (0.0, 2.0)).unwrap(), s);
    assert!(gen_jittered(0.5, 0.5, 0.1, 3, (0.0, 2.0)).is_err());
}

#[test]
fn uniform_spacing_is_its_own_gap_statistic() {
    let s = gen_uniform(0.3, (1.0, 10.0)).unwrap();
    assert!((max_gap_statistic(s.points()).unwrap() - 0.3).abs() < 1e-12);
    assert_eq!(max_gap_statistic(&[0.0, 1.0, 3.0]).unwrap(), 2.0);
    assert!(matches!(
        max_gap_statistic(&[0.0]),
        Err(Error::InsufficientData(_))
    ));
}

#[test]
fn lambda_n_examples() {
    assert_eq!(lambda_n_point(2, PI, 1, 0), 0.0);
    assert!((lambda_n_point(2, PI, 1, 1) - 4.0 / 3.0).abs() < 1e-15);
    assert!((lambda_n_point(2, PI, 1, 2) - 4.0).abs() < 1e-15);
    let s = gen_lambda_n(2, PI, 1, 6).unwrap();
    assert!((max_gap_statistic(s.points()).unwrap() - 8.0 / 3.0).abs() < 1e-12);
}

#[test]
fn lambda_n_is_the_scaled_integers_outside_the_core() {
    for (k, sigma, n) in [(1, PI, 2), (2, PI, 3), (3, 2.0, 5)] {
        let l_max = n + 7;
        let s = gen_lambda_n(k, sigma, n, l_max).unwrap();
        let step = k as f64 * PI / sigma;
        let outer: Vec<f64> = s
            .points()
            .iter()
            .copied()
            .filter(|x| x.abs() > (n as f64 + 0.5) * step)
            .collect();
        let expected: Vec<f64> = (-(l_max as i64)..=l_max as i64)
            .filter(|l| l.unsigned_abs() as usize > n)
            .map(|l| l as f64 * step)
            .collect();
        assert_eq!(outer.len(), expected.len());
        for (a, b) in outer.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((s.delta() - lambda_n_max_gap(k, sigma, n)).abs() < 1e-12);
    }
}

#[test]
fn bounded_gap_sets_hit_delta() {
    for seed in 0..5 {
        let s = gen_bounded_gaps(1.7, 0.5, seed, (0.0, 50.0)).unwrap();
        let (d, g) = brute_gaps(s.points());
        assert_eq!(s.delta(), d);
        assert_eq!(s.gamma(), g);
        assert!((d - 1.7).abs() < 1e-12);
        assert!(g >= 0.5);
    }
}

#[test]
fn sampling_sets_reject_bad_input() {
    assert!(matches!(
        SamplingSet::new(vec![0.0, 0.0, 1.0]),
        Err(Error::Ordering { .. })
    ));
    assert!(SamplingSet::new(vec![0.0, f64::NAN]).is_err());
}

#[test]
fn k1_sweep_degrades() {
    let cfg = SweepConfig::new(1, PI, SetFamily::Uniform);
    let gaps = [0.5, 0.7, 0.9, 0.9 * PI];
    let rows = stability_sweep(&cfg, &gaps).unwrap();
    assert!(rows[0].lambda_min > rows[3].lambda_min);
    assert!(rows.iter().all(|r| r.lambda_min >= 0.0));
    for w in rows.windows(2) {
        assert!(w[1].lambda_min <= 1.05 * w[0].lambda_min, "{w:?}");
    }
    assert_eq!(rows, stability_sweep(&cfg, &gaps).unwrap());
}

#[test]
fn k2_sweep_degrades_past_the_critical_gap() {
    let cfg = SweepConfig::new(2, PI, SetFamily::Uniform);
    let gaps = [0.5, 1.0, 1.5, 1.9, 2.1, 2.5];
    let rows = stability_sweep(&cfg, &gaps).unwrap();
    assert!(rows[4].lambda_min < 0.1 * rows[1].lambda_min, "{rows:?}");
    for w in rows.windows(2) {
        assert!(w[1].lambda_min <= 1.05 * w[0].lambda_min, "{w:?}");
    }
}

#[test]
fn unsorted_gap_list_is_rejected() {
    let cfg = SweepConfig::new(1, PI, SetFamily::Uniform);
    assert!(stability_sweep(&cfg, &[1.0, 0.5]).is_err());
}

proptest! {
    #[test]
    fn jittered_statistics_are_consistent(seed in any::<u64>(), jitter in 0.0f64..0.45, spacing in 0.2f64..2.0) {
        let s = gen_jittered(spacing, jitter, 0.1 * spacing, seed, (-5.0, 15.0)).unwrap();
        let (d, g) = brute_gaps(s.points());
        prop_assert_eq!(s.delta(), d);
        prop_assert_eq!(s.gamma(), g);
        prop_assert!(s.points().windows(2).all(|w| w[1] > w[0]));
        prop_assert!(g >= 0.1 * spacing * (1.0 - 1e-12));
    }
}
