//! One PASS/FAIL line per acceptance criterion.

mod common;

use core::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use derivsamp_core::analysis::{
    gen_bounded_gaps, gen_lambda_n, gen_uniform, lambda_n_max_gap, max_gap_statistic,
    stability_sweep, SetFamily, SweepConfig,
};
use derivsamp_core::constants::{cimmino_nu, nu};
use derivsamp_core::frame::{
    empirical_frame_bounds, frame_iterate, BandpassSubspace, FrameConfig, FrameSystem, RhoChoice,
};
use derivsamp_core::hermite::{build_segment, eval_segment, horner};
use derivsamp_core::operators::{
    approx_operator, full_recover, iterate_reconstruct, DerivativeSamples, GroundTruth,
    ReconstructionConfig,
};
use derivsamp_core::signal::{
    BandlimitedSignal, Grid, GridFunction, LocalizedSignalSpec, Quadrature,
};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cimmino() -> Outcome {
    let n1 = cimmino_nu(1, 1e-13).map_err(|e| e.to_string())?.nu;
    let n2 = cimmino_nu(2, 1e-13).map_err(|e| e.to_string())?.nu;
    let n3 = cimmino_nu(3, 1e-13).map_err(|e| e.to_string())?.nu;
    ensure((n1 - PI).abs() < 1e-9, || format!("nu_1 = {n1}"))?;
    ensure((n2 - 2.0 * PI).abs() < 1e-8, || format!("nu_2 = {n2}"))?;
    ensure((n3 - 8.9868).abs() < 5e-4, || format!("nu_3 = {n3}"))?;
    Ok(format!("nu = {n1:.10}, {n2:.10}, {n3:.6}"))
}

fn hermite_exactness() -> Outcome {
    let mut rng = common::rng(2);
    let (mut worst_rep, mut worst_solve) = (0.0f64, 0.0f64);
    for r in 0..=4 {
        for _ in 0..50 {
            let c: Vec<f64> = (0..2 * r + 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let xi = rng.gen_range(-1.0..1.0);
            let eta = xi + rng.gen_range(0.2..1.5);
            let left = common::poly_derivs(&c, xi, r + 1);
            let right = common::poly_derivs(&c, eta, r + 1);
            let seg = build_segment(xi, eta, &left, &right, r).map_err(|e| e.to_string())?;
            let xs: Vec<f64> = (0..=40)
                .map(|t| xi + (eta - xi) * t as f64 / 40.0)
                .collect();
            let scale = xs.iter().map(|&x| horner(&c, x).abs()).fold(0.0, f64::max);
            for &x in &xs {
                worst_rep = worst_rep.max((eval_segment(&seg, x, 0) - horner(&c, x)).abs() / scale);
            }
            let oracle = common::brute_force(xi, eta, &left, &right);
            let cscale = oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (a, b) in seg.coeffs.iter().zip(&oracle) {
                worst_solve = worst_solve.max((a - b).abs() / cscale);
            }
        }
    }
    ensure(worst_rep < 1e-9, || {
        format!("reproduction error {worst_rep:e}")
    })?;
    ensure(worst_solve < 1e-8, || {
        format!("linear-solve mismatch {worst_solve:e}")
    })?;
    Ok(format!(
        "reproduction {worst_rep:.1e}, vs linear solve {worst_solve:.1e}"
    ))
}

fn error_estimate() -> Outcome {
    let mut rng = common::rng(5);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let r = 1 + case % 3;
        let f = BandlimitedSignal::random(PI, -6, 12, &mut rng).map_err(|e| e.to_string())?;
        let a = rng.gen_range(-4.0..4.0);
        let b = a + rng.gen_range(0.2..2.5);
        let left: Vec<f64> = (0..r).map(|j| f.eval(a, j).unwrap()).collect();
        let right: Vec<f64> = (0..r).map(|j| f.eval(b, j).unwrap()).collect();
        let seg = build_segment(a, b, &left, &right, r - 1).map_err(|e| e.to_string())?;
        let grid = Grid::with_max_step(a, b, (b - a) / 400.0).map_err(|e| e.to_string())?;
        let err = GridFunction::from_fn(grid, |x| {
            f.eval(x, r - 1).unwrap() - eval_segment(&seg, x, r - 1)
        });
        let top = f.render(&grid, r).map_err(|e| e.to_string())?;
        let lhs = err.norm_with(Quadrature::Simpson).powi(2);
        let rhs = ((b - a) / nu(r).unwrap()).powi(2) * top.norm_with(Quadrature::Simpson).powi(2);
        ensure(lhs <= rhs * (1.0 + 1e-6), || {
            format!("r={r} on [{a}, {b}]: {lhs:e} > {rhs:e}")
        })?;
        worst = worst.max(lhs / rhs);
    }
    Ok(format!("100 instances, worst lhs/rhs {worst:.4}"))
}

struct Instance {
    f: BandlimitedSignal,
    samples: DerivativeSamples,
    cfg: ReconstructionConfig,
    k: usize,
    factor: f64,
}

fn suite() -> Vec<Instance> {
    let mut out = Vec::new();
    for seed in 0..20u64 {
        let spec = LocalizedSignalSpec::new(PI, 0.0);
        let f = spec.generate(&mut common::rng(1000 + seed)).unwrap();
        for k in 1..=3 {
            for factor in [0.5, 0.8] {
                let delta = factor * nu(k).unwrap() / PI;
                let set = gen_bounded_gaps(delta, 0.3 * delta, 7 * seed + k as u64, spec.window())
                    .unwrap();
                let samples = DerivativeSamples::from_function(set, k, &f).unwrap();
                let cfg = ReconstructionConfig::for_samples(PI, &samples);
                out.push(Instance {
                    f: f.clone(),
                    samples,
                    cfg,
                    k,
                    factor,
                });
            }
        }
    }
    out
}

fn contraction(suite: &[Instance]) -> Outcome {
    let mut worst = 0.0f64;
    for inst in suite {
        let truth = GroundTruth::new(&inst.f, inst.k - 1, inst.cfg.window, PI, 0.0)
            .map_err(|e| e.to_string())?;
        let a = approx_operator(&inst.samples, &inst.cfg).map_err(|e| e.to_string())?;
        let ratio = truth.error(&a).map_err(|e| e.to_string())? / truth.norm();
        ensure(ratio <= inst.factor * 1.001, || {
            format!("k={} factor={}: ratio {ratio}", inst.k, inst.factor)
        })?;
        worst = worst.max(ratio / inst.factor);
    }
    Ok(format!(
        "{} instances, worst ratio/factor {worst:.4}",
        suite.len()
    ))
}

fn rate(suite: &[Instance]) -> Outcome {
    let mut worst = 0.0f64;
    for inst in suite {
        let mut cfg = inst.cfg;
        cfg.tolerance = 0.0;
        cfg.max_iterations = 41;
        let (_, trace) =
            iterate_reconstruct(&inst.samples, &cfg, Some(&inst.f)).map_err(|e| e.to_string())?;
        ensure(trace.steps.len() == 41, || {
            format!("k={}: stopped after {} steps", inst.k, trace.steps.len())
        })?;
        for st in &trace.steps {
            let e = st.error.unwrap_or(f64::NAN);
            ensure(e <= st.bound * 1.05, || {
                format!(
                    "k={} factor={} n={}: {e:e} > {:e}",
                    inst.k, inst.factor, st.n, st.bound
                )
            })?;
            worst = worst.max(e / st.bound);
        }
    }
    let mut worst_full = 0.0f64;
    for inst in suite.iter().filter(|i| i.factor == 0.5) {
        let mut cfg = inst.cfg;
        cfg.max_iterations = 60;
        let rec = full_recover(&inst.samples, &cfg, None).map_err(|e| e.to_string())?;
        let truth = GroundTruth::new(&inst.f, 0, cfg.window, PI, 0.0).map_err(|e| e.to_string())?;
        let rel = truth.error(&rec.model).map_err(|e| e.to_string())? / truth.norm();
        ensure(rel < 1e-6, || {
            format!("full recovery k={}: relative error {rel:e}", inst.k)
        })?;
        worst_full = worst_full.max(rel);
    }
    Ok(format!(
        "worst error/bound {worst:.3}, worst full recovery {worst_full:.1e}"
    ))
}

fn sandwich() -> Outcome {
    let mut rng = common::rng(17);
    let sub = BandpassSubspace::new(PI, 0.1).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for case in 0..10u64 {
        let k = 1 + (case % 2) as usize;
        let delta = rng.gen_range(0.2..0.9) * nu(k).unwrap() / PI;
        let gamma = rng.gen_range(0.3..0.8) * delta;
        let set =
            gen_bounded_gaps(delta, gamma, 40 + case, (0.0, 40.0)).map_err(|e| e.to_string())?;
        let sys = FrameSystem::new(set, k, sub, RhoChoice::Analytic).map_err(|e| e.to_string())?;
        let e = empirical_frame_bounds(&sys.points, k, PI, 0.1, 100).map_err(|e| e.to_string())?;
        ensure(e.dimension <= 100, || {
            format!("test dimension {}", e.dimension)
        })?;
        ensure(
            sys.a_eps <= e.lambda_min
                && e.lambda_min <= e.lambda_max
                && e.lambda_max <= sys.b * (1.0 + 1e-6),
            || {
                format!(
                    "k={k}: {} <= {} <= {} <= {}",
                    sys.a_eps, e.lambda_min, e.lambda_max, sys.b
                )
            },
        )?;
        lines.push(e.lambda_min);
    }
    let lo = lines.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(format!("10 instances, smallest lambda_min {lo:.3}"))
}

fn frame_algorithm() -> Outcome {
    let sub = BandpassSubspace::new(PI, 0.1).map_err(|e| e.to_string())?;
    let spec = LocalizedSignalSpec::bandpass(PI, 0.1, 0.0);
    let f = spec
        .generate(&mut common::rng(4))
        .map_err(|e| e.to_string())?;
    let set = gen_uniform(0.5, spec.window()).map_err(|e| e.to_string())?;
    let s = DerivativeSamples::from_function(set.clone(), 1, &f).map_err(|e| e.to_string())?;
    let sys = FrameSystem::new(set, 1, sub, RhoChoice::Analytic).map_err(|e| e.to_string())?;
    let cfg = FrameConfig {
        max_iterations: 200,
        tolerance: 0.0,
    };
    let (_, trace) = frame_iterate(&s, &sys, &cfg, Some(&f)).map_err(|e| e.to_string())?;
    for st in &trace.steps {
        let e = st.error.unwrap_or(f64::NAN);
        ensure(
            st.residual <= st.bound * 1.05 && e <= st.bound * 1.05,
            || {
                format!(
                    "n={}: residual {:e}, error {e:e}, bound {:e}",
                    st.n, st.residual, st.bound
                )
            },
        )?;
    }
    ensure(
        trace
            .steps
            .windows(2)
            .skip(1)
            .all(|w| w[1].residual < w[0].residual),
        || "residual not strictly decreasing".into(),
    )?;
    let q = trace.factor;

    let set = gen_uniform(1.5, spec.window()).map_err(|e| e.to_string())?;
    let f2 = spec
        .generate(&mut common::rng(9))
        .map_err(|e| e.to_string())?;
    let s2 = DerivativeSamples::from_function(set.clone(), 2, &f2).map_err(|e| e.to_string())?;
    let sys2 = FrameSystem::new(set, 2, sub, RhoChoice::Empirical).map_err(|e| e.to_string())?;
    let (est, trace2) =
        frame_iterate(&s2, &sys2, &FrameConfig::default(), Some(&f2)).map_err(|e| e.to_string())?;
    let truth = GroundTruth::new(&f2, 0, sys2.window, PI, 0.1).map_err(|e| e.to_string())?;
    let rel = truth.error(&est).map_err(|e| e.to_string())? / truth.norm();
    ensure(trace2.converged && rel < 1e-6, || {
        format!("empirical k=2 run: relative error {rel:e}")
    })?;
    Ok(format!(
        "analytic q = {q:.7} monotone over {} steps; empirical k=2 run converged in {} steps to {rel:.1e}",
        trace.steps.len(),
        trace2.steps.len()
    ))
}

fn bernstein() -> Outcome {
    let mut rng = common::rng(21);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let sigma = rng.gen_range(0.5..4.0);
        let spec = LocalizedSignalSpec::new(sigma, rng.gen_range(-5.0..5.0));
        let f = spec.generate(&mut rng).map_err(|e| e.to_string())?;
        for k in 1..=4 {
            let r = f
                .bernstein_ratio(k, 1e-6)
                .map_err(|e| format!("case {case}, k={k}: {e}"))?;
            ensure(r <= 1.0 + 1e-8, || format!("case {case}, k={k}: ratio {r}"))?;
            worst = worst.max(r);
        }
    }
    Ok(format!("400 ratios, largest {worst:.6}"))
}

fn sharpness() -> Outcome {
    let k2 = stability_sweep(&SweepConfig::new(2, PI, SetFamily::Uniform), &[1.0, 2.1])
        .map_err(|e| e.to_string())?;
    ensure(k2[1].lambda_min < 0.1 * k2[0].lambda_min, || {
        format!("k=2: {k2:?}")
    })?;

    let gaps = [0.5, 0.75, 1.0, 1.5, 2.0, 2.5, PI];
    let uni = stability_sweep(&SweepConfig::new(1, PI, SetFamily::Uniform), &gaps)
        .map_err(|e| e.to_string())?;
    let lam = stability_sweep(
        &SweepConfig::new(1, PI, SetFamily::LambdaN { n: 3 }),
        &gaps[2..],
    )
    .map_err(|e| e.to_string())?;
    for rows in [&uni, &lam] {
        ensure(rows.iter().all(|r| r.lambda_min >= 0.0), || {
            format!("negative bound: {rows:?}")
        })?;
        ensure(
            rows.windows(2)
                .all(|w| w[1].lambda_min <= 1.05 * w[0].lambda_min),
            || format!("not monotone: {rows:?}"),
        )?;
        let (first, last) = (rows[0].lambda_min, rows[rows.len() - 1].lambda_min);
        ensure(first > 0.0 && last < 0.1 * first, || {
            format!("no degradation: {rows:?}")
        })?;
    }
    Ok(format!(
        "k=2 uniform {:.3} -> {:.2e}; k=1 uniform {:.3} -> {:.2e}; k=1 Lambda_3 {:.3} -> {:.2e}",
        k2[0].lambda_min,
        k2[1].lambda_min,
        uni[0].lambda_min,
        uni[uni.len() - 1].lambda_min,
        lam[0].lambda_min,
        lam[lam.len() - 1].lambda_min
    ))
}

fn lambda_n() -> Outcome {
    let mut checked = 0;
    for k in 1..=3usize {
        for sigma in [1.0, PI, 5.0] {
            for n in 1..=6usize {
                let l_max = n + 5;
                let set = gen_lambda_n(k, sigma, n, l_max).map_err(|e| e.to_string())?;
                let unit = k as f64 * PI / sigma;
                let inner = unit * (n as f64 + 1.0) / (2.0 * n as f64 + 1.0);
                let mut expected: Vec<f64> = (-(l_max as i64)..=l_max as i64)
                    .map(|l| match l.unsigned_abs() as usize {
                        0 => 0.0,
                        a if a > n => unit * l as f64,
                        a => l.signum() as f64 * (2 * a - 1) as f64 * inner,
                    })
                    .collect();
                expected.sort_by(f64::total_cmp);
                let worst = set
                    .points()
                    .iter()
                    .zip(&expected)
                    .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
                    .fold(0.0f64, f64::max);
                ensure(set.len() == expected.len() && worst < 1e-14, || {
                    format!("k={k} sigma={sigma} N={n}: points differ by {worst:e}")
                })?;
                let gap = max_gap_statistic(set.points()).map_err(|e| e.to_string())?;
                let target =
                    2.0 * k as f64 * (n as f64 + 1.0) * PI / ((2.0 * n as f64 + 1.0) * sigma);
                ensure(
                    (gap - target).abs() < 1e-12
                        && (lambda_n_max_gap(k, sigma, n) - target).abs() < 1e-12,
                    || format!("k={k} sigma={sigma} N={n}: gap {gap} vs {target}"),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} sets match pointwise and in max gap"))
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut run = |id: usize, name: &str, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if elapsed <= limit {
                Ok(d)
            } else {
                Err(format!("{d}; over the {:?} budget", limit))
            }
        });
        match outcome {
            Ok(d) => println!(
                "PASS [{id:>2}] {name}: {d} ({:.2} s)",
                elapsed.as_secs_f64()
            ),
            Err(d) => {
                failures += 1;
                println!(
                    "FAIL [{id:>2}] {name}: {d} ({:.2} s)",
                    elapsed.as_secs_f64()
                );
            }
        }
    };
    let secs = Duration::from_secs;
    run(1, "Cimmino constants", secs(1), &mut cimmino);
    run(2, "Hermite exactness", secs(5), &mut hermite_exactness);
    run(
        3,
        "error-estimate inequality",
        secs(30),
        &mut error_estimate,
    );
    let start = Instant::now();
    let suite = suite();
    let setup = start.elapsed();
    run(4, "contraction certificate", secs(60) - setup, &mut || {
        contraction(&suite)
    });
    run(5, "iteration rate", secs(120), &mut || rate(&suite));
    run(6, "frame sandwich", secs(60), &mut sandwich);
    run(7, "frame algorithm", secs(120), &mut frame_algorithm);
    run(8, "Bernstein inequality", secs(10), &mut bernstein);
    run(9, "sharpness probe", secs(120), &mut sharpness);
    run(10, "Lambda_N construction", secs(1), &mut lambda_n);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
