use std::f64::consts::PI;
use std::path::Path;

use clap::{Args, ValueEnum};
use derivsamp_core::analysis::{gen_bounded_gaps, gen_lambda_n, lambda_n_point, max_gap_statistic};
use derivsamp_core::constants::{c_of_k, contraction_factor, frame_bounds, nu, schmidt_mu};
use derivsamp_core::frame::{empirical_frame_bounds, BandpassSubspace, FrameSystem, RhoChoice};
use derivsamp_core::hermite::{build_segment, differentiate, eval_segment, horner};
use derivsamp_core::signal::LocalizedSignalSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::require;
use crate::error::{CliError, Result};
use crate::output::overlay;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Constants,
    Hermite,
    Bernstein,
    LambdaN,
    Frame,
    All,
}

impl Suite {
    fn stochastic(self) -> bool {
        !matches!(self, Self::Constants | Self::LambdaN)
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Required by the randomized suites.
    #[arg(long)]
    pub seed: Option<u64>,
}

type Check = (String, std::result::Result<String, String>);

fn check(name: &str, ok: bool, detail: String) -> Check {
    (name.to_string(), if ok { Ok(detail) } else { Err(detail) })
}

fn constants() -> Result<Vec<Check>> {
    let (n1, n2, n3) = (nu(1)?, nu(2)?, nu(3)?);
    let a = frame_bounds(2, 1.0, PI, 0.5)?.a;
    Ok(vec![
        check("nu_1 = pi", (n1 - PI).abs() < 1e-9, format!("{n1:.12}")),
        check(
            "nu_2 = 2 pi",
            (n2 - 2.0 * PI).abs() < 1e-8,
            format!("{n2:.12}"),
        ),
        check(
            "nu_3 in [8.9863, 8.9873]",
            (8.9863..=8.9873).contains(&n3),
            format!("{n3:.6}"),
        ),
        check(
            "mu_3 = 180",
            schmidt_mu(3) == 180,
            format!("{}", schmidt_mu(3)),
        ),
        check("C(2) = 9", c_of_k(2)? == 9, format!("{}", c_of_k(2)?)),
        check(
            "A(k=2, delta=1, sigma=pi, gamma=0.5) = 9.645e-6",
            ((a - 9.645e-6) / 9.645e-6).abs() < 1e-3,
            format!("{a:.4e}"),
        ),
        check(
            "delta sigma / nu_1 at delta=0.5, sigma=pi",
            (contraction_factor(1, 0.5, PI)? - 0.5).abs() < 1e-12,
            format!("{}", contraction_factor(1, 0.5, PI)?),
        ),
    ])
}

fn hermite(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for r in 0..=4 {
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let c: Vec<f64> = (0..2 * r + 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let xi = rng.gen_range(-1.0..1.0);
            let eta = xi + rng.gen_range(0.2..1.5);
            let derivs = |x: f64| {
                (0..=r)
                    .map(|j| horner(&differentiate(&c, j), x))
                    .collect::<Vec<_>>()
            };
            let seg = build_segment(xi, eta, &derivs(xi), &derivs(eta), r)?;
            let xs: Vec<f64> = (0..=40)
                .map(|t| xi + (eta - xi) * t as f64 / 40.0)
                .collect();
            let scale = xs.iter().map(|&x| horner(&c, x).abs()).fold(0.0, f64::max);
            for &x in &xs {
                worst = worst.max((eval_segment(&seg, x, 0) - horner(&c, x)).abs() / scale);
            }
        }
        out.push(check(
            &format!("Hermite reproduces degree {} polynomials", 2 * r + 1),
            worst < 1e-9,
            format!("max relative error {worst:.2e}"),
        ));
    }
    Ok(out)
}

fn bernstein(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut worst = [0.0f64; 4];
    for _ in 0..20 {
        let spec = LocalizedSignalSpec::new(rng.gen_range(0.5..4.0), rng.gen_range(-5.0..5.0));
        let f = spec.generate(rng)?;
        for (k, w) in worst.iter_mut().enumerate() {
            *w = w.max(f.bernstein_ratio(k + 1, 1e-6)?);
        }
    }
    Ok(worst
        .iter()
        .enumerate()
        .map(|(k, w)| {
            check(
                &format!("||f^({})|| <= sigma^{} ||f||", k + 1, k + 1),
                *w <= 1.0 + 1e-8,
                format!("largest ratio {w:.6}"),
            )
        })
        .collect())
}

fn lambda_n() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (k, sigma, n) in [(1, PI, 2), (2, PI, 3), (3, 2.0, 5)] {
        let set = gen_lambda_n(k, sigma, n, n + 6)?;
        let formula = (-(n as i64 + 6)..=n as i64 + 6)
            .all(|l| set.points().contains(&lambda_n_point(k, sigma, n, l)));
        let gap = max_gap_statistic(set.points())?;
        let target = 2.0 * k as f64 * (n as f64 + 1.0) * PI / ((2.0 * n as f64 + 1.0) * sigma);
        out.push(check(
            &format!("Lambda_{n} (k={k}, sigma={sigma}) max gap 2k(N+1)pi/((2N+1)sigma)"),
            formula && (gap - target).abs() < 1e-12,
            format!("gap {gap:.15} vs {target:.15}"),
        ));
    }
    Ok(out)
}

fn frame(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let sub = BandpassSubspace::new(PI, 0.1)?;
    let mut out = Vec::new();
    for case in 0..6u64 {
        let k = 1 + (case % 2) as usize;
        let delta = rng.gen_range(0.2..0.9) * nu(k)? / PI;
        let set = gen_bounded_gaps(delta, 0.4 * delta, rng.gen(), (0.0, 40.0))?;
        let sys = FrameSystem::new(set, k, sub, RhoChoice::Analytic)?;
        let e = empirical_frame_bounds(&sys.points, k, PI, 0.1, 100)?;
        out.push(check(
            &format!("A_eps <= lambda_min <= lambda_max <= B (k={k}, delta={delta:.3})"),
            sys.a_eps <= e.lambda_min
                && e.lambda_min <= e.lambda_max
                && e.lambda_max <= sys.b * (1.0 + 1e-6),
            format!(
                "{:.3e} <= {:.4} <= {:.4} <= {:.3e}",
                sys.a_eps, e.lambda_min, e.lambda_max, sys.b
            ),
        ));
    }
    Ok(out)
}

pub fn checks(args: &VerifyArgs) -> Result<Vec<Check>> {
    let mut rng = if args.suite.stochastic() {
        ChaCha8Rng::seed_from_u64(require(args.seed, "seed")?)
    } else {
        ChaCha8Rng::seed_from_u64(0)
    };
    let all = args.suite == Suite::All;
    let mut out = Vec::new();
    if all || args.suite == Suite::Constants {
        out.extend(constants()?);
    }
    if all || args.suite == Suite::Hermite {
        out.extend(hermite(&mut rng)?);
    }
    if all || args.suite == Suite::Bernstein {
        out.extend(bernstein(&mut rng)?);
    }
    if all || args.suite == Suite::LambdaN {
        out.extend(lambda_n()?);
    }
    if all || args.suite == Suite::Frame {
        out.extend(frame(&mut rng)?);
    }
    Ok(out)
}

pub fn run(args: VerifyArgs, config: Option<&Path>) -> Result<()> {
    let args = overlay(args, config)?;
    let results = checks(&args)?;
    let mut failed = 0;
    for (name, res) in &results {
        match res {
            Ok(d) => println!("PASS {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL {name}: {d}");
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Algorithm(format!(
            "{failed} of {} properties failed",
            results.len()
        )));
    }
    Ok(())
}
