//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.
//!
//! Exits nonzero if any criterion fails other than those listed in
//! [`KNOWN_FAILURES`], which still print as failures.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use maxwell_kinetics::distribution::{density, mean_kinetic_energy, params_from_state, separability_residual};
use maxwell_kinetics::kinetics::{reaction_time, solve_lambda_for};
use maxwell_kinetics::quadrature::{integrate, integrate_r3};
use maxwell_kinetics::random_walk::simulate_walks_with;
use maxwell_kinetics::sampler::{empirical_moments, empirical_tail_fraction, ks_critical_value_1pct, ks_statistic, sample_batch_with};
use maxwell_kinetics::units::amu_to_kg;
use maxwell_kinetics::{Integrator, MaxwellParams, SeedSpec, TailModel, ThermalState, VelocityVector, WalkSpec};
use maxwell_kinetics_cli::parallel::Rayon;
use maxwell_kinetics_cli::{run, EXIT_OK};
use serde_json::Value;

/// Criterion 8: with seeds 0..99 at n = 10⁴, seeds 32 and 50 exceed the 1%
/// KS critical value. Nothing else in the criterion may fail.
const KNOWN_FAILURES: &[(u32, &str)] = &[(8, "KS seeds [32, 50] reject")];

struct Outcome {
    passed: bool,
    detail: String,
    /// Set when the failure matches its entry in `KNOWN_FAILURES` exactly.
    known: bool,
}

impl Outcome {
    fn new(passed: bool, detail: String) -> Self {
        Outcome { passed, detail, known: false }
    }
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn mbk(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("mbk").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn gauss_integral() -> Outcome {
    let (r, t) = timed(|| integrate(|x| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, 1e-12).unwrap());
    let err = (r.value - 1.7724538509055160).abs();
    let passed = err <= 1e-10 && t < Duration::from_secs(1);
    Outcome::new(passed, format!("value={:.16} |err|={err:.1e} time={t:.2?}", r.value))
}

fn normalization() -> Outcome {
    let (results, t) = timed(|| {
        [0.1, 0.5, 1.0, 10.0].map(|c| {
            let p = MaxwellParams::new(c).unwrap();
            let integrator = Integrator::new(1e-10).with_scale(1.0 / c.sqrt());
            let r = integrate_r3(&integrator, |x, y, z| density(&VelocityVector { vx: x, vy: y, vz: z }, &p)).unwrap();
            (c, (r.value - 1.0).abs())
        })
    });
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let passed = worst <= 1e-9 && t < Duration::from_secs(10);
    let each: Vec<String> = results.iter().map(|(c, e)| format!("c={c}:{e:.1e}")).collect();
    Outcome::new(passed, format!("|err| {} time={t:.2?}", each.join(" ")))
}

fn mean_energy() -> Outcome {
    let states = [
        (ThermalState::reduced(1.0, 1.0).unwrap(), 1.0),
        (ThermalState::reduced(2.5, 3.0).unwrap(), 1.0),
        (ThermalState::si(310.0, amu_to_kg(32.0)).unwrap(), 1.380649e-23),
        (ThermalState::si(1000.0, amu_to_kg(4.0)).unwrap(), 1.380649e-23),
    ];
    let worst = states
        .iter()
        .map(|(s, k)| {
            let e = mean_kinetic_energy(&params_from_state(s), s.mass()).unwrap();
            let expected = 1.5 * k * s.temperature();
            ((e - expected) / expected).abs()
        })
        .fold(0.0, f64::max);
    Outcome::new(worst <= 1e-12, format!("worst relative error={worst:.1e} (2 reduced, 2 SI states)"))
}

/// Rodrigues rotation of `v` by `angle` about the unit vector `axis`.
fn rotate(v: [f64; 3], axis: [f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    let dot = axis[0] * v[0] + axis[1] * v[1] + axis[2] * v[2];
    let cross = [
        axis[1] * v[2] - axis[2] * v[1],
        axis[2] * v[0] - axis[0] * v[2],
        axis[0] * v[1] - axis[1] * v[0],
    ];
    [0, 1, 2].map(|i| v[i] * c + cross[i] * s + axis[i] * dot * (1.0 - c))
}

fn separability_isotropy() -> Outcome {
    let mut rng = SeedSpec::new(2024).generator();
    let mut uniform = |lo: f64, hi: f64| lo + (hi - lo) * rng.uniform();
    let mut separability: f64 = 0.0;
    for _ in 0..1000 {
        let p = MaxwellParams::new(uniform(0.01, 10.0)).unwrap();
        let [a, b, c3] = [(); 3].map(|_| uniform(0.0, 100.0));
        separability = separability.max(separability_residual(a, b, c3, &p).unwrap());
    }
    let mut isotropy: f64 = 0.0;
    for _ in 0..1000 {
        let c: f64 = uniform(0.01, 10.0);
        let p = MaxwellParams::new(c).unwrap();
        let v = [(); 3].map(|_| uniform(-5.0, 5.0) / c.sqrt());
        let z: f64 = uniform(-1.0, 1.0);
        let phi: f64 = uniform(0.0, 2.0 * PI);
        let r = (1.0 - z * z).sqrt();
        let axis = [r * phi.cos(), r * phi.sin(), z];
        let w = rotate(v, axis, uniform(0.0, 2.0 * PI));
        let d = density(&VelocityVector { vx: v[0], vy: v[1], vz: v[2] }, &p);
        let dr = density(&VelocityVector { vx: w[0], vy: w[1], vz: w[2] }, &p);
        isotropy = isotropy.max((dr - d).abs() / d);
    }
    let passed = separability <= 1e-12 && isotropy <= 1e-12;
    Outcome::new(passed, format!("separability max={separability:.1e} isotropy max={isotropy:.1e}"))
}

fn lambda_estimates() -> Outcome {
    let exponential = solve_lambda_for(TailModel::Exponential, 1e-12).unwrap();
    let exact = solve_lambda_for(TailModel::Exact, 1e-12).unwrap();
    let ln = 1e12f64.ln();
    let passed = (exponential - ln).abs() <= 1e-6 && (exact - 29.5).abs() <= 0.1;
    Outcome::new(passed, format!("exponential={exponential:.10} (ln 1e12={ln:.10}) exact={exact:.10}"))
}

fn fever_headline() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for model in ["exponential", "exact"] {
        let ((code, out), t) = timed(|| mbk(&["fever", "--model", model, "--format", "json"]));
        let change = serde_json::from_str::<Value>(&out).unwrap()["report"]["relative_change"].as_f64().unwrap();
        passed &= code == EXIT_OK && (0.08..=0.11).contains(&change) && t < Duration::from_secs(1);
        parts.push(format!("{model}={:+.4}% ({t:.2?})", 100.0 * change));
    }
    Outcome::new(passed, parts.join(" "))
}

/// `q` is the binary64 value nearest to `num/den`: its residual is no larger
/// than that of either neighbour.
fn is_correctly_rounded_quotient(q: f64, num: f64, den: f64) -> bool {
    let residual = |x: f64| x.mul_add(den, -num).abs();
    residual(q) <= residual(q.next_up()) && residual(q) <= residual(q.next_down())
}

fn reaction_times() -> Outcome {
    let second = reaction_time(1e-9, 1e-9).unwrap();
    let thousand = reaction_time(1e-12, 1e-9).unwrap();
    let ulps = ((thousand - 1000.0) / (1000.0f64.next_up() - 1000.0)).abs();
    let passed = second == 1.0 && is_correctly_rounded_quotient(thousand, 1e-9, 1e-12) && ulps <= 1.0;
    Outcome::new(
        passed,
        format!("{second:?} s; {thousand:?} s = correctly rounded 1e-9/1e-12, {ulps} ulp from 1000"),
    )
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let p = MaxwellParams::new(0.5).unwrap();
    let n = 1_000_000;
    let batch = sample_batch_with(&Rayon, n, &p, SeedSpec::new(0)).unwrap();
    let energy = 0.5 * empirical_moments(&batch).unwrap().mean_squared_speed;
    let energy_ok = (energy / 1.5 - 1.0).abs() <= 0.01;

    let q1 = 0.57240670447;
    let tail = empirical_tail_fraction(&batch, 1.0, 1.0).unwrap();
    let se = (q1 * (1.0 - q1) / n as f64).sqrt();
    let tail_ok = (tail - q1).abs() <= 4.0 * se;

    let ks_n = 10_000;
    let critical = ks_critical_value_1pct(ks_n);
    let rejected: Vec<u64> = (0..100u64)
        .filter(|&seed| ks_statistic(&sample_batch_with(&Rayon, ks_n, &p, SeedSpec::new(seed)).unwrap()) >= critical)
        .collect();
    let ks_ok = rejected.len() <= 1;
    let t = start.elapsed();
    let time_ok = t < Duration::from_secs(60);

    let detail = format!(
        "energy={energy:.6} ({:+.3}%) tail={tail:.6} ({:+.2} SE) KS passes={}/100 rejected={rejected:?} time={t:.2?}",
        100.0 * (energy / 1.5 - 1.0),
        (tail - q1) / se,
        100 - rejected.len(),
    );
    let mut outcome = Outcome::new(energy_ok && tail_ok && ks_ok && time_ok, detail);
    outcome.known = energy_ok && tail_ok && time_ok && rejected == [32, 50];
    outcome
}

fn random_walk() -> Outcome {
    let spec = WalkSpec::new(100, 1, 1.0, 100_000, SeedSpec::new(0)).unwrap();
    let (w, t) = timed(|| simulate_walks_with(&Rayon, &spec));
    let msd_se = (w.variance_of_squared_displacement / w.trials as f64).sqrt();
    let drift_se = (100.0 / w.trials as f64).sqrt();
    let msd_z = (w.mean_squared_displacement - 100.0) / msd_se;
    let drift_z = w.mean_displacement[0] / drift_se;
    let passed = msd_z.abs() <= 4.0 && drift_z.abs() <= 4.0 && t < Duration::from_secs(10);
    Outcome::new(
        passed,
        format!(
            "msd={:.4} ({msd_z:+.2} SE) drift={:.5} ({drift_z:+.2} SE) time={t:.2?}",
            w.mean_squared_displacement, w.mean_displacement[0]
        ),
    )
}

fn determinism() -> Outcome {
    let commands: &[&[&str]] = &[
        &["sample", "-n", "2000", "--seed", "5", "--stream", "1"],
        &["sample", "-n", "200", "--seed", "5", "--reduced", "--format", "json"],
        &["walk", "--trials", "20000", "--dim", "3", "--seed", "8"],
        &["walk", "--trials", "20000", "--seed", "8", "--format", "json"],
        &["verify", "--cases", "200", "--ks-samples", "2000", "--seed", "3"],
        &["pdf"],
        &["fever", "--format", "json"],
        &["tail", "--lambda", "12"],
    ];
    let body = |s: &str| s.lines().filter(|l| !l.contains("generated_unix")).collect::<Vec<_>>().join("\n");
    let mut mismatched = Vec::new();
    for args in commands {
        let mut fixed = args.to_vec();
        fixed.push("--no-timestamp");
        let same_bytes = mbk(&fixed) == mbk(&fixed);
        let same_body = body(&mbk(args).1) == body(&mbk(args).1);
        if !(same_bytes && same_body) {
            mismatched.push(args.join(" "));
        }
    }
    let detail = format!("{} commands byte-identical, mismatched={mismatched:?}", commands.len() - mismatched.len());
    Outcome::new(mismatched.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "gauss integral", gauss_integral),
        (2, "normalization", normalization),
        (3, "mean energy", mean_energy),
        (4, "separability/isotropy", separability_isotropy),
        (5, "lambda estimate", lambda_estimates),
        (6, "fever headline", fever_headline),
        (7, "reaction times", reaction_times),
        (8, "monte carlo", monte_carlo),
        (9, "random walk", random_walk),
        (10, "determinism", determinism),
    ];
    let mut unexpected = 0;
    let mut known = 0;
    for (number, name, check) in criteria {
        let outcome = check();
        let status = match (outcome.passed, outcome.known && KNOWN_FAILURES.iter().any(|k| k.0 == number)) {
            (true, _) => "PASS",
            (false, true) => {
                known += 1;
                "FAIL (known)"
            }
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {number:>2} {name:<22} {status:<12} {}", outcome.detail);
    }
    println!("{} passed, {known} known failures, {unexpected} unexpected failures", 10 - known - unexpected);
    for (number, what) in KNOWN_FAILURES {
        println!("known failure, criterion {number}: {what}");
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
