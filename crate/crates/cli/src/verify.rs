//! Built-in oracle suite behind `mbk verify`.
//!
//! A check passes when both its measured residual and the error estimate of
//! the computation behind it are within tolerance. Quadrature runs a decade
//! tighter than the check tolerance, floored where the integrator would only
//! chase roundoff, so an unreachable tolerance fails rather than hangs.

use maxwell_kinetics::distribution::{density, mean_kinetic_energy, params_from_state, separability_residual};
use maxwell_kinetics::quadrature::{integrate_r3, Integrator};
use maxwell_kinetics::rng::StreamRng;
use maxwell_kinetics::sampler::{ks_critical_value_1pct, ks_statistic, sample_batch_with};
use maxwell_kinetics::units::{amu_to_kg, BOLTZMANN_SI};
use maxwell_kinetics::{Error, MaxwellParams, QuadratureResult, SeedSpec, ThermalState, VelocityVector};
use rayon::prelude::*;

use crate::args::VerifyArgs;
use crate::output::{Body, Cell, Envelope, Table};
use crate::parallel::Rayon;
use crate::CliError;

pub const NORMALIZATION_C: [f64; 4] = [0.1, 0.5, 1.0, 10.0];
const SQRT_PI: f64 = 1.772_453_850_905_516;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub error_estimate: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance && self.error_estimate <= self.tolerance
    }
}

/// Quadrature outcome, keeping the best estimate when the budget ran out.
fn settle(r: Result<QuadratureResult, Error>) -> Result<QuadratureResult, CliError> {
    match r {
        Ok(q) => Ok(q),
        Err(Error::Convergence { best }) => Ok(QuadratureResult {
            abs_error_estimate: f64::INFINITY,
            ..best
        }),
        Err(e) => Err(e.into()),
    }
}

fn quadrature_tol(check_tol: f64, floor: f64) -> f64 {
    (0.1 * check_tol).max(floor)
}

pub fn gauss(tol: f64) -> Result<Check, CliError> {
    let r = settle(Integrator::new(quadrature_tol(tol, 1e-14)).integrate(
        |x| (-x * x).exp(),
        f64::NEG_INFINITY,
        f64::INFINITY,
    ))?;
    Ok(Check {
        name: "gauss_integral",
        residual: (r.value - SQRT_PI).abs(),
        error_estimate: r.abs_error_estimate,
        tolerance: tol,
    })
}

/// Worst case of the iterated 3-D integral of the density over the `c`
/// values in [`NORMALIZATION_C`].
pub fn normalization(tol: f64) -> Result<Check, CliError> {
    let qtol = quadrature_tol(tol, 1e-12);
    let results = NORMALIZATION_C
        .par_iter()
        .map(|&c| {
            let p = MaxwellParams::new(c)?;
            let integrator = Integrator::new(qtol).with_scale(1.0 / c.sqrt());
            settle(integrate_r3(&integrator, |x, y, z| density(&VelocityVector { vx: x, vy: y, vz: z }, &p)))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Check {
        name: "normalization",
        residual: results.iter().map(|r| (r.value - 1.0).abs()).fold(0.0, f64::max),
        error_estimate: results.iter().map(|r| r.abs_error_estimate).fold(0.0, f64::max),
        tolerance: tol,
    })
}

fn verification_states() -> Result<Vec<ThermalState>, CliError> {
    Ok(vec![
        ThermalState::reduced(1.0, 1.0)?,
        ThermalState::reduced(2.0, 1.0)?,
        ThermalState::si(310.0, amu_to_kg(32.0))?,
        ThermalState::si(311.0, amu_to_kg(1.0))?,
    ])
}

/// Closed-form mean energy against `3kT/2`, relative, in both unit systems.
pub fn mean_energy(tol: f64) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    for state in verification_states()? {
        let p = params_from_state(&state);
        let target = 1.5 * state.thermal_energy();
        worst = worst.max(((mean_kinetic_energy(&p, state.mass())? - target) / target).abs());
    }
    Ok(Check {
        name: "mean_energy",
        residual: worst,
        error_estimate: 0.0,
        tolerance: tol,
    })
}

/// Quadrature of `m|v|²/2` times the density at 310 K for O₂ (SI).
pub fn mean_energy_quadrature(tol: f64) -> Result<Check, CliError> {
    let mass = amu_to_kg(32.0);
    let p = params_from_state(&ThermalState::si(310.0, mass)?);
    let target = 1.5 * BOLTZMANN_SI * 310.0;
    let integrator = Integrator::new(quadrature_tol(tol, 1e-12) * target).with_scale(1.0 / p.c().sqrt());
    let r = settle(integrate_r3(&integrator, |x, y, z| {
        let v = VelocityVector { vx: x, vy: y, vz: z };
        0.5 * mass * v.norm_sq() * density(&v, &p)
    }))?;
    Ok(Check {
        name: "mean_energy_quadrature",
        residual: ((r.value - target) / target).abs(),
        error_estimate: r.abs_error_estimate / target,
        tolerance: tol,
    })
}

fn uniform_in(rng: &mut StreamRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.uniform()
}

/// Largest separability residual over random squared components in
/// `[0, 100]³` and `c` in `[0.01, 10]`.
pub fn separability(tol: f64, cases: usize, seed: SeedSpec) -> Result<Check, CliError> {
    let mut rng = seed.generator();
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let (a, b, c3) = (uniform_in(&mut rng, 0.0, 100.0), uniform_in(&mut rng, 0.0, 100.0), uniform_in(&mut rng, 0.0, 100.0));
        let p = MaxwellParams::new(uniform_in(&mut rng, 0.01, 10.0))?;
        worst = worst.max(separability_residual(a, b, c3, &p)?);
    }
    Ok(Check {
        name: "separability",
        residual: worst,
        error_estimate: 0.0,
        tolerance: tol,
    })
}

/// Largest relative change of the density under random rotations, with
/// velocities up to five thermal speeds.
pub fn isotropy(tol: f64, cases: usize, seed: SeedSpec) -> Result<Check, CliError> {
    let mut rng = seed.generator();
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < cases {
        let c = uniform_in(&mut rng, 0.01, 10.0);
        let p = MaxwellParams::new(c)?;
        let scale = 1.0 / c.sqrt();
        let v = VelocityVector {
            vx: scale * uniform_in(&mut rng, -5.0, 5.0),
            vy: scale * uniform_in(&mut rng, -5.0, 5.0),
            vz: scale * uniform_in(&mut rng, -5.0, 5.0),
        };
        let q = [(); 4].map(|_| rng.uniform_symmetric());
        let norm_sq: f64 = q.iter().map(|x| x * x).sum();
        if norm_sq < 1e-3 {
            continue;
        }
        let rv = rotate(q, &v);
        let d = density(&v, &p);
        worst = worst.max((density(&rv, &p) - d).abs() / d);
        done += 1;
    }
    Ok(Check {
        name: "isotropy",
        residual: worst,
        error_estimate: 0.0,
        tolerance: tol,
    })
}

/// Rotation by the unit quaternion along `q`.
fn rotate(q: [f64; 4], v: &VelocityVector) -> VelocityVector {
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|c| c / n);
    let r = [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ];
    let a = [v.vx, v.vy, v.vz];
    let row = |i: usize| r[i][0] * a[0] + r[i][1] * a[1] + r[i][2] * a[2];
    VelocityVector {
        vx: row(0),
        vy: row(1),
        vz: row(2),
    }
}

/// KS distance of sampled speeds at `c = 0.5` against the 1% critical value.
pub fn kolmogorov_smirnov(samples: usize, seed: SeedSpec) -> Result<Check, CliError> {
    let p = MaxwellParams::new(0.5)?;
    let batch = sample_batch_with(&Rayon, samples, &p, seed)?;
    let d = ks_statistic(&batch);
    Ok(Check {
        name: "kolmogorov_smirnov",
        residual: d,
        error_estimate: 0.0,
        tolerance: ks_critical_value_1pct(samples),
    })
}

pub fn run_checks(a: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    for (flag, tol) in [
        ("--tol-gauss", a.tol_gauss),
        ("--tol-normalization", a.tol_normalization),
        ("--tol-mean-energy", a.tol_mean_energy),
        ("--tol-mean-energy-quadrature", a.tol_mean_energy_quadrature),
        ("--tol-separability", a.tol_separability),
        ("--tol-isotropy", a.tol_isotropy),
    ] {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!("{flag} must be positive and finite")));
        }
    }
    if a.cases == 0 {
        return Err(CliError::Usage("--cases must be at least 1".into()));
    }
    if a.ks_samples == 0 {
        return Err(CliError::Usage("--ks-samples must be at least 1".into()));
    }
    let seed = SeedSpec::with_stream(a.seed.seed, a.seed.stream);
    // The randomized checks draw from separate streams of the same seed.
    Ok(vec![
        gauss(a.tol_gauss)?,
        normalization(a.tol_normalization)?,
        mean_energy(a.tol_mean_energy)?,
        mean_energy_quadrature(a.tol_mean_energy_quadrature)?,
        separability(a.tol_separability, a.cases, seed)?,
        isotropy(a.tol_isotropy, a.cases, SeedSpec::with_stream(seed.seed, seed.stream_id.wrapping_add(1)))?,
        kolmogorov_smirnov(a.ks_samples, SeedSpec::with_stream(seed.seed, seed.stream_id.wrapping_add(2)))?,
    ])
}

pub fn envelope(a: &VerifyArgs, checks: &[Check]) -> Envelope {
    let parameters = vec![
        ("tol_gauss", Cell::from(a.tol_gauss)),
        ("tol_normalization", Cell::from(a.tol_normalization)),
        ("tol_mean_energy", Cell::from(a.tol_mean_energy)),
        ("tol_mean_energy_quadrature", Cell::from(a.tol_mean_energy_quadrature)),
        ("tol_separability", Cell::from(a.tol_separability)),
        ("tol_isotropy", Cell::from(a.tol_isotropy)),
        ("cases", Cell::from(a.cases)),
        ("ks_samples", Cell::from(a.ks_samples)),
        ("seed", Cell::from(a.seed.seed)),
        ("stream", Cell::from(a.seed.stream)),
    ];
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                Cell::from(c.name),
                Cell::from(c.residual),
                Cell::from(c.error_estimate),
                Cell::from(c.tolerance),
                Cell::from(if c.passed() { "PASS" } else { "FAIL" }),
            ]
        })
        .collect();
    let table = Table {
        columns: vec!["check", "residual", "error_estimate", "tolerance", "status"],
        rows,
        summary: None,
    };
    Envelope::new("verify", parameters, Body::Rows(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_needs_residual_and_estimate_within_tolerance() {
        let c = |residual, error_estimate| Check {
            name: "x",
            residual,
            error_estimate,
            tolerance: 1e-9,
        };
        assert!(c(1e-10, 1e-10).passed());
        assert!(!c(1e-8, 0.0).passed());
        assert!(!c(0.0, 1e-8).passed());
        assert!(!c(f64::NAN, 0.0).passed());
        assert!(!c(0.0, f64::INFINITY).passed());
    }

    #[test]
    fn rotation_is_orthogonal() {
        let v = VelocityVector::new(0.3, -2.0, 1.1).unwrap();
        let r = rotate([0.2, -0.7, 0.4, 0.9], &v);
        assert!((r.norm_sq() - v.norm_sq()).abs() < 1e-14);
    }

    #[test]
    fn cheap_checks_pass() {
        let seed = SeedSpec::new(0);
        assert!(gauss(1e-10).unwrap().passed());
        assert!(mean_energy(1e-12).unwrap().passed());
        assert!(separability(1e-12, 1000, seed).unwrap().passed());
        assert!(isotropy(1e-12, 1000, seed).unwrap().passed());
        assert!(kolmogorov_smirnov(10_000, SeedSpec::with_stream(0, 2)).unwrap().passed());
        assert!(!gauss(1e-20).unwrap().passed());
    }
}
