//! Reaction-rate estimates from the fast-molecule tail.
//!
//! A molecule can react when its kinetic energy exceeds `E_a`. With
//! `λ = E_a/(kT)` the fraction of such molecules is `Q(3/2, λ)`
//! ([`TailModel::Exact`]); the back-of-envelope shorthand `e^{−λ}` is kept as
//! [`TailModel::Exponential`] so both can be reported side by side.
//!
//! The reaction-time model is one opportunity per collision time:
//! `t = τ / fraction`.

use crate::distribution::ThermalState;
use crate::error::{Error, Result};
use crate::quadrature::q_gamma_3half;

/// Mean time between collisions, one nanosecond.
pub const DEFAULT_COLLISION_TIME: f64 = 1e-9;

/// Upper end of the bisection bracket for [`solve_lambda`].
pub const LAMBDA_BRACKET_MAX: f64 = 800.0;

/// Smallest target fraction accepted by [`solve_lambda`].
pub const MIN_TARGET_FRACTION: f64 = 1e-300;

const BISECTION_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TailModel {
    /// `Q(3/2, λ)`, the exact Maxwell–Boltzmann energy tail.
    #[default]
    Exact,
    /// `e^{−λ}`.
    Exponential,
}

impl TailModel {
    pub fn name(self) -> &'static str {
        match self {
            TailModel::Exact => "exact",
            TailModel::Exponential => "exponential",
        }
    }
}

/// Reduced activation energy, either given directly or from `E_a` and a
/// thermal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ActivationSpec {
    Lambda(f64),
    Energy { e_activation: f64, state: ThermalState },
}

impl ActivationSpec {
    /// `λ`, or `E_a/(kT)` for the energy form.
    pub fn lambda(&self) -> Result<f64> {
        let lambda = match *self {
            ActivationSpec::Lambda(l) => l,
            ActivationSpec::Energy { e_activation, state } => e_activation / state.thermal_energy(),
        };
        if lambda.is_nan() || lambda < 0.0 {
            return Err(Error::Domain("lambda must be non-negative"));
        }
        Ok(lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityReport {
    pub model: TailModel,
    pub lambda_base: f64,
    pub t_base: f64,
    pub t_new: f64,
    pub lambda_new: f64,
    pub fraction_base: f64,
    pub fraction_new: f64,
    /// `fraction_new / fraction_base`.
    pub ratio: f64,
    /// `ratio − 1`.
    pub relative_change: f64,
}

/// Exact tail fraction `Q(3/2, λ)`.
pub fn tail_fraction(a: &ActivationSpec) -> Result<f64> {
    tail_fraction_for(TailModel::Exact, a.lambda()?)
}

pub fn tail_fraction_for(model: TailModel, lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::Domain("lambda must be non-negative"));
    }
    match model {
        TailModel::Exact => q_gamma_3half(lambda),
        TailModel::Exponential => Ok(libm::exp(-lambda)),
    }
}

/// Inverse of [`tail_fraction`]: the `λ` at which the exact tail equals
/// `target_fraction`, found by bisection on `[0, 800]`.
pub fn solve_lambda(target_fraction: f64) -> Result<f64> {
    solve_lambda_for(TailModel::Exact, target_fraction)
}

/// The exponential model has the closed-form inverse `−ln(target)`.
pub fn solve_lambda_for(model: TailModel, target_fraction: f64) -> Result<f64> {
    if !(target_fraction > 0.0 && target_fraction <= 1.0) {
        return Err(Error::Domain("target fraction must lie in (0, 1]"));
    }
    if target_fraction < MIN_TARGET_FRACTION {
        return Err(Error::Domain("target fraction below 1e-300"));
    }
    if target_fraction == 1.0 {
        return Ok(0.0);
    }
    match model {
        TailModel::Exponential => Ok(-libm::log(target_fraction)),
        TailModel::Exact => {
            let (mut lo, mut hi) = (0.0_f64, LAMBDA_BRACKET_MAX);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if q_gamma_3half(mid)? > target_fraction {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        }
    }
}

/// `collision_time / fraction`.
pub fn reaction_time(fraction: f64, collision_time: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Domain("fraction must lie in (0, 1]"));
    }
    if !(collision_time > 0.0 && collision_time.is_finite()) {
        return Err(Error::Domain("collision time must be positive"));
    }
    Ok(collision_time / fraction)
}

/// Exact-model [`temperature_sensitivity_for`].
pub fn temperature_sensitivity(lambda_base: f64, t_base: f64, t_new: f64) -> Result<SensitivityReport> {
    temperature_sensitivity_for(TailModel::Exact, lambda_base, t_base, t_new)
}

/// Change in the tail fraction when the temperature moves from `t_base` to
/// `t_new` at fixed activation energy, so `λ' = λ·t_base/t_new`.
pub fn temperature_sensitivity_for(
    model: TailModel,
    lambda_base: f64,
    t_base: f64,
    t_new: f64,
) -> Result<SensitivityReport> {
    if !(t_base > 0.0 && t_base.is_finite() && t_new > 0.0 && t_new.is_finite()) {
        return Err(Error::Domain("temperatures must be positive and finite"));
    }
    if !(lambda_base > 0.0 && lambda_base.is_finite()) {
        return Err(Error::Domain("lambda must be positive and finite"));
    }
    let lambda_new = lambda_base * t_base / t_new;
    let fraction_base = tail_fraction_for(model, lambda_base)?;
    let fraction_new = tail_fraction_for(model, lambda_new)?;
    if fraction_base <= 0.0 || fraction_new <= 0.0 {
        return Err(Error::Domain("tail fraction underflows at this lambda"));
    }
    let ratio = fraction_new / fraction_base;
    Ok(SensitivityReport {
        model,
        lambda_base,
        t_base,
        t_new,
        lambda_new,
        fraction_base,
        fraction_new,
        ratio,
        relative_change: ratio - 1.0,
    })
}

/// Exact-model [`fever_report_for`].
pub fn fever_report(t_base: f64, t_new: f64, baseline_fraction: f64) -> Result<SensitivityReport> {
    fever_report_for(TailModel::Exact, t_base, t_new, baseline_fraction)
}

/// Solves for the `λ` that gives `baseline_fraction` at `t_base`, then
/// reports the sensitivity to `t_new` under the same model.
pub fn fever_report_for(
    model: TailModel,
    t_base: f64,
    t_new: f64,
    baseline_fraction: f64,
) -> Result<SensitivityReport> {
    let lambda = solve_lambda_for(model, baseline_fraction)?;
    temperature_sensitivity_for(model, lambda, t_base, t_new)
}
