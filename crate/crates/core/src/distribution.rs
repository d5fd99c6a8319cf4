//! The Maxwell–Boltzmann velocity distribution.
//!
//! Isotropy plus independent components force the density into the form
//! `F(v) = C₁·exp(C₂·|v|²)`; normalisation fixes `C₁ = (c/π)^{3/2}` with
//! `C₂ = −c`, and the mean-energy condition `⟨m|v|²/2⟩ = 3kT/2` fixes
//! `c = m/(2kT)`.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::units::UnitSystem;

/// Bound on `c·|v|²` past which `exp` leaves the normal range.
pub const EXP_UNDERFLOW_BOUND: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    temperature: f64,
    mass: f64,
    unit_system: UnitSystem,
}

impl ThermalState {
    /// `temperature` in kelvin and `mass` in kilograms for [`UnitSystem::Si`];
    /// dimensionless for [`UnitSystem::Reduced`].
    pub fn new(temperature: f64, mass: f64, unit_system: UnitSystem) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::Domain("temperature must be positive and finite"));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Domain("mass must be positive and finite"));
        }
        Ok(ThermalState {
            temperature,
            mass,
            unit_system,
        })
    }

    pub fn reduced(temperature: f64, mass: f64) -> Result<Self> {
        Self::new(temperature, mass, UnitSystem::Reduced)
    }

    pub fn si(temperature: f64, mass_kg: f64) -> Result<Self> {
        Self::new(temperature, mass_kg, UnitSystem::Si)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn unit_system(&self) -> UnitSystem {
        self.unit_system
    }

    /// `k·T` in the state's energy units.
    pub fn thermal_energy(&self) -> f64 {
        self.unit_system.boltzmann() * self.temperature
    }
}

/// The single distribution parameter `c` (inverse squared-speed scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxwellParams {
    c: f64,
}

impl MaxwellParams {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain("distribution parameter c must be positive and finite"));
        }
        Ok(MaxwellParams { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `(c/π)^{3/2}`, the normalisation of the vector density.
    pub fn prefactor(&self) -> f64 {
        let r = self.c / PI;
        r * libm::sqrt(r)
    }

    /// `sqrt(c/π)`, the normalisation of one component.
    pub fn component_prefactor(&self) -> f64 {
        libm::sqrt(self.c / PI)
    }

    /// Standard deviation of each velocity component, `1/sqrt(2c)`.
    pub fn component_sigma(&self) -> f64 {
        1.0 / libm::sqrt(2.0 * self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VelocityVector {
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
}

impl VelocityVector {
    pub fn new(vx: f64, vy: f64, vz: f64) -> Result<Self> {
        if !(vx.is_finite() && vy.is_finite() && vz.is_finite()) {
            return Err(Error::Domain("velocity components must be finite"));
        }
        Ok(VelocityVector { vx, vy, vz })
    }

    pub fn norm_sq(&self) -> f64 {
        self.vx * self.vx + self.vy * self.vy + self.vz * self.vz
    }

    pub fn speed(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        VelocityVector {
            vx: self.vx * factor,
            vy: self.vy * factor,
            vz: self.vz * factor,
        }
    }

    pub fn kinetic_energy(&self, mass: f64) -> f64 {
        0.5 * mass * self.norm_sq()
    }
}

/// `c = m/(2kT)`, the exact solution of `3m/(4c) = 3kT/2`.
pub fn params_from_state(state: &ThermalState) -> MaxwellParams {
    MaxwellParams {
        c: state.mass() / (2.0 * state.thermal_energy()),
    }
}

/// Vector density `(c/π)^{3/2}·exp(−c|v|²)`. Underflows to exactly 0.0 far in
/// the tail.
pub fn density(v: &VelocityVector, p: &MaxwellParams) -> f64 {
    density_of_norm_sq(v.norm_sq(), p)
}

/// The vector density as a function of `|v|²` alone.
pub fn density_of_norm_sq(norm_sq: f64, p: &MaxwellParams) -> f64 {
    p.prefactor() * libm::exp(-p.c * norm_sq)
}

/// One-component marginal `sqrt(c/π)·exp(−c·u²)`.
pub fn component_density(u: f64, p: &MaxwellParams) -> f64 {
    component_density_of_sq(u * u, p)
}

fn component_density_of_sq(u_sq: f64, p: &MaxwellParams) -> f64 {
    p.component_prefactor() * libm::exp(-p.c * u_sq)
}

/// Speed marginal `4π s² (c/π)^{3/2} exp(−c s²)`.
pub fn speed_density(s: f64, p: &MaxwellParams) -> Result<f64> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::Domain("speed must be non-negative"));
    }
    if s.is_infinite() {
        return Ok(0.0);
    }
    Ok(4.0 * PI * s * s * density_of_norm_sq(s * s, p))
}

/// `P(|v| ≤ s)`, which equals the regularized lower incomplete gamma
/// `P(3/2, c·s²)`.
pub fn speed_cdf(s: f64, p: &MaxwellParams) -> Result<f64> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::Domain("speed must be non-negative"));
    }
    if s.is_infinite() {
        return Ok(1.0);
    }
    quadrature::p_gamma_3half(p.c * s * s)
}

/// Most probable speed, `1/sqrt(c)`.
pub fn speed_mode(p: &MaxwellParams) -> f64 {
    1.0 / libm::sqrt(p.c)
}

/// `⟨|v|⟩ = 2/sqrt(π c)`.
pub fn mean_speed(p: &MaxwellParams) -> f64 {
    2.0 / libm::sqrt(PI * p.c)
}

/// `⟨|v|²⟩ = 3/(2c)`.
pub fn mean_squared_speed(p: &MaxwellParams) -> f64 {
    1.5 / p.c
}

/// `m·⟨|v|²⟩/2 = 3m/(4c)`.
pub fn mean_kinetic_energy(p: &MaxwellParams, mass: f64) -> Result<f64> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Domain("mass must be positive and finite"));
    }
    Ok(3.0 * mass / (4.0 * p.c))
}

/// `|ln ψ(a+b+c₃) − ln φ(a) − ln φ(b) − ln φ(c₃)|`, where `ψ` is the vector
/// density and `φ` the component density, both as functions of squared
/// velocity components.
///
/// The densities themselves are evaluated while `c·(a+b+c₃)` stays within
/// [`EXP_UNDERFLOW_BOUND`]. Beyond it they are subnormal or zero, so each
/// log-density `ln(prefactor) − c·x` is formed instead, carried as an
/// unevaluated pair of doubles so that rounding in terms of size ~10³ does
/// not swamp the comparison.
pub fn separability_residual(a: f64, b: f64, c3: f64, p: &MaxwellParams) -> Result<f64> {
    for x in [a, b, c3] {
        if x.is_nan() || x < 0.0 || x.is_infinite() {
            return Err(Error::Domain("squared components must be finite and non-negative"));
        }
    }
    let total = a + b + c3;
    let residual = if p.c * total <= EXP_UNDERFLOW_BOUND {
        libm::log(density_of_norm_sq(total, p))
            - libm::log(component_density_of_sq(a, p))
            - libm::log(component_density_of_sq(b, p))
            - libm::log(component_density_of_sq(c3, p))
    } else {
        let (ab, ab_err) = two_sum(a, b);
        let (sum, sum_err) = two_sum(ab, c3);
        let vector = log_density_pair(libm::log(p.prefactor()), p.c, (sum, ab_err + sum_err));
        let component_log_prefactor = libm::log(p.component_prefactor());
        let mut acc = vector;
        for x in [a, b, c3] {
            let (hi, lo) = log_density_pair(component_log_prefactor, p.c, (x, 0.0));
            acc = pair_add(acc, (-hi, -lo));
        }
        acc.0 + acc.1
    };
    Ok(residual.abs())
}

/// Error-free `a + b = s + e`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn pair_add(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    let (s, e) = two_sum(x.0, y.0);
    two_sum(s, e + x.1 + y.1)
}

/// `log_prefactor − c·x` for `x` given as a pair, with the product split
/// exactly by a fused multiply-add.
fn log_density_pair(log_prefactor: f64, c: f64, x: (f64, f64)) -> (f64, f64) {
    let product = c * x.0;
    let product_err = libm::fma(c, x.0, -product) + c * x.1;
    pair_add((log_prefactor, 0.0), (-product, -product_err))
}
