//! Physical constants and the unit-system switch.

/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN_SI: f64 = 1.380649e-23;

/// Unified atomic mass unit in kilograms.
pub const AMU_KG: f64 = 1.660_539_068_92e-27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitSystem {
    /// Kelvin, kilograms, metres per second.
    Si,
    /// Dimensionless units with `k = 1`.
    Reduced,
}

impl UnitSystem {
    pub fn boltzmann(self) -> f64 {
        match self {
            UnitSystem::Si => BOLTZMANN_SI,
            UnitSystem::Reduced => 1.0,
        }
    }
}

pub fn amu_to_kg(amu: f64) -> f64 {
    amu * AMU_KG
}
