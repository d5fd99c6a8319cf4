//! Maxwell–Boltzmann velocity statistics and the reaction-rate estimates built
//! on top of them.
//!
//! The crate is `no_std` and needs only `alloc`. Everything here is a pure
//! function of its inputs:
//!
//! * [`distribution`]: the vector density `(c/π)^{3/2} e^{-c|v|²}`, its
//!   component and speed marginals, and the constant `c = m/(2kT)` fixed by
//!   the mean-energy condition `⟨m|v|²/2⟩ = 3kT/2`.
//! * [`quadrature`]: adaptive Gauss–Kronrod integration over finite and
//!   infinite intervals, Gaussian moments and the incomplete-gamma tail
//!   `Q(3/2, λ)`.
//! * [`sampler`]: seeded, chunk-deterministic Monte Carlo velocity batches
//!   with empirical moments, tail fractions and a Kolmogorov–Smirnov check.
//! * [`kinetics`]: tail fractions in `λ = E_a/(kT)` form, the inverse solve,
//!   reaction times and temperature sensitivity.
//! * [`random_walk`]: lattice random walks and diffusion lengths.
//!
//! IO, the command line and file formats live in the companion
//! `maxwell-kinetics-cli` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chunks;
pub mod distribution;
pub mod error;
pub mod kinetics;
pub mod quadrature;
pub mod random_walk;
pub mod rng;
pub mod sampler;
pub mod units;

pub use chunks::{ChunkExecutor, Sequential, CHUNK_LEN};
pub use distribution::{MaxwellParams, ThermalState, VelocityVector};
pub use error::{Error, Result};
pub use kinetics::{ActivationSpec, SensitivityReport, TailModel};
pub use quadrature::{Integrator, QuadratureResult};
pub use random_walk::{WalkSpec, WalkSummary};
pub use rng::SeedSpec;
pub use sampler::{EmpiricalMoments, SampleBatch};
pub use units::UnitSystem;
