//! Lattice random walks and diffusion lengths.
//!
//! Every step picks one of the `dimension` axes uniformly and moves ±1 along
//! it, scaled by `step_length`. One `next_u64` drives one step: bit 0 is the
//! sign and the remaining 63 bits select the axis as `((r >> 1)·d) >> 63`.
//! Trials are chunked like sample batches (chunk `i` on stream
//! `stream_id + i`) and accumulated in exact integer arithmetic, so the
//! summary does not depend on scheduling.
//!
//! The diffusion convention is `MSD = 2·d·D·t`.

use alloc::vec::Vec;

use crate::chunks::{chunk_count, ChunkExecutor, Sequential, CHUNK_LEN};
use crate::error::{Error, Result};
use crate::rng::SeedSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkSpec {
    steps: u64,
    dimension: usize,
    step_length: f64,
    trials: u64,
    seed_spec: SeedSpec,
}

impl WalkSpec {
    pub fn new(steps: u64, dimension: usize, step_length: f64, trials: u64, seed_spec: SeedSpec) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Domain("walk needs at least one step"));
        }
        if !(1..=3).contains(&dimension) {
            return Err(Error::Domain("dimension must be 1, 2 or 3"));
        }
        if !(step_length > 0.0 && step_length.is_finite()) {
            return Err(Error::Domain("step length must be positive and finite"));
        }
        if trials == 0 {
            return Err(Error::Domain("at least one trial is required"));
        }
        // Σ r⁴ over all trials must fit in u128: steps⁴·trials < 2^128.
        let steps_sq = u128::from(steps) * u128::from(steps);
        let fits = steps_sq
            .checked_mul(steps_sq)
            .and_then(|s4| s4.checked_mul(u128::from(trials)))
            .is_some();
        if !fits {
            return Err(Error::Domain("steps⁴·trials exceeds the exact accumulator range"));
        }
        Ok(WalkSpec {
            steps,
            dimension,
            step_length,
            trials,
            seed_spec,
        })
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn step_length(&self) -> f64 {
        self.step_length
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed_spec(&self) -> SeedSpec {
        self.seed_spec
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSummary {
    /// Mean end-point displacement along each axis (length = dimension).
    pub mean_displacement: Vec<f64>,
    pub mean_squared_displacement: f64,
    /// Unbiased variance of the squared end-point distance; 0 for one trial.
    pub variance_of_squared_displacement: f64,
    pub trials: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    sum: [i128; 3],
    sum_sq: u128,
    sum_quad: u128,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.sum.iter_mut().zip(other.sum) {
            *a += b;
        }
        self.sum_sq += other.sum_sq;
        self.sum_quad += other.sum_quad;
    }
}

pub fn simulate_walks(spec: &WalkSpec) -> WalkSummary {
    simulate_walks_with(&Sequential, spec)
}

pub fn simulate_walks_with<E: ChunkExecutor>(executor: &E, spec: &WalkSpec) -> WalkSummary {
    let trials = spec.trials as usize;
    let tallies = executor.run(chunk_count(trials), |i| {
        let len = CHUNK_LEN.min(trials - i * CHUNK_LEN);
        walk_chunk(spec, spec.seed_spec.chunk(i as u64), len)
    });
    let mut total = Tally::default();
    for t in &tallies {
        total.merge(t);
    }

    let n = spec.trials as f64;
    let l = spec.step_length;
    let mean_displacement = total.sum[..spec.dimension]
        .iter()
        .map(|&s| s as f64 / n * l)
        .collect();
    let mean_sq_lattice = total.sum_sq as f64 / n;
    let variance_lattice = if spec.trials > 1 {
        let mean_quad = total.sum_quad as f64 / n;
        ((mean_quad - mean_sq_lattice * mean_sq_lattice) * n / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    WalkSummary {
        mean_displacement,
        mean_squared_displacement: mean_sq_lattice * l * l,
        variance_of_squared_displacement: variance_lattice * l * l * l * l,
        trials: spec.trials,
    }
}

fn walk_chunk(spec: &WalkSpec, stream: SeedSpec, len: usize) -> Tally {
    let mut rng = stream.generator();
    let dim = spec.dimension as u128;
    let mut tally = Tally::default();
    for _ in 0..len {
        let mut pos = [0i64; 3];
        for _ in 0..spec.steps {
            let r = rng.next_u64();
            let axis = ((u128::from(r >> 1) * dim) >> 63) as usize;
            pos[axis] += if r & 1 == 0 { 1 } else { -1 };
        }
        let r_sq: u128 = pos.iter().map(|&x| (i128::from(x) * i128::from(x)) as u128).sum();
        for (acc, x) in tally.sum.iter_mut().zip(pos) {
            *acc += i128::from(x);
        }
        tally.sum_sq += r_sq;
        tally.sum_quad += r_sq * r_sq;
    }
    tally
}

/// `L = sqrt(2·d·D·t)`.
pub fn diffusion_length(d_coefficient: f64, time: f64, dimension: usize) -> Result<f64> {
    check_positive(d_coefficient, "diffusion coefficient must be positive")?;
    check_positive(time, "time must be positive")?;
    check_dimension(dimension)?;
    Ok(libm::sqrt(2.0 * dimension as f64 * d_coefficient * time))
}

/// `D = ℓ²/(2·d·τ)` for a walk with step length `ℓ` taken every `τ`.
pub fn diffusion_coefficient_from_walk(step_length: f64, step_time: f64, dimension: usize) -> Result<f64> {
    check_positive(step_length, "step length must be positive")?;
    check_positive(step_time, "step time must be positive")?;
    check_dimension(dimension)?;
    Ok(step_length * step_length / (2.0 * dimension as f64 * step_time))
}

fn check_positive(x: f64, msg: &'static str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(msg))
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::Domain("dimension must be 1, 2 or 3"))
    }
}
