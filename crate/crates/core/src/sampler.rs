//! Seeded Monte Carlo sampling of Maxwell–Boltzmann velocities.
//!
//! Each component is an independent centred normal with variance `1/(2c)`.
//! A batch of `n` vectors is produced in [`CHUNK_LEN`](crate::CHUNK_LEN)
//! chunks; chunk `i` uses stream `stream_id + i` and draws the components of
//! each vector as three consecutive deviates (`vx`, `vy`, `vz`) from a fresh
//! [`NormalStream`].

use alloc::vec::Vec;

use crate::chunks::{chunk_count, ChunkExecutor, Sequential, CHUNK_LEN};
use crate::distribution::{speed_cdf, MaxwellParams, VelocityVector};
use crate::error::{Error, Result};
use crate::rng::{NormalStream, SeedSpec};

/// Asymptotic Kolmogorov–Smirnov critical coefficient at the 1% level:
/// reject when `D > 1.63/√n`.
pub const KS_CRITICAL_1PCT: f64 = 1.63;

/// A reproducible batch of sampled velocities. The parameters and seed
/// stored alongside regenerate it exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    velocities: Vec<VelocityVector>,
    params: MaxwellParams,
    seed_spec: SeedSpec,
}

impl SampleBatch {
    pub fn velocities(&self) -> &[VelocityVector] {
        &self.velocities
    }

    pub fn params(&self) -> &MaxwellParams {
        &self.params
    }

    pub fn seed_spec(&self) -> SeedSpec {
        self.seed_spec
    }

    pub fn count(&self) -> usize {
        self.velocities.len()
    }

    pub fn speeds(&self) -> impl Iterator<Item = f64> + '_ {
        self.velocities.iter().map(VelocityVector::speed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalMoments {
    pub mean: [f64; 3],
    /// Unbiased (n − 1) variance of each component.
    pub variance: [f64; 3],
    pub mean_speed: f64,
    pub mean_squared_speed: f64,
}

pub fn sample_batch(n: usize, p: &MaxwellParams, s: SeedSpec) -> Result<SampleBatch> {
    sample_batch_with(&Sequential, n, p, s)
}

/// [`sample_batch`] with chunks dispatched through `executor`; the result is
/// identical for every executor.
pub fn sample_batch_with<E: ChunkExecutor>(executor: &E, n: usize, p: &MaxwellParams, s: SeedSpec) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1"));
    }
    let params = *p;
    let chunks = executor.run(chunk_count(n), |i| {
        let len = CHUNK_LEN.min(n - i * CHUNK_LEN);
        sample_chunk(&params, s.chunk(i as u64), len)
    });
    let mut velocities = Vec::with_capacity(n);
    for chunk in chunks {
        velocities.extend(chunk);
    }
    Ok(SampleBatch {
        velocities,
        params,
        seed_spec: s,
    })
}

fn sample_chunk(p: &MaxwellParams, stream: SeedSpec, len: usize) -> Vec<VelocityVector> {
    let sigma = p.component_sigma();
    let mut normals = NormalStream::new(stream);
    (0..len)
        .map(|_| {
            let vx = sigma * normals.next_normal();
            let vy = sigma * normals.next_normal();
            let vz = sigma * normals.next_normal();
            VelocityVector { vx, vy, vz }
        })
        .collect()
}

/// Fraction of the batch with `m|v|²/2 ≥ e_activation`.
pub fn empirical_tail_fraction(batch: &SampleBatch, e_activation: f64, mass: f64) -> Result<f64> {
    if e_activation.is_nan() || e_activation < 0.0 {
        return Err(Error::Domain("activation energy must be non-negative"));
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::Domain("mass must be positive and finite"));
    }
    let hits = batch
        .velocities
        .iter()
        .filter(|v| v.kinetic_energy(mass) >= e_activation)
        .count();
    Ok(hits as f64 / batch.count() as f64)
}

/// Kolmogorov–Smirnov distance between the batch speeds and
/// [`speed_cdf`] under the batch's own parameters.
pub fn ks_statistic(batch: &SampleBatch) -> f64 {
    let mut speeds: Vec<f64> = batch.speeds().collect();
    ks_statistic_of_speeds(&mut speeds, &batch.params)
}

/// `sup |F_n(s) − F(s)|` for the given speeds against the Maxwell speed CDF.
/// Sorts `speeds` in place. An empty slice gives 0.
pub fn ks_statistic_of_speeds(speeds: &mut [f64], p: &MaxwellParams) -> f64 {
    speeds.sort_unstable_by(f64::total_cmp);
    let n = speeds.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &s) in speeds.iter().enumerate() {
        let f = speed_cdf(s.max(0.0), p).unwrap_or(f64::NAN);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    d
}

/// `1.63/√n`.
pub fn ks_critical_value_1pct(n: usize) -> f64 {
    KS_CRITICAL_1PCT / libm::sqrt(n as f64)
}

pub fn empirical_moments(batch: &SampleBatch) -> Result<EmpiricalMoments> {
    let n = batch.count();
    if n < 2 {
        return Err(Error::Domain("empirical moments need at least two samples"));
    }
    let nf = n as f64;
    let mut mean = [0.0; 3];
    let mut speed_sum = 0.0;
    let mut speed_sq_sum = 0.0;
    for v in &batch.velocities {
        mean[0] += v.vx;
        mean[1] += v.vy;
        mean[2] += v.vz;
        let sq = v.norm_sq();
        speed_sq_sum += sq;
        speed_sum += libm::sqrt(sq);
    }
    for m in &mut mean {
        *m /= nf;
    }
    let mut variance = [0.0; 3];
    for v in &batch.velocities {
        for (acc, (x, m)) in variance.iter_mut().zip([v.vx, v.vy, v.vz].into_iter().zip(mean)) {
            let d = x - m;
            *acc += d * d;
        }
    }
    for var in &mut variance {
        *var /= nf - 1.0;
    }
    Ok(EmpiricalMoments {
        mean,
        variance,
        mean_speed: speed_sum / nf,
        mean_squared_speed: speed_sq_sum / nf,
    })
}
