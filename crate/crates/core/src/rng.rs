//! The pinned random source shared by the sampler and the random walks.
//!
//! Generator: PCG64 (`Lcg128Xsl64`: 128-bit LCG with the XSL-RR 64-bit output
//! permutation) from `rand_pcg`. A [`SeedSpec`] maps to it as
//! `state = seed as u128`, `stream = stream_id as u128`. Uniform doubles take
//! the top 53 bits of one `next_u64`. Normals come in pairs from Marsaglia's
//! polar method; each rejected pair consumes two uniforms and nothing else.
//! Changing any of this changes every seeded output.

use rand_core::Rng;
use rand_pcg::Pcg64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SeedSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(seed: u64) -> Self {
        SeedSpec { seed, stream_id: 0 }
    }

    pub fn with_stream(seed: u64, stream_id: u64) -> Self {
        SeedSpec { seed, stream_id }
    }

    /// Seed spec for chunk `index` of a chunked computation: same seed,
    /// stream `stream_id + index` (wrapping).
    pub fn chunk(&self, index: u64) -> Self {
        SeedSpec {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_add(index),
        }
    }

    pub fn generator(&self) -> StreamRng {
        StreamRng::new(*self)
    }
}

/// A single-owner generator for one stream.
#[derive(Debug, Clone)]
pub struct StreamRng {
    inner: Pcg64,
}

impl StreamRng {
    pub fn new(spec: SeedSpec) -> Self {
        StreamRng {
            inner: Pcg64::new(u128::from(spec.seed), u128::from(spec.stream_id)),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[-1, 1)`.
    pub fn uniform_symmetric(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }
}

/// Standard normal deviates by the polar method, cached in pairs.
#[derive(Debug, Clone)]
pub struct NormalStream {
    rng: StreamRng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(spec: SeedSpec) -> Self {
        NormalStream {
            rng: StreamRng::new(spec),
            spare: None,
        }
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = self.rng.uniform_symmetric();
            let v = self.rng.uniform_symmetric();
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = libm::sqrt(-2.0 * libm::log(s) / s);
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}
