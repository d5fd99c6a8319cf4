//! Chunk executor backed by the rayon thread pool.

use maxwell_kinetics::ChunkExecutor;
use rayon::prelude::*;

/// Runs chunk jobs on rayon's global pool. Results come back in chunk order,
/// so output matches [`maxwell_kinetics::Sequential`] exactly.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl ChunkExecutor for Rayon {
    fn run<T, F>(&self, chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..chunks).into_par_iter().map(job).collect()
    }
}
