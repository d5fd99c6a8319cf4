//! Fixed-size chunking for seeded computations.
//!
//! Work over `n` items is split into chunks of [`CHUNK_LEN`]; chunk `i` draws
//! from stream `stream_id + i` and results are concatenated in chunk order.
//! The output therefore does not depend on how chunks are scheduled.

use alloc::vec::Vec;

pub const CHUNK_LEN: usize = 65_536;

/// Runs `job(0..chunks)` and returns the results in index order.
pub trait ChunkExecutor {
    fn run<T, F>(&self, chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs chunks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl ChunkExecutor for Sequential {
    fn run<T, F>(&self, chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..chunks).map(job).collect()
    }
}

/// `(index, length)` of each chunk covering `n` items.
pub fn chunk_lengths(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n.div_ceil(CHUNK_LEN)).map(move |i| (i, CHUNK_LEN.min(n - i * CHUNK_LEN)))
}

pub fn chunk_count(n: usize) -> usize {
    n.div_ceil(CHUNK_LEN)
}
