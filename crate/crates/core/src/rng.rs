//! Reproducible random streams for chunked Monte Carlo.
//!
//! Work is split into fixed-size chunks. Chunk `i` of a run seeded with `s`
//! always draws from ChaCha8 stream `i` keyed by `s`, and per-chunk results
//! are concatenated in chunk order, so the output is identical for any
//! number of workers.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples per chunk.
pub const CHUNK_LEN: usize = 1 << 14;

pub type StreamRng = ChaCha8Rng;

/// The random stream for chunk `chunk` of a run seeded with `seed`.
pub fn substream(seed: u64, chunk: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Derives an independent seed for a tagged sub-experiment (SplitMix64 finaliser).
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs independent chunk jobs, returning results in chunk order.
pub trait Executor: Sync {
    fn map_chunks<T, F>(&self, n_chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs chunks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_chunks<T, F>(&self, n_chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n_chunks).map(job).collect()
    }
}

/// Number of chunks covering `n` samples.
pub fn chunk_count(n: usize) -> usize {
    n.div_ceil(CHUNK_LEN)
}

/// Length of chunk `chunk` in a run of `n` samples.
pub fn chunk_len(n: usize, chunk: usize) -> usize {
    CHUNK_LEN.min(n - chunk * CHUNK_LEN)
}

/// Draws `n` samples with `draw`, chunk by chunk.
pub fn sample_batch<T, E, F>(exec: &E, seed: u64, n: usize, draw: F) -> Vec<T>
where
    T: Send,
    E: Executor + ?Sized,
    F: Fn(&mut StreamRng) -> T + Sync + Send,
{
    let chunks = exec.map_chunks(chunk_count(n), |c| {
        let mut rng = substream(seed, c as u64);
        (0..chunk_len(n, c)).map(|_| draw(&mut rng)).collect::<Vec<T>>()
    });
    let mut out = Vec::with_capacity(n);
    for chunk in chunks {
        out.extend(chunk);
    }
    out
}
