//! Rayon-backed [`Executor`].

use dgplab_core::rng::Executor;
use rayon::prelude::*;
use rayon::ThreadPool;

/// Runs chunks on a rayon pool. Results come back in chunk order, so the
/// thread count never changes the output.
pub struct RayonExecutor {
    pool: Option<ThreadPool>,
}

impl RayonExecutor {
    /// Uses the global pool.
    pub fn new() -> Self {
        RayonExecutor { pool: None }
    }

    /// A private pool capped at `threads` workers.
    pub fn with_threads(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(RayonExecutor { pool: Some(pool) })
    }
}

impl Default for RayonExecutor {
    fn default() -> Self {
        Self::new()
    }
}

impl Executor for RayonExecutor {
    fn map_chunks<T, F>(&self, n_chunks: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        let run = || (0..n_chunks).into_par_iter().map(&job).collect();
        match &self.pool {
            Some(p) => p.install(run),
            None => run(),
        }
    }
}
