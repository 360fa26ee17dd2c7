//! Rayon-backed executor for the core scan kernels.

use dioph_core::partition::Executor;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

/// Worker pool with a fixed thread count.
pub struct Pool {
    inner: ThreadPool,
}

impl Pool {
    /// `threads = 0` lets rayon pick one worker per core.
    pub fn new(threads: usize) -> Result<Self, ThreadPoolBuildError> {
        let inner = ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Self { inner })
    }

    pub fn threads(&self) -> usize {
        self.inner.current_num_threads()
    }
}

impl Executor for Pool {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let f = &f;
        self.inner.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
