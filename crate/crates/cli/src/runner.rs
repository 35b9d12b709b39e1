use corrgraph_core::runner::TrialRunner;
use rayon::prelude::*;

/// Runs trials on a dedicated rayon pool. Results come back in trial order,
/// so output does not depend on the number of threads.
pub struct RayonRunner {
    pool: rayon::ThreadPool,
}

impl RayonRunner {
    /// `threads == 0` lets rayon pick the number of threads.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(RayonRunner { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl TrialRunner for RayonRunner {
    fn run<T, F>(&self, trials: usize, body: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool
            .install(|| (0..trials).into_par_iter().map(&body).collect())
    }
}
