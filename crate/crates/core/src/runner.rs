//! Execution of independent Monte Carlo trials.

use alloc::vec::Vec;

/// Maps a trial body over `0..trials` and returns the results in trial order.
///
/// Implementations may run trials concurrently, but the returned vector must
/// be indexed by trial so that aggregation is independent of scheduling.
pub trait TrialRunner: Sync {
    fn run<T, F>(&self, trials: usize, body: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every trial on the calling thread.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sequential;

impl TrialRunner for Sequential {
    fn run<T, F>(&self, trials: usize, body: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..trials).map(body).collect()
    }
}
