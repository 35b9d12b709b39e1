//! Monte Carlo estimates of ϱ(λ), the limiting maximum subgraph density of
//! G(n, λ/n), and their inversion.

use alloc::vec::Vec;

use crate::density::densest_exact;
use crate::graph::sample_er;
use crate::rng::RngSeed;
use crate::runner::TrialRunner;
use crate::stats::mean_stderr;
use crate::{Error, Result};

pub const DEFAULT_RHO_N: usize = 2000;
pub const DEFAULT_RHO_TRIALS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct RhoEstimate {
    pub lambda: f64,
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
    /// Per-trial maximum densities, in trial order.
    pub samples: Vec<f64>,
    /// Per-trial sizes of the (maximum-cardinality) densest subgraph.
    pub sizes: Vec<usize>,
}

/// Something that can be asked for ϱ̂(λ).
pub trait RhoCurve {
    fn estimate(&self, lambda: f64) -> Result<RhoEstimate>;

    fn mean(&self, lambda: f64) -> Result<f64> {
        Ok(self.estimate(lambda)?.mean)
    }
}

/// Mean of exact maximum densities over independent G(n, λ/n) samples.
///
/// Trial `t` always uses stream `t` of `seed`, whatever λ is. Because the
/// sampler draws one uniform per pair, graphs at different λ with the same
/// trial index are nested, so the estimated curve is nondecreasing in λ.
pub fn estimate_rho<R: TrialRunner>(
    lambda: f64,
    n: usize,
    trials: usize,
    seed: RngSeed,
    runner: &R,
) -> Result<RhoEstimate> {
    if !(lambda > 0.0) {
        return Err(Error::param("lambda must be positive"));
    }
    if n < 2 {
        return Err(Error::param("need at least two vertices"));
    }
    if trials == 0 {
        return Err(Error::param("need at least one trial"));
    }
    let q = lambda / n as f64;
    if q > 1.0 {
        return Err(Error::param(alloc::format!(
            "lambda / n = {q} exceeds one"
        )));
    }
    let results = runner.run(trials, |t| {
        let g = sample_er(n, q, seed.stream(t as u64)).expect("q validated");
        let best = densest_exact(&g).expect("n >= 2");
        (best.density.to_f64(), best.subset.len())
    });
    let samples: Vec<f64> = results.iter().map(|r| r.0).collect();
    let sizes = results.iter().map(|r| r.1).collect();
    let (mean, stderr) = mean_stderr(&samples);
    Ok(RhoEstimate {
        lambda,
        n,
        trials,
        mean,
        stderr,
        samples,
        sizes,
    })
}

/// [`estimate_rho`] bound to fixed `(n, trials, seed)` and a runner.
pub struct MonteCarloRho<'r, R> {
    pub n: usize,
    pub trials: usize,
    pub seed: RngSeed,
    pub runner: &'r R,
}

impl<'r, R: TrialRunner> MonteCarloRho<'r, R> {
    pub fn new(n: usize, trials: usize, seed: RngSeed, runner: &'r R) -> Self {
        MonteCarloRho {
            n,
            trials,
            seed,
            runner,
        }
    }
}

impl<R: TrialRunner> RhoCurve for MonteCarloRho<'_, R> {
    fn estimate(&self, lambda: f64) -> Result<RhoEstimate> {
        estimate_rho(lambda, self.n, self.trials, self.seed, self.runner)
    }
}

/// Deterministic curve given by a closure, reported with zero error.
pub struct FnCurve<F>(pub F);

impl<F: Fn(f64) -> f64> RhoCurve for FnCurve<F> {
    fn estimate(&self, lambda: f64) -> Result<RhoEstimate> {
        let mean = (self.0)(lambda);
        Ok(RhoEstimate {
            lambda,
            n: 0,
            trials: 0,
            mean,
            stderr: 0.0,
            samples: Vec::new(),
            sizes: Vec::new(),
        })
    }
}

/// Solves ϱ̂(λ) = `target` for λ by bisection.
///
/// `target == 1` returns exactly 1. Otherwise the bracket starts at `[1, 2]`
/// and doubles its upper end until ϱ̂ reaches `target`, giving up beyond
/// `2 · target · max(2, target)`; bisection then halts once the bracket is no
/// wider than `tol` and returns its midpoint.
pub fn invert_rho<C: RhoCurve + ?Sized>(curve: &C, target: f64, tol: f64) -> Result<f64> {
    if !(target >= 1.0) {
        return Err(Error::param("target density must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tolerance must be positive"));
    }
    if target == 1.0 {
        return Ok(1.0);
    }
    let limit = 2.0 * target * target.max(2.0);
    let mut lo = 1.0;
    let mut hi: f64 = 2.0;
    loop {
        if curve.mean(hi)? >= target {
            break;
        }
        if hi >= limit {
            return Err(Error::Bracketing { target, limit });
        }
        lo = hi;
        hi = (hi * 2.0).min(limit);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if curve.mean(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
