//! Multiplicative Chernoff bound for binomial upper tails.

use crate::{Error, Result};

/// `ln` of the bound `P[X ≥ (1+δ)μ] ≤ exp(−μ[(1+δ)ln(1+δ) − δ])`.
pub fn ln_chernoff_tail(mu: f64, delta: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::param("mean must be positive"));
    }
    if !(delta >= 0.0) {
        return Err(Error::param("relative deviation must be nonnegative"));
    }
    Ok(-mu * ((1.0 + delta) * libm::log1p(delta) - delta))
}

/// The bound itself, a value in `(0, 1]` (it underflows to 0 for extreme
/// deviations; use [`ln_chernoff_tail`] there).
pub fn chernoff_tail(mu: f64, delta: f64) -> Result<f64> {
    Ok(libm::exp(ln_chernoff_tail(mu, delta)?))
}
