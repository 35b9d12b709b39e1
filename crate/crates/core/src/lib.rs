//! Densest-subgraph based detection of edge correlation between two
//! Erdős–Rényi graphs.
//!
//! The crate is `no_std` and only needs an allocator. It covers:
//!
//! * [`graph`]: graphs, bijections, the G(n, q) and correlated-pair samplers,
//!   and π-intersection graphs.
//! * [`density`] and [`flow`]: exact maximum-density subgraphs (max-flow with
//!   binary search over candidate densities), brute force, greedy peeling and
//!   k-cores.
//! * [`rho`]: Monte Carlo estimation and inversion of the limiting densest
//!   subgraph density ϱ(λ) of G(n, λ/n).
//! * [`detection`]: the test statistic, its thresholds and the union bound on
//!   the false-alarm probability.
//! * [`likelihood`] and [`orbit`]: the per-pair likelihood kernel, the full
//!   likelihood ratio, edge orbits of pair permutations and exact total
//!   variation at tiny n.
//! * [`admissibility`], [`embedding`], [`moment`]: truncation conditions on the
//!   intersection graph, subgraph embedding counts and the truncated moment
//!   terms.
//!
//! Monte Carlo loops are expressed through [`runner::TrialRunner`] so that a
//! std crate can supply a parallel executor without changing results.
#![no_std]
// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod admissibility;
pub mod chernoff;
pub mod density;
pub mod detection;
pub mod embedding;
mod error;
pub mod flow;
pub mod graph;
pub mod likelihood;
pub mod moment;
pub mod orbit;
pub mod rho;
pub mod rng;
pub mod runner;
pub mod stats;

pub use error::{Error, Result};
