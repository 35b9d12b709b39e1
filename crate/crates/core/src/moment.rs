//! Embedding-count bounds on admissible graphs and the truncated second
//! moment terms built from them.

use alloc::vec::Vec;

use crate::admissibility::{check_admissible, AdmissibilityReport};
use crate::embedding::{count_embeddings, non_tree_classes, tree_classes, CLASS_CAP};
use crate::graph::Graph;
use crate::{Error, Result};

pub const DEFAULT_C_PRIME: f64 = 0.01;

/// Total labeled embeddings of all tree classes on `k` vertices.
pub fn tree_embedding_total(h: &Graph, k: usize) -> Result<u64> {
    let mut total = 0;
    for t in tree_classes(k)? {
        total += count_embeddings(&t, h)?.labeled;
    }
    Ok(total)
}

/// Total labeled embeddings of all connected non-tree classes on `k` vertices.
pub fn non_tree_embedding_total(h: &Graph, k: usize) -> Result<u64> {
    let mut total = 0;
    for c in non_tree_classes(k)? {
        total += count_embeddings(&c, h)?.labeled;
    }
    Ok(total)
}

/// `n (4 ln n)^(2(k−1))`.
pub fn tree_bound(n: usize, k: usize) -> f64 {
    let n = n as f64;
    n * libm::pow(4.0 * libm::log(n), 2.0 * (k as f64 - 1.0))
}

/// `k³ (2^(ξ+1) n^δ)^k`.
pub fn non_tree_bound(n: usize, k: usize, xi: f64, delta: f64) -> f64 {
    let k = k as f64;
    k * k * k * libm::pow(libm::pow(2.0, xi + 1.0) * libm::pow(n as f64, delta), k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingBounds {
    pub k: usize,
    pub tree_total: u64,
    pub tree_bound: f64,
    pub non_tree_total: u64,
    pub non_tree_bound: f64,
}

impl EmbeddingBounds {
    pub fn holds(&self) -> bool {
        self.tree_total as f64 <= self.tree_bound && self.non_tree_total as f64 <= self.non_tree_bound
    }
}

fn refuse_inadmissible(report: &AdmissibilityReport) -> Result<()> {
    if report.is_admissible() {
        return Ok(());
    }
    Err(Error::Precondition(alloc::format!(
        "host is not admissible (i: {}, ii: {}, iii: {}, iv: {})",
        report.pass_i,
        report.pass_ii,
        report.pass_iii,
        report.pass_iv
    )))
}

/// Tree and non-tree embedding totals on `k` vertices (2 ≤ k ≤ 6) against
/// their bounds, for a host admissible under `(xi, delta, cycle_cap)`.
pub fn embedding_bounds_check(
    h: &Graph,
    k: usize,
    xi: f64,
    delta: f64,
    cycle_cap: usize,
) -> Result<EmbeddingBounds> {
    if !(2..=CLASS_CAP).contains(&k) {
        return Err(Error::param(alloc::format!("k = {k} outside 2..={CLASS_CAP}")));
    }
    refuse_inadmissible(&check_admissible(h, xi, delta, cycle_cap)?)?;
    Ok(EmbeddingBounds {
        k,
        tree_total: tree_embedding_total(h, k)?,
        tree_bound: tree_bound(h.n(), k),
        non_tree_total: non_tree_embedding_total(h, k)?,
        non_tree_bound: non_tree_bound(h.n(), k, xi, delta),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentParams {
    pub p: f64,
    pub xi: f64,
    pub c_prime: f64,
    pub k_max: usize,
    pub delta: f64,
    pub cycle_cap: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentTerms {
    pub non_tree_sum: f64,
    pub tree_sum: f64,
    /// `(k, non-tree term, tree term)` for each pattern size.
    pub per_size: Vec<(usize, f64, f64)>,
    /// `ln(n p^ξ) / ln n`.
    pub delta0: f64,
}

/// `ln(n p^ξ) / ln n`.
pub fn delta0(n: usize, p: f64, xi: f64) -> f64 {
    let n = n as f64;
    (libm::log(n) + xi * libm::log(p)) / libm::log(n)
}

/// `Σ_C Aut(C) t(C, h) / (c′ n p^ξ)^|C|` over connected non-tree classes and
/// `Σ_T p Aut(T) t(T, h) / (c′ n p)^|T|` over tree classes, for pattern sizes
/// `2..=k_max` (at most 6) counted in vertices.
///
/// Refuses unless `n p^ξ > 1`, `δ < δ₀` and `h` is admissible.
pub fn truncated_moment_terms(h: &Graph, params: &MomentParams) -> Result<MomentTerms> {
    let MomentParams {
        p,
        xi,
        c_prime,
        k_max,
        delta,
        cycle_cap,
    } = *params;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param("p must lie in (0, 1)"));
    }
    if !(c_prime > 0.0) {
        return Err(Error::param("c' must be positive"));
    }
    if !(2..=CLASS_CAP).contains(&k_max) {
        return Err(Error::param(alloc::format!(
            "k_max = {k_max} outside 2..={CLASS_CAP}"
        )));
    }
    let n = h.n();
    let nf = n as f64;
    let scale = nf * libm::pow(p, xi);
    if !(scale > 1.0) {
        return Err(Error::Precondition(alloc::format!(
            "n p^xi = {scale} must exceed 1"
        )));
    }
    let d0 = delta0(n, p, xi);
    if !(delta < d0) {
        return Err(Error::Precondition(alloc::format!(
            "delta = {delta} must be below delta0 = {d0}"
        )));
    }
    refuse_inadmissible(&check_admissible(h, xi, delta, cycle_cap)?)?;
    let mut per_size = Vec::new();
    let (mut non_tree_sum, mut tree_sum) = (0.0, 0.0);
    for k in 2..=k_max {
        let kf = k as f64;
        let c = non_tree_embedding_total(h, k)? as f64 / libm::pow(c_prime * scale, kf);
        let t = p * tree_embedding_total(h, k)? as f64 / libm::pow(c_prime * nf * p, kf);
        non_tree_sum += c;
        tree_sum += t;
        per_size.push((k, c, t));
    }
    Ok(MomentTerms {
        non_tree_sum,
        tree_sum,
        per_size,
        delta0: d0,
    })
}
