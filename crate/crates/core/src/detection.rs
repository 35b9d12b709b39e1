//! The densest-subgraph test statistic and its thresholds.
//!
//! The statistic maximises, over bijections `π` and subsets `U` with
//! `|U| ≥ n / ln n`, the density of `U` in the π-intersection graph. Only the
//! planted bijection (or a fixed one) is tractable at realistic `n`; the full
//! maximisation is available for `n ≤ 8`. The null side of the test is
//! certified by [`h0_union_bound`].

use alloc::vec::Vec;

use crate::chernoff::ln_chernoff_tail;
use crate::density::{
    densest_bruteforce_constrained, densest_exact, peel_with_floor, DensestResult, DensityValue,
    BRUTE_FORCE_CAP,
};
use crate::graph::{intersection_graph, Bijection, CorrelatedPair, Graph};
use crate::rho::{invert_rho, RhoCurve};
use crate::stats::{ln_binomial, ln_factorial, log_add_exp};
use crate::{Error, Result};

/// Largest `n` for the maximisation over all bijections.
pub const BIJECTION_CAP: usize = 8;

/// `ceil(n / ln n)` with the natural logarithm, `n >= 3`.
pub fn size_floor(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::param("size floor needs n >= 3"));
    }
    let x = n as f64 / libm::log(n as f64);
    Ok(libm::ceil(x) as usize)
}

/// Densest subset of size at least `floor`.
///
/// If the unconstrained maximum-cardinality optimum already meets the floor it
/// is returned (exact). Otherwise `n ≤ 20` is solved by enumeration (exact)
/// and larger graphs fall back to the best peeling prefix of size at least
/// `floor` (`exact = false`).
pub fn constrained_densest(g: &Graph, floor: usize) -> Result<DensestResult> {
    if floor == 0 || floor > g.n() {
        return Err(Error::param(alloc::format!(
            "floor {floor} must lie in 1..={}",
            g.n()
        )));
    }
    let best = densest_exact(g)?;
    if best.subset.len() >= floor {
        return Ok(best);
    }
    if g.n() <= BRUTE_FORCE_CAP {
        return densest_bruteforce_constrained(g, floor);
    }
    peel_with_floor(g, floor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    H0,
    H1,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::H0 => "H0",
            Decision::H1 => "H1",
        }
    }
}

/// How the maximisation over bijections was carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatisticMode {
    /// The planted bijection only (a lower bound on the statistic).
    Planted,
    /// Every bijection.
    Bruteforce,
    /// One fixed bijection other than the planted one, e.g. the identity.
    Heuristic,
}

impl StatisticMode {
    pub fn as_str(self) -> &'static str {
        match self {
            StatisticMode::Planted => "planted",
            StatisticMode::Bruteforce => "bruteforce",
            StatisticMode::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionOutcome {
    pub statistic: f64,
    pub density: DensityValue,
    pub decision: Decision,
    pub mode: StatisticMode,
    /// Set when the size-constrained optimum came from the peeling fallback.
    pub approximate: bool,
}

fn decide(best: &DensestResult, tau: f64, mode: StatisticMode) -> DetectionOutcome {
    let statistic = best.density.to_f64();
    let decision = if best.density.cmp_f64(tau).is_ge() {
        Decision::H1
    } else {
        Decision::H0
    };
    DetectionOutcome {
        statistic,
        density: best.density,
        decision,
        mode,
        approximate: !best.exact,
    }
}

/// Constrained density of the π-intersection graph for one given `π`.
pub fn statistic_for_bijection(
    g: &Graph,
    g2: &Graph,
    pi: &Bijection,
    floor: usize,
    tau: f64,
    mode: StatisticMode,
) -> Result<DetectionOutcome> {
    let h = intersection_graph(g, g2, pi)?;
    Ok(decide(&constrained_densest(&h, floor)?, tau, mode))
}

/// Statistic restricted to the planted bijection π*.
pub fn statistic_planted(pair: &CorrelatedPair, floor: usize, tau: f64) -> Result<DetectionOutcome> {
    statistic_for_bijection(
        &pair.g,
        &pair.g2,
        &pair.pi_star,
        floor,
        tau,
        StatisticMode::Planted,
    )
}

/// Statistic restricted to the identity bijection.
pub fn statistic_identity(g: &Graph, g2: &Graph, floor: usize, tau: f64) -> Result<DetectionOutcome> {
    statistic_for_bijection(
        g,
        g2,
        &Bijection::identity(g.n()),
        floor,
        tau,
        StatisticMode::Heuristic,
    )
}

/// Full statistic: maximum over all `n!` bijections, `n ≤ 8`.
pub fn statistic_bruteforce(g: &Graph, g2: &Graph, floor: usize, tau: f64) -> Result<DetectionOutcome> {
    let n = g.n();
    if n > BIJECTION_CAP {
        return Err(Error::TooLarge {
            what: "maximisation over bijections",
            size: n,
            cap: BIJECTION_CAP,
        });
    }
    if g2.n() != n {
        return Err(Error::param("graphs differ in vertex count"));
    }
    let mut best: Option<DensestResult> = None;
    let mut failure = None;
    Bijection::for_each_permutation(n, |pi| {
        if failure.is_some() {
            return;
        }
        let h = intersection_graph(g, g2, pi).expect("sizes checked");
        match constrained_densest(&h, floor) {
            Ok(r) => {
                if best.as_ref().is_none_or(|b| r.density > b.density) {
                    best = Some(r);
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let best = best.ok_or_else(|| Error::param("graph has no vertices"))?;
    Ok(decide(&best, tau, StatisticMode::Bruteforce))
}

/// Threshold quantities derived from a ϱ̂ curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    pub alpha: f64,
    pub epsilon: f64,
    /// λ̂* = ϱ̂⁻¹(1/α).
    pub lambda_star: f64,
    /// ϱ̂(λ̂*) and its standard error.
    pub rho_star: (f64, f64),
    /// ϱ̂(λ̂* + ε) and its standard error.
    pub rho_plus: (f64, f64),
    /// ϱ̂(λ̂* − ε) and its standard error, when λ̂* − ε > 0.
    pub rho_minus: Option<(f64, f64)>,
    /// Midpoint of ϱ̂(λ̂*) and ϱ̂(λ̂* + ε).
    pub tau: f64,
    /// Midpoint of ϱ̂(λ̂* − ε) and ϱ̂(λ̂*), the density cap for admissibility.
    pub xi: Option<f64>,
}

/// Computes λ̂*, τ and ξ for sparsity exponent `alpha` and margin `epsilon`.
pub fn threshold_tau<C: RhoCurve + ?Sized>(
    alpha: f64,
    epsilon: f64,
    curve: &C,
    tol: f64,
) -> Result<Threshold> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param("alpha must lie in (0, 1]"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::param("epsilon must be positive"));
    }
    let lambda_star = invert_rho(curve, 1.0 / alpha, tol)?;
    let at = |l: f64| curve.estimate(l).map(|e| (e.mean, e.stderr));
    let rho_star = at(lambda_star)?;
    let rho_plus = at(lambda_star + epsilon)?;
    let rho_minus = if lambda_star - epsilon > 0.0 {
        Some(at(lambda_star - epsilon)?)
    } else {
        None
    };
    Ok(Threshold {
        alpha,
        epsilon,
        lambda_star,
        rho_star,
        rho_plus,
        rho_minus,
        tau: 0.5 * (rho_star.0 + rho_plus.0),
        xi: rho_minus.map(|m| 0.5 * (m.0 + rho_star.0)),
    })
}

/// Parameters of one detection experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionConfig {
    pub n: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub p: f64,
    pub s: f64,
    pub size_floor: usize,
    pub tau: f64,
}

impl DetectionConfig {
    /// `p = n^(−α)` and `s = sqrt(λ / (n p))` with `λ = λ̂* + ε`.
    pub fn from_threshold(n: usize, threshold: &Threshold) -> Result<Self> {
        let p = libm::pow(n as f64, -threshold.alpha);
        let lambda = threshold.lambda_star + threshold.epsilon;
        let s = libm::sqrt(lambda / (n as f64 * p));
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::param(alloc::format!(
                "lambda {lambda} needs s = {s} outside (0, 1]"
            )));
        }
        Ok(DetectionConfig {
            n,
            alpha: threshold.alpha,
            epsilon: threshold.epsilon,
            p,
            s,
            size_floor: size_floor(n)?,
            tau: threshold.tau,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.n as f64 * self.p * self.s * self.s
    }
}

/// One summand of the null union bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnionBoundTerm {
    pub k: usize,
    /// `ln[C(n,k)² k! · Chernoff(C(k,2)(ps)², τk)]`.
    pub log_value: f64,
    /// `false` when `τk ≤ μ`; the tail factor is then replaced by 1.
    pub chernoff_applicable: bool,
}

/// Log of the `k`-th term of the union bound on the probability that two
/// independent G(n, ps) graphs have a bijection and a `k`-subset of density at
/// least `τ` in the intersection.
pub fn h0_union_bound_term(n: usize, k: usize, ps: f64, tau: f64) -> Result<UnionBoundTerm> {
    if k == 0 || k > n {
        return Err(Error::param("k must lie in 1..=n"));
    }
    if !(ps > 0.0 && ps < 1.0) {
        return Err(Error::param("ps must lie in (0, 1)"));
    }
    if !(tau > 0.0) {
        return Err(Error::param("tau must be positive"));
    }
    let count = 2.0 * ln_binomial(n as u64, k as u64) + ln_factorial(k as u64);
    let mu = (k as f64) * (k as f64 - 1.0) / 2.0 * ps * ps;
    let threshold = tau * k as f64;
    if mu == 0.0 {
        // No pairs inside a single vertex: the event is impossible.
        return Ok(UnionBoundTerm {
            k,
            log_value: f64::NEG_INFINITY,
            chernoff_applicable: true,
        });
    }
    if threshold <= mu {
        return Ok(UnionBoundTerm {
            k,
            log_value: count,
            chernoff_applicable: false,
        });
    }
    let tail = ln_chernoff_tail(mu, threshold / mu - 1.0)?;
    Ok(UnionBoundTerm {
        k,
        log_value: count + tail,
        chernoff_applicable: true,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnionBound {
    pub log_total: f64,
    pub total: f64,
    pub terms: Vec<UnionBoundTerm>,
}

impl UnionBound {
    pub fn any_inapplicable(&self) -> bool {
        self.terms.iter().any(|t| !t.chernoff_applicable)
    }
}

/// Sum of [`h0_union_bound_term`] over `k` from the size floor to `n`.
pub fn h0_union_bound(n: usize, ps: f64, tau: f64) -> Result<UnionBound> {
    let floor = size_floor(n)?;
    let mut log_total = f64::NEG_INFINITY;
    let mut terms = Vec::with_capacity(n - floor + 1);
    for k in floor..=n {
        let term = h0_union_bound_term(n, k, ps, tau)?;
        log_total = log_add_exp(log_total, term.log_value);
        terms.push(term);
    }
    Ok(UnionBound {
        log_total,
        total: libm::exp(log_total),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_correlated_pair;
    use crate::rho::FnCurve;
    use crate::rng::RngSeed;
    use alloc::vec;

    #[test]
    fn floor_values() {
        assert_eq!(size_floor(3).unwrap(), 3);
        assert_eq!(size_floor(100).unwrap(), 22);
        assert!(size_floor(2).is_err());
        let mut last = 0;
        for n in 10..10_000 {
            let f = size_floor(n).unwrap();
            assert!(f >= last);
            last = f;
        }
    }

    #[test]
    fn constrained_examples() {
        let r = constrained_densest(&Graph::complete(4), 1).unwrap();
        assert_eq!((r.density.num, r.density.den), (6, 4));
        assert!(r.exact);
        let g = Graph::from_edges(16, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let r = constrained_densest(&g, 10).unwrap();
        assert_eq!((r.density.num, r.density.den), (6, 10));
        assert!(r.exact);
        assert!(constrained_densest(&g, 17).is_err());
        assert!(constrained_densest(&g, 0).is_err());
    }

    #[test]
    fn constrained_fallback_is_flagged() {
        // 30 vertices: a K5 plus isolated vertices, floor 20 forces the peel.
        let mut e = vec![];
        for u in 0..5 {
            for v in u + 1..5 {
                e.push((u, v));
            }
        }
        let g = Graph::from_edges(30, e).unwrap();
        let r = constrained_densest(&g, 20).unwrap();
        assert!(!r.exact);
        assert!(r.subset.len() >= 20);
        assert_eq!((r.density.num, r.density.den), (10, 20));
    }

    #[test]
    fn planted_extremes() {
        let pair = sample_correlated_pair(6, 1.0, 1.0, RngSeed::new(4)).unwrap();
        let out = statistic_planted(&pair, 1, 2.0).unwrap();
        assert_eq!(out.statistic, 2.5);
        assert_eq!(out.decision, Decision::H1);
        let pair = sample_correlated_pair(6, 0.5, 0.0, RngSeed::new(4)).unwrap();
        let out = statistic_planted(&pair, 3, 0.1).unwrap();
        assert_eq!(out.statistic, 0.0);
        assert_eq!(out.density.den, 6);
        assert_eq!(out.decision, Decision::H0);
    }

    #[test]
    fn bruteforce_examples() {
        let tri_plus = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let out = statistic_bruteforce(&tri_plus, &tri_plus, 1, 1.0).unwrap();
        assert_eq!(out.statistic, 1.0);
        assert_eq!(out.decision, Decision::H1);
        let out = statistic_bruteforce(&Graph::complete(4), &Graph::empty(4), 1, 1.0).unwrap();
        assert_eq!(out.statistic, 0.0);
        let out = statistic_bruteforce(&Graph::cycle(4), &Graph::path(4), 1, 1.0).unwrap();
        assert_eq!((out.density.num, out.density.den), (3, 4));
        assert_eq!(out.decision, Decision::H0);
        assert!(statistic_bruteforce(&Graph::empty(9), &Graph::empty(9), 1, 1.0).is_err());
    }

    #[test]
    fn threshold_with_analytic_curve() {
        // ϱ(λ) = max(1, λ/2): λ* = 2/α for α ≤ 1/2.
        let curve = FnCurve(|l: f64| if l <= 2.0 { 1.0 } else { l / 2.0 });
        let t = threshold_tau(0.5, 1.0, &curve, 1e-9).unwrap();
        assert!((t.lambda_star - 4.0).abs() < 1e-8);
        assert!((t.tau - 2.25).abs() < 1e-8);
        assert!((t.xi.unwrap() - 1.75).abs() < 1e-8);
        let t = threshold_tau(1.0, 0.5, &curve, 1e-9).unwrap();
        assert_eq!(t.lambda_star, 1.0);
        assert!(threshold_tau(0.0, 1.0, &curve, 1e-3).is_err());
        assert!(threshold_tau(0.5, 0.0, &curve, 1e-3).is_err());
    }

    #[test]
    fn union_term_edge_cases() {
        // μ ≥ τk: bound inapplicable, tail factor one.
        let t = h0_union_bound_term(100, 50, 0.9, 0.5).unwrap();
        assert!(!t.chernoff_applicable);
        let expect = 2.0 * ln_binomial(100, 50) + ln_factorial(50);
        assert!((t.log_value - expect).abs() < 1e-9);
        assert!(h0_union_bound_term(100, 0, 0.1, 1.0).is_err());
        assert!(h0_union_bound_term(100, 10, 1.0, 1.0).is_err());
        let mut last = f64::INFINITY;
        for i in 1..30 {
            let t = h0_union_bound_term(500, 40, 0.01, 0.5 + 0.1 * i as f64).unwrap();
            assert!(t.log_value < last);
            last = t.log_value;
        }
    }
}
