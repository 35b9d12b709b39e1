//! Per-pair likelihood kernel, the full likelihood ratio for small `n`, and
//! exact total variation by enumeration.

use alloc::vec::Vec;

use crate::graph::{intersection_graph, pair_count, Bijection, Graph, Vertex};
use crate::stats::{ln_factorial, log_add_exp, CompensatedSum};
use crate::{Error, Result};

/// Largest `n` for the average over all bijections.
pub const LIKELIHOOD_CAP: usize = 8;
/// Largest `n` for total variation by enumeration.
pub const TV_CAP: usize = 4;

fn check_open(p: f64, s: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param(alloc::format!("p = {p} must lie in (0, 1)")));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::param(alloc::format!("s = {s} must lie in (0, 1)")));
    }
    Ok(())
}

/// `ℓ(x, y)`: ratio of the correlated to the independent probability of the
/// edge pair `(G_e, 𝖦_{π(e)}) = (x, y)`.
pub fn ell(x: bool, y: bool, p: f64, s: f64) -> Result<f64> {
    check_open(p, s)?;
    let ps = p * s;
    Ok(match (x, y) {
        (false, false) => (1.0 - 2.0 * ps + ps * s) / ((1.0 - ps) * (1.0 - ps)),
        (true, true) => 1.0 / p,
        _ => (1.0 - s) / (1.0 - ps),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodKernel {
    pub p: f64,
    pub s: f64,
    pub ell00: f64,
    pub ell01: f64,
    pub ell11: f64,
    /// `m[x][y] = ℓ(x, y) · P[𝖦_e = y]`.
    pub m: [[f64; 2]; 2],
    /// `s(1 − p) / (1 − ps)`.
    pub rho: f64,
    /// Eigenvalues of `m` from its characteristic polynomial, larger first.
    pub eigenvalues: (f64, f64),
}

impl LikelihoodKernel {
    pub fn ell(&self, x: bool, y: bool) -> f64 {
        match (x, y) {
            (false, false) => self.ell00,
            (true, true) => self.ell11,
            _ => self.ell01,
        }
    }

    pub fn row_sums(&self) -> [f64; 2] {
        [self.m[0][0] + self.m[0][1], self.m[1][0] + self.m[1][1]]
    }
}

fn eigenvalues_2x2(m: &[[f64; 2]; 2]) -> (f64, f64) {
    let trace = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = libm::sqrt((trace * trace - 4.0 * det).max(0.0));
    // Larger root directly, smaller one through the product to avoid
    // cancellation.
    let big = if trace >= 0.0 {
        0.5 * (trace + disc)
    } else {
        0.5 * (trace - disc)
    };
    let small = if big != 0.0 { det / big } else { 0.0 };
    if big >= small {
        (big, small)
    } else {
        (small, big)
    }
}

pub fn kernel(p: f64, s: f64) -> Result<LikelihoodKernel> {
    check_open(p, s)?;
    let ell00 = ell(false, false, p, s)?;
    let ell01 = ell(false, true, p, s)?;
    let ell11 = ell(true, true, p, s)?;
    let ps = p * s;
    let m = [[ell00 * (1.0 - ps), ell01 * ps], [ell01 * (1.0 - ps), ell11 * ps]];
    let k = LikelihoodKernel {
        p,
        s,
        ell00,
        ell01,
        ell11,
        m,
        rho: s * (1.0 - p) / (1.0 - ps),
        eigenvalues: eigenvalues_2x2(&m),
    };
    debug_assert!(k.row_sums().iter().all(|r| (r - 1.0).abs() < 1e-9));
    Ok(k)
}

/// Counts of pairs `e` by `(G_e, 𝖦_{π(e)})`: `[n00, n01, n10, n11]`.
pub fn pair_counts(g: &Graph, g2: &Graph, pi: &Bijection) -> Result<[u64; 4]> {
    let n11 = intersection_graph(g, g2, pi)?.edge_count() as u64;
    let n10 = g.edge_count() as u64 - n11;
    let n01 = g2.edge_count() as u64 - n11;
    let n00 = pair_count(g.n()) - n11 - n10 - n01;
    Ok([n00, n01, n10, n11])
}

/// `ln Π_e ℓ(G_e, 𝖦_{π(e)})` over all pairs `e` of the first vertex set.
pub fn pair_loglikelihood(g: &Graph, g2: &Graph, pi: &Bijection, p: f64, s: f64) -> Result<f64> {
    let k = kernel(p, s)?;
    let [n00, n01, n10, n11] = pair_counts(g, g2, pi)?;
    Ok(n00 as f64 * libm::log(k.ell00)
        + (n01 + n10) as f64 * libm::log(k.ell01)
        + n11 as f64 * libm::log(k.ell11))
}

fn check_pair(g: &Graph, g2: &Graph, cap: usize, what: &'static str) -> Result<()> {
    if g.n() != g2.n() {
        return Err(Error::param("graphs differ in vertex count"));
    }
    if g.n() > cap {
        return Err(Error::TooLarge {
            what,
            size: g.n(),
            cap,
        });
    }
    Ok(())
}

/// `ln L(G, 𝖦)`, the logarithm of the average of the pair likelihoods over
/// all `n!` bijections.
pub fn log_likelihood_ratio(g: &Graph, g2: &Graph, p: f64, s: f64) -> Result<f64> {
    check_pair(g, g2, LIKELIHOOD_CAP, "likelihood ratio")?;
    let k = kernel(p, s)?;
    let logs = [
        libm::log(k.ell00),
        libm::log(k.ell01),
        libm::log(k.ell11),
    ];
    let mut acc = f64::NEG_INFINITY;
    Bijection::for_each_permutation(g.n(), |pi| {
        let [n00, n01, n10, n11] = pair_counts(g, g2, pi).expect("sizes checked");
        let term =
            n00 as f64 * logs[0] + (n01 + n10) as f64 * logs[1] + n11 as f64 * logs[2];
        acc = log_add_exp(acc, term);
    });
    Ok(acc - ln_factorial(g.n() as u64))
}

/// `L(G, 𝖦)` for `n ≤ 8`.
pub fn likelihood_ratio(g: &Graph, g2: &Graph, p: f64, s: f64) -> Result<f64> {
    Ok(libm::exp(log_likelihood_ratio(g, g2, p, s)?))
}

/// Probability of `(G, 𝖦)` when both are independent G(n, ps).
pub fn null_probability(g: &Graph, g2: &Graph, p: f64, s: f64) -> f64 {
    let q = p * s;
    let total = pair_count(g.n()) as i32;
    let m = (g.edge_count() + g2.edge_count()) as i32;
    libm::pow(q, m as f64) * libm::pow(1.0 - q, (2 * total - m) as f64)
}

/// Joint law of one pair `(G_e, 𝖦_{π*(e)})` under the subsampling rule:
/// `[q00, q01, q10, q11]`.
pub fn joint_pair_law(p: f64, s: f64) -> [f64; 4] {
    let ps = p * s;
    let q11 = ps * s;
    let q10 = ps * (1.0 - s);
    [1.0 - 2.0 * ps + q11, q10, q10, q11]
}

fn ipow(x: f64, k: u64) -> f64 {
    libm::pow(x, k as f64)
}

/// Probability of `(G, 𝖦)` under the correlated model, averaging the
/// planted law over all `n!` bijections (`n ≤ 8`).
pub fn alternative_probability(g: &Graph, g2: &Graph, p: f64, s: f64) -> Result<f64> {
    check_pair(g, g2, LIKELIHOOD_CAP, "correlated probability")?;
    let law = joint_pair_law(p, s);
    let mut acc = CompensatedSum::default();
    let mut count = 0u64;
    Bijection::for_each_permutation(g.n(), |pi| {
        let c = pair_counts(g, g2, pi).expect("sizes checked");
        acc.add(ipow(law[0], c[0]) * ipow(law[1], c[1]) * ipow(law[2], c[2]) * ipow(law[3], c[3]));
        count += 1;
    });
    Ok(acc.value() / count as f64)
}

/// Every graph on `n ≤ 5` vertices, indexed by the bitmask of its pairs in
/// lexicographic order.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > 5 {
        return Err(Error::TooLarge {
            what: "graph enumeration",
            size: n,
            cap: 5,
        });
    }
    let pairs = pairs_of(n);
    Ok((0u32..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<(Vertex, Vertex)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::from_edges(n, edges).expect("valid pairs")
        })
        .collect())
}

fn pairs_of(n: usize) -> Vec<(Vertex, Vertex)> {
    let mut pairs = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            pairs.push((u, v));
        }
    }
    pairs
}

/// Total variation between the null and the correlated law by enumerating
/// all graph pairs on `n ≤ 4` vertices. Accepts `p ∈ (0, 1]`, `s ∈ [0, 1]`.
pub fn exact_tv(n: usize, p: f64, s: f64) -> Result<f64> {
    if n > TV_CAP {
        return Err(Error::TooLarge {
            what: "exact total variation",
            size: n,
            cap: TV_CAP,
        });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param(alloc::format!("p = {p} must lie in (0, 1]")));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::param(alloc::format!("s = {s} must lie in [0, 1]")));
    }
    let pairs = pairs_of(n);
    let slots = pairs.len();
    let index = |u: Vertex, v: Vertex| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        pairs.iter().position(|&e| e == (a, b)).expect("valid pair")
    };
    // For every bijection, the slot permutation e ↦ π(e).
    let mut slot_maps: Vec<Vec<usize>> = Vec::new();
    Bijection::for_each_permutation(n, |pi| {
        slot_maps.push(
            pairs
                .iter()
                .map(|&(u, v)| index(pi.apply(u), pi.apply(v)))
                .collect(),
        );
    });
    let law = joint_pair_law(p, s);
    let q = p * s;
    let graphs = 1u32 << slots;
    let mut tv = CompensatedSum::default();
    for a in 0..graphs {
        for b in 0..graphs {
            let m = (a.count_ones() + b.count_ones()) as u64;
            let null = ipow(q, m) * ipow(1.0 - q, 2 * slots as u64 - m);
            let mut alt = CompensatedSum::default();
            for map in &slot_maps {
                let mut c = [0u64; 4];
                for (e, &image) in map.iter().enumerate() {
                    let x = (a >> e & 1) as usize;
                    let y = (b >> image & 1) as usize;
                    c[x * 2 + y] += 1;
                }
                alt.add(
                    ipow(law[0], c[0]) * ipow(law[1], c[1]) * ipow(law[2], c[2]) * ipow(law[3], c[3]),
                );
            }
            let alt = alt.value() / slot_maps.len() as f64;
            tv.add(libm::fabs(null - alt));
        }
    }
    Ok(0.5 * tv.value())
}
