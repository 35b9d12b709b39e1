//! Edge orbits of the pair permutation induced by a vertex permutation.
//!
//! A permutation `σ` of `0..n` acts on unordered pairs by
//! `Σ((u, v)) = (σ(u), σ(v))`; its cycles on pairs are the edge orbits. In the
//! correlated model `σ = π⁻¹ ∘ π*` for a candidate bijection `π`.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{canonical, pair_count, Bijection, Graph, Vertex};
use crate::likelihood::kernel;
use crate::{Error, Result};

pub type Pair = (Vertex, Vertex);

/// `σ = π⁻¹ ∘ π*`.
pub fn sigma_of(pi: &Bijection, pi_star: &Bijection) -> Bijection {
    pi.inverse().compose(pi_star)
}

/// `π = π* ∘ σ⁻¹`, the bijection whose `σ` is the given one.
pub fn pi_of(sigma: &Bijection, pi_star: &Bijection) -> Bijection {
    pi_star.compose(&sigma.inverse())
}

/// `Σ((u, v))`.
pub fn apply_pair(sigma: &Bijection, (u, v): Pair) -> Pair {
    canonical(sigma.apply(u), sigma.apply(v))
}

fn pair_index(n: usize, (u, v): Pair) -> usize {
    let (u, v) = (u as usize, v as usize);
    // Pairs with first coordinate below u come first.
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub sigma: Bijection,
    /// Each orbit lists `e, Σ(e), Σ²(e), …` starting from its
    /// lexicographically smallest pair; orbits are ordered by that pair.
    pub orbits: Vec<Vec<Pair>>,
}

impl OrbitDecomposition {
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

pub fn orbit_decomposition(sigma: &Bijection) -> OrbitDecomposition {
    let n = sigma.len();
    let mut seen = vec![false; pair_count(n) as usize];
    let mut orbits = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if seen[pair_index(n, (u, v))] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut e = (u, v);
            loop {
                seen[pair_index(n, e)] = true;
                orbit.push(e);
                e = apply_pair(sigma, e);
                if e == (u, v) {
                    break;
                }
            }
            orbits.push(orbit);
        }
    }
    OrbitDecomposition {
        sigma: sigma.clone(),
        orbits,
    }
}

/// Orbits lying entirely inside an intersection graph, and the graph they
/// span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullOrbitSet {
    pub orbits: Vec<Vec<Pair>>,
    /// Vertices touched by the selected orbits, ascending.
    pub vertices: Vec<Vertex>,
    /// The selected edges on the original vertex range.
    pub h_graph: Graph,
    pub edge_count: usize,
}

pub fn full_orbits(decomp: &OrbitDecomposition, h: &Graph) -> Result<FullOrbitSet> {
    if h.n() != decomp.n() {
        return Err(Error::param("graph and permutation differ in size"));
    }
    let orbits: Vec<Vec<Pair>> = decomp
        .orbits
        .iter()
        .filter(|o| o.iter().all(|&(u, v)| h.has_edge(u, v)))
        .cloned()
        .collect();
    let mut edges: Vec<Pair> = orbits.iter().flatten().copied().collect();
    edges.sort_unstable();
    let mut touched = vec![false; h.n()];
    for &(u, v) in &edges {
        touched[u as usize] = true;
        touched[v as usize] = true;
    }
    let vertices = (0..h.n() as Vertex).filter(|&v| touched[v as usize]).collect();
    let edge_count = edges.len();
    Ok(FullOrbitSet {
        orbits,
        vertices,
        h_graph: Graph::from_edges(h.n(), edges)?,
        edge_count,
    })
}

/// `ln Π_{e ∈ O} ℓ(G_e, 𝖦_{π(e)})` for one orbit.
pub fn orbit_log_product(
    orbit: &[Pair],
    g: &Graph,
    g2: &Graph,
    pi: &Bijection,
    p: f64,
    s: f64,
) -> Result<f64> {
    let k = kernel(p, s)?;
    Ok(orbit
        .iter()
        .map(|&(u, v)| {
            let x = g.has_edge(u, v);
            let y = g2.has_edge(pi.apply(u), pi.apply(v));
            libm::log(k.ell(x, y))
        })
        .sum())
}

/// Conditional expectation of the orbit product for an orbit of size `k`
/// given that the orbit is not fully inside the planted intersection:
/// `(1 + ρ^(2k) − s^(2k)) / (1 − (ps²)^k)`.
pub fn orbit_factor(k: usize, p: f64, s: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::param("orbit size must be positive"));
    }
    let kern = kernel(p, s)?;
    let k = k as f64;
    let excluded = libm::pow(p * s * s, k);
    if excluded >= 1.0 {
        return Err(Error::param("orbit is fully contained almost surely"));
    }
    Ok((1.0 + libm::pow(kern.rho, 2.0 * k) - libm::pow(s, 2.0 * k)) / (1.0 - excluded))
}
