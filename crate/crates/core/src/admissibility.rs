//! The four admissibility conditions on an intersection graph.
//!
//! (i) maximum subgraph density at most ξ; (ii) maximum degree at most
//! `ln n`; (iii) no connected subgraph with two independent cycles on at most
//! `2 ln ln n` vertices; (iv) at most `n^(δk)` cycles of each length `k`.

use alloc::vec;
use alloc::vec::Vec;

use crate::density::{densest_exact, k_core_members, DensityValue};
use crate::embedding::{count_k_cycles, CYCLE_CAP};
use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

pub const DEFAULT_DELTA: f64 = 0.2;
pub const DEFAULT_CYCLE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub xi: f64,
    pub delta: f64,
    pub cycle_cap: usize,
    pub pass_i: bool,
    pub pass_ii: bool,
    pub pass_iii: bool,
    pub pass_iv: bool,
    /// Densest subset and its density, always recorded.
    pub densest: (Vec<Vertex>, DensityValue),
    /// A vertex of degree above `ln n`.
    pub witness_ii: Option<(Vertex, usize)>,
    /// Vertices of a small connected subgraph with two independent cycles.
    pub witness_iii: Option<Vec<Vertex>>,
    /// First cycle length whose count exceeds `n^(δk)`, with the count.
    pub witness_iv: Option<(usize, u64)>,
    /// Cycle counts for `k = 3..=cycle_cap`.
    pub cycle_counts: Vec<(usize, u64)>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.pass_i && self.pass_ii && self.pass_iii && self.pass_iv
    }
}

/// `floor(2 ln ln n)`, the largest size a small bicyclic witness may have.
pub fn bicyclic_size_limit(n: usize) -> usize {
    let t = 2.0 * libm::log(libm::log(n as f64));
    if t <= 0.0 {
        0
    } else {
        libm::floor(t) as usize
    }
}

pub fn check_admissible(
    h: &Graph,
    xi: f64,
    delta: f64,
    cycle_cap: usize,
) -> Result<AdmissibilityReport> {
    let n = h.n();
    if n < 3 {
        return Err(Error::param("admissibility needs n >= 3"));
    }
    if !(xi > 0.0) {
        return Err(Error::param("xi must be positive"));
    }
    if !(delta > 0.0) {
        return Err(Error::param("delta must be positive"));
    }
    if cycle_cap > CYCLE_CAP {
        return Err(Error::param(alloc::format!(
            "cycle cap {cycle_cap} exceeds {CYCLE_CAP}"
        )));
    }
    let best = densest_exact(h)?;
    let pass_i = best.density.cmp_f64(xi).is_le();

    let ln_n = libm::log(n as f64);
    let witness_ii = (0..n as Vertex)
        .map(|v| (v, h.degree(v)))
        .find(|&(_, d)| d as f64 > ln_n);

    let witness_iii = small_bicyclic(h, bicyclic_size_limit(n));

    let mut cycle_counts = Vec::new();
    let mut witness_iv = None;
    for k in 3..=cycle_cap {
        let count = count_k_cycles(h, k)?;
        cycle_counts.push((k, count));
        let bound = libm::pow(n as f64, delta * k as f64);
        if witness_iv.is_none() && count as f64 > bound {
            witness_iv = Some((k, count));
        }
    }

    Ok(AdmissibilityReport {
        xi,
        delta,
        cycle_cap,
        pass_i,
        pass_ii: witness_ii.is_none(),
        pass_iii: witness_iii.is_none(),
        pass_iv: witness_iv.is_none(),
        densest: (best.subset, best.density),
        witness_ii,
        witness_iii,
        witness_iv,
        cycle_counts,
    })
}

/// A connected vertex set of size at most `limit` whose induced subgraph has
/// at least one more edge than vertices, if any.
///
/// Such a set spans a connected subgraph with two independent cycles, and any
/// such subgraph lives inside the 2-core, within a component of the 2-core
/// whose edges outnumber its vertices. Connected sets of the 2-core are
/// enumerated exactly, each once, from its smallest vertex.
pub fn small_bicyclic(h: &Graph, limit: usize) -> Option<Vec<Vertex>> {
    if limit < 4 {
        // Two independent cycles need at least four vertices.
        return None;
    }
    let core = h.restrict(&k_core_members(h, 2));
    let mut eligible = vec![false; h.n()];
    for comp in core.components() {
        if comp.len() < 4 {
            continue;
        }
        let edges: usize = comp.iter().map(|&v| core.degree(v)).sum::<usize>() / 2;
        if edges > comp.len() {
            for &v in &comp {
                eligible[v as usize] = true;
            }
        }
    }
    let mut in_set = vec![false; h.n()];
    for start in 0..h.n() as Vertex {
        if !eligible[start as usize] {
            continue;
        }
        let mut set = vec![start];
        in_set[start as usize] = true;
        let frontier: Vec<Vertex> = core
            .neighbors(start)
            .iter()
            .copied()
            .filter(|&w| w > start)
            .collect();
        let found = grow(&core, start, limit, &mut set, &mut in_set, 0, frontier);
        in_set[start as usize] = false;
        if let Some(mut witness) = found {
            witness.sort_unstable();
            return Some(witness);
        }
    }
    None
}

// Enumerates connected supersets of `set` (vertices above `start`) using an
// extension list in the style of ESU, checking each set once.
fn grow(
    g: &Graph,
    start: Vertex,
    limit: usize,
    set: &mut Vec<Vertex>,
    in_set: &mut [bool],
    edges: usize,
    mut extension: Vec<Vertex>,
) -> Option<Vec<Vertex>> {
    if edges > set.len() {
        return Some(set.clone());
    }
    if set.len() == limit {
        return None;
    }
    while let Some(w) = extension.pop() {
        let added = g.neighbors(w).iter().filter(|&&x| in_set[x as usize]).count();
        let mut next = extension.clone();
        for &x in g.neighbors(w) {
            if x > start
                && !in_set[x as usize]
                && !next.contains(&x)
                && !set.iter().any(|&y| g.has_edge(x, y))
            {
                next.push(x);
            }
        }
        set.push(w);
        in_set[w as usize] = true;
        let found = grow(g, start, limit, set, in_set, edges + added, next);
        in_set[w as usize] = false;
        set.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}
