//! Maximum edge-to-vertex ratio subgraphs.
//!
//! [`densest_exact`] is the production solver; [`densest_bruteforce`] is the
//! exhaustive oracle it is checked against and [`greedy_peel`] a fast
//! lower bound. All comparisons of densities are exact.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::flow::FlowNetwork;
use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

/// Largest graph accepted by the exhaustive routines.
pub const BRUTE_FORCE_CAP: usize = 20;

/// `num / den` with `den >= 1`, compared by cross-multiplication.
#[derive(Clone, Copy)]
pub struct DensityValue {
    pub num: u64,
    pub den: u64,
}

impl DensityValue {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "density denominator must be positive");
        DensityValue { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Compares against a real threshold: `num / den` versus `x`.
    pub fn cmp_f64(self, x: f64) -> Ordering {
        // num and den stay far below 2^53 for every graph we can hold.
        let lhs = self.num as f64;
        let rhs = x * self.den as f64;
        lhs.partial_cmp(&rhs).unwrap_or(Ordering::Less)
    }
}

impl PartialEq for DensityValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DensityValue {}

impl PartialOrd for DensityValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DensityValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Debug for DensityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for DensityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A subset together with its density. `exact` means no subset (subject to
/// the constraint in force) is strictly denser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensestResult {
    pub subset: Vec<Vertex>,
    pub density: DensityValue,
    pub exact: bool,
}

/// Exact `|E(U)| / |U|` for a nonempty subset.
pub fn subgraph_density(g: &Graph, subset: &[Vertex]) -> Result<DensityValue> {
    if subset.is_empty() {
        return Err(Error::param("subset must be nonempty"));
    }
    let mut member = vec![false; g.n()];
    for &v in subset {
        let slot = member
            .get_mut(v as usize)
            .ok_or_else(|| Error::param(alloc::format!("vertex {v} out of range")))?;
        if *slot {
            return Err(Error::param(alloc::format!("vertex {v} listed twice")));
        }
        *slot = true;
    }
    Ok(DensityValue::new(
        induced_edges(g, &member),
        subset.len() as u64,
    ))
}

fn induced_edges(g: &Graph, member: &[bool]) -> u64 {
    g.edges()
        .iter()
        .filter(|&&(u, v)| member[u as usize] && member[v as usize])
        .count() as u64
}

fn require_vertices(g: &Graph) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::param("graph has no vertices"));
    }
    Ok(())
}

fn full_set(g: &Graph) -> Vec<Vertex> {
    (0..g.n() as Vertex).collect()
}

/// Exact densest subgraph of maximum cardinality.
///
/// Binary search over guesses `g = t / n²`. A guess is feasible when some
/// subset has density strictly above it, which is decided by one max-flow on
/// the density-testing network scaled by `n²`:
/// `s → v` with capacity `max(0, d_v n² − 2t)`, `v → sink` with
/// `max(0, 2t − d_v n²)` and every edge as a pair of arcs of capacity `n²`.
/// A subset `U` is feasible iff the cut `{s} ∪ U` is cheaper than the cut
/// `{s}`, i.e. iff the source arcs are not all saturated. Distinct densities
/// with denominators at most `n` differ by more than `1/n²`, so the largest
/// feasible `t` is within `1/n²` of the optimum and its maximal min-cut source
/// side is exactly the union of all densest subsets.
pub fn densest_exact(g: &Graph) -> Result<DensestResult> {
    require_vertices(g)?;
    if g.edge_count() == 0 {
        return Ok(DensestResult {
            subset: full_set(g),
            density: DensityValue::new(0, g.n() as u64),
            exact: true,
        });
    }
    let n = g.n() as i64;
    let scale = n * n;
    let lower = greedy_peel(g)?.density;
    // Largest t with t / scale below the peeling density: always feasible.
    let mut feasible = ceil_div(lower.num as i64 * scale, lower.den as i64) - 1;
    // Density never exceeds half the maximum degree.
    let mut infeasible = ceil_div(g.max_degree() as i64 * scale, 2);
    while infeasible - feasible > 1 {
        let mid = feasible + (infeasible - feasible) / 2;
        if feasible_at(g, mid, scale).is_some() {
            feasible = mid;
        } else {
            infeasible = mid;
        }
    }
    let subset = feasible_at(g, feasible, scale).expect("feasible guess");
    let density = subgraph_density(g, &subset)?;
    Ok(DensestResult {
        subset,
        density,
        exact: true,
    })
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

/// Returns the maximal min-cut source side when some subset has density
/// strictly above `t / scale`.
fn feasible_at(g: &Graph, t: i64, scale: i64) -> Option<Vec<Vertex>> {
    let active = g.non_isolated();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in active.iter().enumerate() {
        index[v as usize] = i;
    }
    let source = active.len();
    let sink = source + 1;
    let mut net = FlowNetwork::new(active.len() + 2);
    let mut source_total = 0i64;
    for (i, &v) in active.iter().enumerate() {
        let excess = g.degree(v) as i64 * scale - 2 * t;
        if excess > 0 {
            net.add_edge(source, i, excess);
            source_total += excess;
        } else if excess < 0 {
            net.add_edge(i, sink, -excess);
        }
    }
    for &(u, v) in g.edges() {
        net.add_undirected(index[u as usize], index[v as usize], scale);
    }
    let flow = net.max_flow(source, sink);
    if flow >= source_total {
        return None;
    }
    let side = net.max_source_side(sink);
    Some(
        active
            .iter()
            .enumerate()
            .filter(|&(i, _)| side[i])
            .map(|(_, &v)| v)
            .collect(),
    )
}

/// Exhaustive search over nonempty subsets of size at least `floor`.
///
/// Ties on density go to the larger subset, then to the lexicographically
/// smallest sorted vertex list.
pub fn densest_bruteforce_constrained(g: &Graph, floor: usize) -> Result<DensestResult> {
    require_vertices(g)?;
    let n = g.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            what: "brute-force densest subgraph",
            size: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if floor > n {
        return Err(Error::param(alloc::format!(
            "size floor {floor} exceeds vertex count {n}"
        )));
    }
    let adj: Vec<u32> = (0..n as Vertex)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let floor = floor.max(1);
    let mut best: Option<(DensityValue, u32)> = None;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size < floor {
            continue;
        }
        let mut twice = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            twice += (adj[v] & mask).count_ones();
            rest &= rest - 1;
        }
        let d = DensityValue::new(twice as u64 / 2, size as u64);
        let better = match best {
            None => true,
            Some((bd, bm)) => match d.cmp(&bd) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    let bs = bm.count_ones() as usize;
                    size > bs || (size == bs && lex_smaller(mask, bm))
                }
            },
        };
        if better {
            best = Some((d, mask));
        }
    }
    let (density, mask) = best.expect("at least one subset meets the floor");
    Ok(DensestResult {
        subset: (0..n as Vertex).filter(|&v| mask & (1 << v) != 0).collect(),
        density,
        exact: true,
    })
}

/// For equal-size masks: is the sorted vertex list of `a` lexicographically
/// smaller than that of `b`? The first differing vertex decides, and the
/// list holding it is smaller.
fn lex_smaller(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

/// Exhaustive densest subgraph for `n <= 20`.
pub fn densest_bruteforce(g: &Graph) -> Result<DensestResult> {
    densest_bruteforce_constrained(g, 1)
}

/// Order in which repeatedly removing a minimum-degree vertex deletes the
/// vertices (ties: smallest label first).
pub fn peeling_order(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n as Vertex).map(|v| g.degree(v)).collect();
    let max_deg = g.max_degree();
    // Bucket queue keyed by current degree; BTreeSet keeps ties ordered.
    let mut buckets: Vec<alloc::collections::BTreeSet<Vertex>> =
        vec![alloc::collections::BTreeSet::new(); max_deg + 1];
    for v in 0..n as Vertex {
        buckets[degree[v as usize]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut low = 0usize;
    for _ in 0..n {
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop_first().expect("nonempty bucket");
        removed[v as usize] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w as usize] {
                let d = degree[w as usize];
                buckets[d].remove(&w);
                degree[w as usize] = d - 1;
                buckets[d - 1].insert(w);
                if d - 1 < low {
                    low = d - 1;
                }
            }
        }
    }
    order
}

/// Best density among the peeling prefixes whose size is at least `floor`.
pub fn peel_with_floor(g: &Graph, floor: usize) -> Result<DensestResult> {
    require_vertices(g)?;
    let n = g.n();
    if floor > n {
        return Err(Error::param(alloc::format!(
            "size floor {floor} exceeds vertex count {n}"
        )));
    }
    let order = peeling_order(g);
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }
    // Edges remaining after the first i removals.
    let mut removed_edges_at = vec![0u64; n + 1];
    for &(u, v) in g.edges() {
        let first = position[u as usize].min(position[v as usize]);
        removed_edges_at[first + 1] += 1;
    }
    let mut best_i = 0;
    let mut best = DensityValue::new(g.edge_count() as u64, n as u64);
    let mut remaining = g.edge_count() as u64;
    let floor = floor.max(1);
    for (i, &removed) in removed_edges_at.iter().enumerate().take(n).skip(1) {
        remaining -= removed;
        if n - i < floor {
            break;
        }
        let d = DensityValue::new(remaining, (n - i) as u64);
        if d > best {
            best = d;
            best_i = i;
        }
    }
    let mut subset: Vec<Vertex> = order[best_i..].to_vec();
    subset.sort_unstable();
    Ok(DensestResult {
        subset,
        density: best,
        exact: false,
    })
}

/// Greedy peeling lower bound on the maximum density.
pub fn greedy_peel(g: &Graph) -> Result<DensestResult> {
    peel_with_floor(g, 1)
}

/// Maximal subgraph of minimum degree at least `k`, on the same vertex range
/// (deleted vertices become isolated). Possibly disconnected.
pub fn k_core(g: &Graph, k: usize) -> Graph {
    g.restrict(&k_core_members(g, k))
}

/// Membership flags of the `k`-core.
pub fn k_core_members(g: &Graph, k: usize) -> Vec<bool> {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n as Vertex).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut stack: Vec<Vertex> = (0..n as Vertex)
        .filter(|&v| degree[v as usize] < k)
        .collect();
    for &v in &stack {
        alive[v as usize] = false;
    }
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if alive[w as usize] {
                degree[w as usize] -= 1;
                if degree[w as usize] < k {
                    alive[w as usize] = false;
                    stack.push(w);
                }
            }
        }
    }
    alive
}
