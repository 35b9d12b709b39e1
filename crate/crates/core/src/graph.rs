//! Simple undirected graphs, vertex bijections and the two samplers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rng::{GraphRng, RngSeed};
use crate::runner::TrialRunner;
use crate::stats;
use crate::{Error, Result};

pub type Vertex = u32;

/// Canonical encoding of an unordered pair: smaller endpoint first.
#[inline]
pub fn canonical(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Number of unordered pairs on `n` vertices.
#[inline]
pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Simple undirected graph on `0..n`.
///
/// Edges are kept as a sorted list of canonical pairs together with sorted
/// adjacency lists, so membership tests are a binary search in the shorter
/// neighbourhood. Values are immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph, rejecting self-loops, duplicate pairs (in either
    /// orientation) and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::param(alloc::format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::param(alloc::format!("self-loop at vertex {u}")));
            }
            list.push(canonical(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::param(alloc::format!(
                "duplicate edge ({}, {})",
                w[0].0,
                w[0].1
            )));
        }
        Ok(Self::from_sorted_unique(n, list))
    }

    /// `edges` must be sorted, canonical, duplicate-free and in range.
    pub(crate) fn from_sorted_unique(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub(crate) fn from_unsorted_unique(n: usize, mut edges: Vec<(Vertex, Vertex)>) -> Self {
        edges.sort_unstable();
        Self::from_sorted_unique(n, edges)
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(pair_count(n) as usize);
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                edges.push((u, v));
            }
        }
        Self::from_sorted_unique(n, edges)
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n as Vertex).map(|v| (v - 1, v)).collect();
        Self::from_sorted_unique(n, edges)
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n as Vertex).map(|v| (v - 1, v)).collect();
        edges.push((0, n as Vertex - 1));
        Self::from_unsorted_unique(n, edges)
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves as Vertex).map(|v| (0, v)).collect();
        Self::from_sorted_unique(leaves + 1, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == v || u as usize >= self.n || v as usize >= self.n {
            return false;
        }
        let (a, b) = if self.adj[u as usize].len() <= self.adj[v as usize].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Vertices with at least one incident edge, ascending.
    pub fn non_isolated(&self) -> Vec<Vertex> {
        (0..self.n as Vertex)
            .filter(|&v| !self.adj[v as usize].is_empty())
            .collect()
    }

    /// Same vertex range, only the edges with both ends in `keep`.
    pub fn restrict(&self, keep: &[bool]) -> Graph {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| keep[u as usize] && keep[v as usize])
            .collect();
        Self::from_sorted_unique(self.n, edges)
    }

    /// Image of the graph under a vertex relabelling: edge `(u, v)` becomes
    /// `(perm(u), perm(v))`.
    pub fn relabel(&self, perm: &Bijection) -> Result<Graph> {
        check_len(self.n, perm.len())?;
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| canonical(perm.apply(u), perm.apply(v)))
            .collect();
        Ok(Self::from_unsorted_unique(self.n, edges))
    }

    /// `true` if every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.iter().all(|&(u, v)| other.has_edge(u, v))
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start as Vertex);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::param(alloc::format!(
            "size mismatch: {expected} vertices versus {got}"
        )));
    }
    Ok(())
}

/// A permutation of `0..n`, image of `i` stored at position `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bijection {
    mapping: Vec<Vertex>,
}

impl Bijection {
    pub fn new(mapping: Vec<Vertex>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &x in &mapping {
            let slot = seen
                .get_mut(x as usize)
                .ok_or_else(|| Error::param(alloc::format!("image {x} out of range")))?;
            if *slot {
                return Err(Error::param(alloc::format!("image {x} repeated")));
            }
            *slot = true;
        }
        Ok(Bijection { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Bijection {
            mapping: (0..n as Vertex).collect(),
        }
    }

    /// Uniform permutation by Fisher–Yates.
    pub fn uniform(n: usize, rng: &mut GraphRng) -> Self {
        let mut mapping: Vec<Vertex> = (0..n as Vertex).collect();
        for i in (1..n).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            mapping.swap(i, j);
        }
        Bijection { mapping }
    }

    /// Builds a permutation of `0..n` from disjoint cycles; unlisted points
    /// are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<Vertex>]) -> Result<Self> {
        let mut mapping: Vec<Vertex> = (0..n as Vertex).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &v) in cycle.iter().enumerate() {
                let slot = touched
                    .get_mut(v as usize)
                    .ok_or_else(|| Error::param(alloc::format!("cycle point {v} out of range")))?;
                if *slot {
                    return Err(Error::param(alloc::format!("point {v} appears twice")));
                }
                *slot = true;
                mapping[v as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Bijection { mapping })
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: Vertex) -> Vertex {
        self.mapping[v as usize]
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.mapping
    }

    pub fn inverse(&self) -> Bijection {
        let mut inv = vec![0; self.mapping.len()];
        for (i, &x) in self.mapping.iter().enumerate() {
            inv[x as usize] = i as Vertex;
        }
        Bijection { mapping: inv }
    }

    /// `self ∘ inner`, i.e. `v ↦ self(inner(v))`.
    pub fn compose(&self, inner: &Bijection) -> Bijection {
        assert_eq!(self.len(), inner.len());
        Bijection {
            mapping: inner.mapping.iter().map(|&v| self.apply(v)).collect(),
        }
    }

    /// Calls `visit` with every permutation of `0..n` in lexicographic order.
    pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&Bijection)) {
        let mut perm = Bijection::identity(n);
        loop {
            visit(&perm);
            if !next_permutation(&mut perm.mapping) {
                break;
            }
        }
    }
}

fn next_permutation(a: &mut [Vertex]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Correlated pair sampled by subsampling a common parent graph.
#[derive(Clone, Debug)]
pub struct CorrelatedPair {
    pub g: Graph,
    pub g2: Graph,
    pub pi_star: Bijection,
    pub p: f64,
    pub s: f64,
}

impl CorrelatedPair {
    /// Average degree `n p s²` of the planted intersection graph.
    pub fn lambda(&self) -> f64 {
        self.g.n() as f64 * self.p * self.s * self.s
    }

    pub fn planted_intersection(&self) -> Graph {
        intersection_graph(&self.g, &self.g2, &self.pi_star)
            .expect("pair components share one vertex count")
    }
}

fn check_probability(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::param(alloc::format!(
            "{name} = {x} is not a probability"
        )));
    }
    Ok(())
}

/// G(n, q): each pair, in lexicographic order, is kept when one uniform draw
/// falls below `q`.
///
/// One draw per pair means that two calls with the same seed and `q1 <= q2`
/// return nested graphs, which keeps Monte Carlo curves in `q` monotone.
pub fn sample_er(n: usize, q: f64, seed: RngSeed) -> Result<Graph> {
    check_probability("q", q)?;
    let mut rng = seed.rng();
    Ok(sample_er_with(n, q, &mut rng))
}

pub(crate) fn sample_er_with(n: usize, q: f64, rng: &mut GraphRng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if rng.bernoulli(q) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_sorted_unique(n, edges)
}

/// Samples `(G, 𝖦, π*)`: a uniform planted bijection, then for every pair
/// `(u, v)` of the first vertex set in lexicographic order a parent bit
/// `J ~ Bern(p)` and child bits `I, 𝖨 ~ Bern(s)`, giving
/// `G_{u,v} = J·I` and `𝖦_{π*(u),π*(v)} = J·𝖨`.
///
/// `p` and `s` may be any value in `[0, 1]`; zero is accepted so that the
/// degenerate empty pairs can be produced.
pub fn sample_correlated_pair(n: usize, p: f64, s: f64, seed: RngSeed) -> Result<CorrelatedPair> {
    check_probability("p", p)?;
    check_probability("s", s)?;
    let mut rng = seed.rng();
    let pi_star = Bijection::uniform(n, &mut rng);
    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            let parent = rng.bernoulli(p);
            let child1 = rng.bernoulli(s);
            let child2 = rng.bernoulli(s);
            if parent && child1 {
                e1.push((u, v));
            }
            if parent && child2 {
                e2.push(canonical(pi_star.apply(u), pi_star.apply(v)));
            }
        }
    }
    Ok(CorrelatedPair {
        g: Graph::from_sorted_unique(n, e1),
        g2: Graph::from_unsorted_unique(n, e2),
        pi_star,
        p,
        s,
    })
}

/// Independent pair of G(n, q) graphs drawn from one stream.
pub fn sample_independent_pair(n: usize, q: f64, seed: RngSeed) -> Result<(Graph, Graph)> {
    check_probability("q", q)?;
    let mut rng = seed.rng();
    let g = sample_er_with(n, q, &mut rng);
    let g2 = sample_er_with(n, q, &mut rng);
    Ok((g, g2))
}

/// π-intersection graph: `(u, v)` is an edge iff it is an edge of `g` and
/// `(π(u), π(v))` is an edge of `g2`.
pub fn intersection_graph(g: &Graph, g2: &Graph, pi: &Bijection) -> Result<Graph> {
    check_len(g.n(), g2.n())?;
    check_len(g.n(), pi.len())?;
    let edges = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| g2.has_edge(pi.apply(u), pi.apply(v)))
        .collect();
    Ok(Graph::from_sorted_unique(g.n(), edges))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Independent G(n, ps) graphs.
    Null,
    /// Correlated pair from the subsampling rule.
    Alternative,
}

/// Outcome of [`edge_count_correlation_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCountCorrelation {
    /// Pearson correlation of `(|E|, |𝖤|)`, `None` when a count never varies.
    pub correlation: Option<f64>,
    pub counts: Vec<(usize, usize)>,
}

/// Correlation between the edge counts of the two graphs across trials.
///
/// Under the alternative the population value is `s(1-p)/(1-ps)`; under the
/// null it is zero.
pub fn edge_count_correlation_experiment<R: TrialRunner>(
    n: usize,
    p: f64,
    s: f64,
    trials: usize,
    hypothesis: Hypothesis,
    seed: RngSeed,
    runner: &R,
) -> Result<EdgeCountCorrelation> {
    if trials < 2 {
        return Err(Error::param("need at least two trials"));
    }
    check_probability("p", p)?;
    check_probability("s", s)?;
    let counts = runner.run(trials, |t| {
        let stream = seed.stream(t as u64);
        match hypothesis {
            Hypothesis::Alternative => {
                let pair = sample_correlated_pair(n, p, s, stream).expect("validated");
                (pair.g.edge_count(), pair.g2.edge_count())
            }
            Hypothesis::Null => {
                let (g, g2) = sample_independent_pair(n, p * s, stream).expect("validated");
                (g.edge_count(), g2.edge_count())
            }
        }
    });
    let xs: Vec<f64> = counts.iter().map(|c| c.0 as f64).collect();
    let ys: Vec<f64> = counts.iter().map(|c| c.1 as f64).collect();
    Ok(EdgeCountCorrelation {
        correlation: stats::pearson(&xs, &ys),
        counts,
    })
}

/// Population correlation of one edge indicator pair `(G_e, 𝖦_{π*(e)})`,
/// which is also the correlation of the total edge counts.
pub fn indicator_correlation(p: f64, s: f64) -> f64 {
    s * (1.0 - p) / (1.0 - p * s)
}
