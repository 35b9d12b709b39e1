//! Subgraph embeddings, automorphisms, cycle counts and small pattern classes.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::density::k_core_members;
use crate::graph::{Bijection, Graph, Vertex};
use crate::{Error, Result};

pub const PATTERN_CAP: usize = 8;
pub const HOST_CAP: usize = 5000;
pub const CYCLE_CAP: usize = 10;
/// Largest size for the enumeration of all connected classes.
pub const CLASS_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingCount {
    pub pattern: Graph,
    /// Injective edge-preserving maps from the pattern into the host.
    pub labeled: u64,
    /// Automorphisms of the pattern.
    pub aut: u64,
    /// `labeled / aut`.
    pub unlabeled: u64,
}

// Pattern vertices in BFS order from a maximum-degree vertex, with the
// earlier neighbours of each.
fn search_order(pattern: &Graph) -> (Vec<Vertex>, Vec<Vec<usize>>) {
    let k = pattern.n();
    let start = (0..k as Vertex)
        .max_by_key(|&v| (pattern.degree(v), core::cmp::Reverse(v)))
        .unwrap_or(0);
    let mut order = vec![start];
    let mut placed = vec![usize::MAX; k];
    placed[start as usize] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in pattern.neighbors(v) {
            if placed[w as usize] == usize::MAX {
                placed[w as usize] = order.len();
                order.push(w);
            }
        }
    }
    let back = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            pattern
                .neighbors(v)
                .iter()
                .map(|&w| placed[w as usize])
                .filter(|&j| j < i)
                .collect()
        })
        .collect();
    (order, back)
}

struct Search<'a> {
    host: &'a Graph,
    need: Vec<usize>,
    back: Vec<Vec<usize>>,
    image: Vec<Vertex>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn fits(&self, i: usize, w: Vertex) -> bool {
        !self.used[w as usize]
            && self.host.degree(w) >= self.need[i]
            && self.back[i]
                .iter()
                .all(|&j| self.host.has_edge(self.image[j], w))
    }

    fn extend(&mut self, i: usize) -> u64 {
        if i == self.need.len() {
            return 1;
        }
        let mut total = 0;
        if i == 0 {
            for w in 0..self.host.n() as Vertex {
                total += self.place(i, w);
            }
        } else {
            // Every later vertex has an earlier neighbour in BFS order.
            let anchor = self.image[self.back[i][0]];
            let host = self.host;
            for &w in host.neighbors(anchor) {
                total += self.place(i, w);
            }
        }
        total
    }

    fn place(&mut self, i: usize, w: Vertex) -> u64 {
        if !self.fits(i, w) {
            return 0;
        }
        self.image.push(w);
        self.used[w as usize] = true;
        let count = self.extend(i + 1);
        self.used[w as usize] = false;
        self.image.pop();
        count
    }
}

fn labeled_count(pattern: &Graph, host: &Graph) -> u64 {
    let (order, back) = search_order(pattern);
    let need = order.iter().map(|&v| pattern.degree(v)).collect();
    let mut search = Search {
        host,
        need,
        back,
        image: Vec::with_capacity(order.len()),
        used: vec![false; host.n()],
    };
    search.extend(0)
}

/// Labeled and unlabeled embeddings of a connected `pattern` (at most 8
/// vertices) into `host` (at most 5000 vertices).
///
/// Non-edges of the pattern are unconstrained. Automorphisms are the
/// edge-preserving bijections of the pattern onto itself; for a finite graph
/// these also reflect edges.
pub fn count_embeddings(pattern: &Graph, host: &Graph) -> Result<EmbeddingCount> {
    if pattern.n() == 0 {
        return Err(Error::param("pattern has no vertices"));
    }
    if pattern.n() > PATTERN_CAP {
        return Err(Error::TooLarge {
            what: "embedding pattern",
            size: pattern.n(),
            cap: PATTERN_CAP,
        });
    }
    if host.n() > HOST_CAP {
        return Err(Error::TooLarge {
            what: "embedding host",
            size: host.n(),
            cap: HOST_CAP,
        });
    }
    if !pattern.is_connected() {
        return Err(Error::param("pattern must be connected"));
    }
    let labeled = labeled_count(pattern, host);
    let aut = labeled_count(pattern, pattern);
    assert!(labeled.is_multiple_of(aut), "labeled count not divisible by automorphisms");
    Ok(EmbeddingCount {
        pattern: pattern.clone(),
        labeled,
        aut,
        unlabeled: labeled / aut,
    })
}

/// Number of simple cycles of length `k` (3 ≤ k ≤ 10), each counted once.
pub fn count_k_cycles(h: &Graph, k: usize) -> Result<u64> {
    if !(3..=CYCLE_CAP).contains(&k) {
        return Err(Error::param(alloc::format!(
            "cycle length {k} outside 3..={CYCLE_CAP}"
        )));
    }
    // Every cycle lies in the 2-core.
    let core = k_core_members(h, 2);
    let mut on_path = vec![false; h.n()];
    let mut total = 0u64;
    for start in 0..h.n() as Vertex {
        if !core[start as usize] {
            continue;
        }
        on_path[start as usize] = true;
        total += cycle_walk(h, &core, &mut on_path, start, start, 1, k);
        on_path[start as usize] = false;
    }
    // Each cycle is found once per direction from its smallest vertex.
    Ok(total / 2)
}

fn cycle_walk(
    h: &Graph,
    core: &[bool],
    on_path: &mut [bool],
    start: Vertex,
    at: Vertex,
    len: usize,
    k: usize,
) -> u64 {
    let mut total = 0;
    for &w in h.neighbors(at) {
        if len == k {
            if w == start {
                total += 1;
            }
            continue;
        }
        if w <= start || !core[w as usize] || on_path[w as usize] {
            continue;
        }
        on_path[w as usize] = true;
        total += cycle_walk(h, core, on_path, start, w, len + 1, k);
        on_path[w as usize] = false;
    }
    total
}

fn tree_code(adj: &[Vec<usize>], v: usize, parent: usize, out: &mut Vec<u8>) {
    let mut children: Vec<Vec<u8>> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| {
            let mut c = Vec::new();
            tree_code(adj, w, v, &mut c);
            c
        })
        .collect();
    children.sort();
    out.push(b'(');
    for c in children {
        out.extend(c);
    }
    out.push(b')');
}

/// Canonical code of a tree: the smaller rooted parenthesis code over its
/// centres.
fn tree_canonical(adj: &[Vec<usize>]) -> Vec<u8> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &v in &leaves {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        leaves = next;
    }
    leaves
        .iter()
        .map(|&c| {
            let mut code = Vec::new();
            tree_code(adj, c, usize::MAX, &mut code);
            code
        })
        .min()
        .unwrap_or_default()
}

/// One representative per isomorphism class of trees on `k` vertices
/// (1 ≤ k ≤ 8), grown by attaching leaves and deduplicated by canonical code.
pub fn tree_classes(k: usize) -> Result<Vec<Graph>> {
    if k == 0 || k > PATTERN_CAP {
        return Err(Error::param(alloc::format!(
            "tree size {k} outside 1..={PATTERN_CAP}"
        )));
    }
    let mut level: BTreeMap<Vec<u8>, Vec<Vec<usize>>> = BTreeMap::new();
    level.insert(b"()".to_vec(), vec![Vec::new()]);
    for _ in 1..k {
        let mut next = BTreeMap::new();
        for adj in level.values() {
            for v in 0..adj.len() {
                let mut grown = adj.clone();
                let leaf = grown.len();
                grown.push(vec![v]);
                grown[v].push(leaf);
                next.entry(tree_canonical(&grown)).or_insert(grown);
            }
        }
        level = next;
    }
    Ok(level
        .values()
        .map(|adj| {
            let edges = adj
                .iter()
                .enumerate()
                .flat_map(|(v, ns)| ns.iter().filter(move |&&w| v < w).map(move |&w| (v as Vertex, w as Vertex)));
            Graph::from_edges(k, edges).expect("tree edges are valid")
        })
        .collect())
}

/// Number of tree classes on `k` vertices (2 ≤ k ≤ 8) and the bound
/// `4^(k−1)` it is checked against.
pub fn tree_class_count(k: usize) -> Result<(usize, u64)> {
    if !(2..=PATTERN_CAP).contains(&k) {
        return Err(Error::param(alloc::format!(
            "tree size {k} outside 2..={PATTERN_CAP}"
        )));
    }
    let count = tree_classes(k)?.len();
    let bound = 4u64.pow(k as u32 - 1);
    assert!(count as u64 <= bound);
    Ok((count, bound))
}

/// One representative per isomorphism class of connected graphs on `k`
/// vertices (1 ≤ k ≤ 6).
///
/// Masks over the pairs are scanned in increasing order; the first mask of an
/// orbit under vertex permutations is kept and its whole orbit marked.
pub fn connected_classes(k: usize) -> Result<Vec<Graph>> {
    if k == 0 || k > CLASS_CAP {
        return Err(Error::param(alloc::format!(
            "class size {k} outside 1..={CLASS_CAP}"
        )));
    }
    let mut pairs = Vec::new();
    for u in 0..k as Vertex {
        for v in u + 1..k as Vertex {
            pairs.push((u, v));
        }
    }
    let slot = |u: Vertex, v: Vertex| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        pairs.iter().position(|&e| e == (a, b)).expect("valid pair")
    };
    let mut maps: Vec<Vec<usize>> = Vec::new();
    Bijection::for_each_permutation(k, |pi| {
        maps.push(pairs.iter().map(|&(u, v)| slot(pi.apply(u), pi.apply(v))).collect());
    });
    let total = 1usize << pairs.len();
    let mut seen = vec![false; total];
    let mut classes = Vec::new();
    for mask in 0..total {
        if seen[mask] {
            continue;
        }
        for map in &maps {
            let mut image = 0usize;
            for (i, &j) in map.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    image |= 1 << j;
                }
            }
            seen[image] = true;
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        let g = Graph::from_edges(k, edges).expect("valid pairs");
        if g.is_connected() {
            classes.push(g);
        }
    }
    Ok(classes)
}

/// Connected classes on `k` vertices that are not trees.
pub fn non_tree_classes(k: usize) -> Result<Vec<Graph>> {
    Ok(connected_classes(k)?
        .into_iter()
        .filter(|g| g.edge_count() >= k)
        .collect())
}
