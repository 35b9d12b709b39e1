//! Dinic's maximum flow on integer capacities.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    cap: i64,
}

/// Residual network. Arc `2i` is the forward arc of the `i`-th added edge and
/// `2i + 1` its reverse.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    head: Vec<Vec<usize>>,
    level: Vec<u32>,
    cursor: Vec<usize>,
}

const UNREACHED: u32 = u32::MAX;

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            head: vec![Vec::new(); nodes],
            level: vec![UNREACHED; nodes],
            cursor: vec![0; nodes],
        }
    }

    pub fn nodes(&self) -> usize {
        self.head.len()
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        debug_assert!(cap >= 0);
        self.head[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.head[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    /// Edge with capacity `cap` in both directions.
    pub fn add_undirected(&mut self, a: usize, b: usize, cap: i64) {
        self.head[a].push(self.arcs.len());
        self.arcs.push(Arc { to: b, cap });
        self.head[b].push(self.arcs.len());
        self.arcs.push(Arc { to: a, cap });
    }

    fn bfs(&mut self, source: usize, sink: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = UNREACHED);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.head[v] {
                let Arc { to, cap } = self.arcs[a];
                if cap > 0 && self.level[to] == UNREACHED {
                    self.level[to] = self.level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
        self.level[sink] != UNREACHED
    }

    // Iterative blocking-flow DFS along level-increasing arcs.
    fn augment(&mut self, source: usize, sink: usize) -> i64 {
        let mut total = 0;
        let mut path: Vec<usize> = Vec::new();
        let mut v = source;
        loop {
            if v == sink {
                let push = path.iter().map(|&a| self.arcs[a].cap).min().unwrap_or(0);
                for &a in &path {
                    self.arcs[a].cap -= push;
                    self.arcs[a ^ 1].cap += push;
                }
                total += push;
                // Restart from the tail of the first saturated arc.
                let cut = path
                    .iter()
                    .position(|&a| self.arcs[a].cap == 0)
                    .unwrap_or(0);
                path.truncate(cut);
                v = match path.last() {
                    Some(&a) => self.arcs[a].to,
                    None => source,
                };
                continue;
            }
            let mut advanced = false;
            while self.cursor[v] < self.head[v].len() {
                let a = self.head[v][self.cursor[v]];
                let Arc { to, cap } = self.arcs[a];
                if cap > 0 && self.level[to] == self.level[v] + 1 {
                    path.push(a);
                    v = to;
                    advanced = true;
                    break;
                }
                self.cursor[v] += 1;
            }
            if !advanced {
                // Dead end: retreat and skip the arc that led here.
                self.level[v] = UNREACHED;
                match path.pop() {
                    Some(a) => {
                        v = self.arcs[a ^ 1].to;
                        self.cursor[v] += 1;
                    }
                    None => return total,
                }
            }
        }
    }

    /// Maximum flow value from `source` to `sink`.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        assert_ne!(source, sink);
        let mut flow = 0;
        while self.bfs(source, sink) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            flow += self.augment(source, sink);
        }
        flow
    }

    /// After [`max_flow`](Self::max_flow): the largest source side of a
    /// minimum cut, i.e. every node that cannot reach `sink` in the residual
    /// network.
    pub fn max_source_side(&self, sink: usize) -> Vec<bool> {
        let mut reaches_sink = vec![false; self.nodes()];
        reaches_sink[sink] = true;
        let mut queue = VecDeque::from([sink]);
        while let Some(w) = queue.pop_front() {
            // Residual arc v -> w exists iff the paired arc w -> v has its
            // reverse capacity, i.e. arcs[a ^ 1].cap > 0 for a in head[w].
            for &a in &self.head[w] {
                let v = self.arcs[a].to;
                if !reaches_sink[v] && self.arcs[a ^ 1].cap > 0 {
                    reaches_sink[v] = true;
                    queue.push_back(v);
                }
            }
        }
        reaches_sink.into_iter().map(|r| !r).collect()
    }
}
