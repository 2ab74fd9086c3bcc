//! Component counting, cut-edge queries, and open-cluster scans.
//!
//! All queries rebuild their scratch state per call (or reuse an explicit
//! scratch buffer in hot loops); nothing here mutates shared state.

use std::collections::HashMap;

use crate::config::{EdgeConfig, EdgeSet};
use crate::lattice::Lattice;

pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        let mut root = i;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        while i != root {
            let next = self.parent[i] as usize;
            self.parent[i] = root as u32;
            i = next;
        }
        root
    }

    /// Returns true when the two elements were in distinct classes.
    pub fn union(&mut self, i: usize, j: usize) -> bool {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
        true
    }
}

/// Number of connected components of `(V, open edges)`; isolated
/// vertices each count as a component.
pub fn component_count<L: Lattice>(g: &L, config: &EdgeConfig) -> usize {
    let mut uf = UnionFind::new(g.vertex_count());
    let mut components = g.vertex_count();
    for e in config.iter() {
        let (u, v) = g.endpoints(e);
        if uf.union(u, v) {
            components -= 1;
        }
    }
    components
}

/// Reusable BFS workspace; epoch-tagged so clears are O(1).
pub struct BfsScratch {
    mark: Vec<u32>,
    epoch: u32,
    queue: Vec<u32>,
}

impl BfsScratch {
    pub fn new() -> Self {
        Self { mark: Vec::new(), epoch: 0, queue: Vec::new() }
    }

    fn begin(&mut self, vertices: usize) {
        if self.mark.len() < vertices {
            self.mark.resize(vertices, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.fill(0);
            self.epoch = 1;
        }
        self.queue.clear();
    }

    #[inline]
    fn visit(&mut self, v: usize) -> bool {
        if self.mark[v] == self.epoch {
            false
        } else {
            self.mark[v] = self.epoch;
            true
        }
    }
}

impl Default for BfsScratch {
    fn default() -> Self {
        Self::new()
    }
}

/// True when `u` and `v` are joined by a path of open edges, skipping
/// `skip` (pass `usize::MAX` to skip nothing). Early-exits on contact,
/// so the cost is bounded by the open cluster of `u`.
pub fn connected_avoiding<L: Lattice>(
    g: &L,
    config: &EdgeConfig,
    u: usize,
    v: usize,
    skip: usize,
    scratch: &mut BfsScratch,
) -> bool {
    if u == v {
        return true;
    }
    scratch.begin(g.vertex_count());
    scratch.visit(u);
    scratch.queue.push(u as u32);
    let mut head = 0;
    while head < scratch.queue.len() {
        let w = scratch.queue[head] as usize;
        head += 1;
        for &f in g.incident_edges(w) {
            let f = f as usize;
            if f == skip || !config.get(f) {
                continue;
            }
            let (a, b) = g.endpoints(f);
            let other = if a == w { b } else { a };
            if other == v {
                return true;
            }
            if scratch.visit(other) {
                scratch.queue.push(other as u32);
            }
        }
    }
    false
}

/// Cut-edge test per the heat-bath rule: `e = (u, v)` is a cut-edge iff
/// its endpoints are disconnected in the configuration with `e` removed.
/// The current state of `e` itself is irrelevant.
pub fn is_cut_edge_with<L: Lattice>(
    g: &L,
    config: &EdgeConfig,
    e: usize,
    scratch: &mut BfsScratch,
) -> bool {
    let (u, v) = g.endpoints(e);
    !connected_avoiding(g, config, u, v, e, scratch)
}

pub fn is_cut_edge<L: Lattice>(g: &L, config: &EdgeConfig, e: usize) -> bool {
    is_cut_edge_with(g, config, e, &mut BfsScratch::new())
}

/// Open cluster of `e` and its closure.
///
/// Returns `(cluster, closure)` where `cluster` is the set of open edges
/// in the connected component of `e` (empty when `e` is closed) and
/// `closure` adds the closed edges sharing a vertex with the cluster.
pub fn open_cluster<L: Lattice>(g: &L, config: &EdgeSet, e: usize) -> (EdgeSet, EdgeSet) {
    let m = g.edge_count();
    if !config.get(e) {
        return (EdgeSet::empty(m), EdgeSet::empty(m));
    }
    let mut cluster = EdgeSet::empty(m);
    let mut closure = EdgeSet::empty(m);
    let mut scratch = BfsScratch::new();
    scratch.begin(g.vertex_count());
    let (u, v) = g.endpoints(e);
    for start in [u, v] {
        if scratch.visit(start) {
            scratch.queue.push(start as u32);
        }
    }
    let mut head = 0;
    while head < scratch.queue.len() {
        let w = scratch.queue[head] as usize;
        head += 1;
        for &f in g.incident_edges(w) {
            let f = f as usize;
            if config.get(f) {
                cluster.insert(f);
                let (a, b) = g.endpoints(f);
                let other = if a == w { b } else { a };
                if scratch.visit(other) {
                    scratch.queue.push(other as u32);
                }
            } else {
                closure.insert(f);
            }
        }
    }
    closure.union_with(&cluster);
    (cluster, closure)
}

/// All open clusters of one configuration, indexed once, with memoized
/// cluster/closure scans. Used where many closure queries hit the same
/// percolation (history expansions revisit windows many times).
pub struct OpenClusters<'a, L: Lattice> {
    g: &'a L,
    config: EdgeSet,
    root: Vec<u32>,
    memo: HashMap<u32, (EdgeSet, EdgeSet)>,
}

impl<'a, L: Lattice> OpenClusters<'a, L> {
    pub fn new(g: &'a L, config: EdgeSet) -> Self {
        let mut uf = UnionFind::new(g.vertex_count());
        for e in config.iter() {
            let (u, v) = g.endpoints(e);
            uf.union(u, v);
        }
        let root = (0..g.vertex_count()).map(|v| uf.find(v) as u32).collect();
        Self { g, config, root, memo: HashMap::new() }
    }

    pub fn config(&self) -> &EdgeSet {
        &self.config
    }

    pub fn same_cluster(&self, u: usize, v: usize) -> bool {
        self.root[u] == self.root[v]
    }

    /// `(cluster, closure)` of the open cluster containing `e`; both
    /// empty when `e` is closed.
    pub fn bar_conn(&mut self, e: usize) -> &(EdgeSet, EdgeSet) {
        let key = if self.config.get(e) {
            self.root[self.g.endpoints(e).0]
        } else {
            u32::MAX
        };
        if key == u32::MAX {
            let m = self.g.edge_count();
            return self
                .memo
                .entry(u32::MAX)
                .or_insert_with(|| (EdgeSet::empty(m), EdgeSet::empty(m)));
        }
        if !self.memo.contains_key(&key) {
            let pair = open_cluster(self.g, &self.config, e);
            self.memo.insert(key, pair);
        }
        &self.memo[&key]
    }
}
