//! Edge-set geometry on the torus: distances, enlargements, edge boxes.
//!
//! Distance between edges is the minimum torus L1 distance over endpoint
//! pairs, so edges sharing a vertex are at distance zero.

use crate::config::EdgeSet;
use crate::connectivity::UnionFind;
use crate::error::FkError;
use crate::lattice::{Lattice, TorusGeometry};

/// Vertex distances to the nearest endpoint of `set`, by multi-source
/// BFS on the torus graph (graph distance equals wrapped L1).
fn distance_field(g: &TorusGeometry, set: &EdgeSet) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    for e in set.iter() {
        let (u, v) = g.endpoints(e);
        for w in [u, v] {
            if dist[w] != 0 {
                dist[w] = 0;
                queue.push_back(w);
            }
        }
    }
    while let Some(w) = queue.pop_front() {
        let dw = dist[w];
        for &f in g.incident_edges(w) {
            let (a, b) = g.endpoints(f as usize);
            let other = if a == w { b } else { a };
            if dist[other] == u32::MAX {
                dist[other] = dw + 1;
                queue.push_back(other);
            }
        }
    }
    dist
}

/// Minimum torus L1 distance between two nonempty edge sets.
pub fn edge_distance(g: &TorusGeometry, a: &EdgeSet, b: &EdgeSet) -> Result<usize, FkError> {
    if a.is_empty() || b.is_empty() {
        return Err(FkError::EmptySet);
    }
    let dist = distance_field(g, a);
    let mut best = usize::MAX;
    for e in b.iter() {
        let (u, v) = g.endpoints(e);
        best = best.min(dist[u] as usize).min(dist[v] as usize);
    }
    Ok(best)
}

/// `A+`: every edge within `radius` of `A` (always contains `A`).
pub fn enlarge(g: &TorusGeometry, a: &EdgeSet, radius: usize) -> EdgeSet {
    let mut out = EdgeSet::empty(g.edge_count());
    if a.is_empty() {
        return out;
    }
    let dist = distance_field(g, a);
    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e);
        if dist[u].min(dist[v]) as usize <= radius {
            out.insert(e);
        }
    }
    out
}

/// Edge box anchored at `corner`: all edges whose base vertex lies in
/// the axis-aligned box of the given side, pointing in any positive
/// direction. Boxes anchored on a grid of stride `side` partition the
/// torus edge set when `side` divides `n`.
pub fn edge_box(g: &TorusGeometry, corner: usize, side: usize) -> EdgeSet {
    assert!(side >= 1 && side <= g.side());
    let d = g.dimension();
    let corner_coords = g.coords(corner);
    let mut out = EdgeSet::empty(g.edge_count());
    let mut offset = vec![0usize; d];
    loop {
        let coords: Vec<usize> =
            (0..d).map(|k| (corner_coords[k] + offset[k]) % g.side()).collect();
        let v = g.vertex_at(&coords);
        for axis in 0..d {
            out.insert(g.edge_at(v, axis));
        }
        // mixed-radix increment of the offset
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            offset[k] += 1;
            if offset[k] < side {
                break;
            }
            offset[k] = 0;
            k += 1;
        }
    }
}

/// The grid of box corners `{0, side, 2 side, ...}^d`; with `side | n`
/// the corresponding edge boxes decompose the torus.
pub fn box_corners(g: &TorusGeometry, side: usize) -> Vec<usize> {
    let d = g.dimension();
    let k = g.side() / side;
    let mut corners = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let coords: Vec<usize> = (0..d).map(|a| idx[a] * side).collect();
        corners.push(g.vertex_at(&coords));
        let mut a = 0;
        loop {
            if a == d {
                return corners;
            }
            idx[a] += 1;
            if idx[a] < k {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

/// Vertex-sharing connected components of an edge set.
pub fn edge_components<L: Lattice>(g: &L, set: &EdgeSet) -> Vec<EdgeSet> {
    let mut uf = UnionFind::new(g.vertex_count());
    for e in set.iter() {
        let (u, v) = g.endpoints(e);
        uf.union(u, v);
    }
    let mut by_root: std::collections::HashMap<usize, EdgeSet> = std::collections::HashMap::new();
    for e in set.iter() {
        let root = uf.find(g.endpoints(e).0);
        by_root.entry(root).or_insert_with(|| EdgeSet::empty(g.edge_count())).insert(e);
    }
    let mut parts: Vec<EdgeSet> = by_root.into_values().collect();
    parts.sort_by_key(|s| s.iter().next());
    parts
}

/// Largest pairwise edge distance within one set (0 for singletons).
pub fn edge_set_diameter(g: &TorusGeometry, set: &EdgeSet) -> usize {
    let edges = set.to_sorted_vec();
    let mut best = 0;
    for (i, &e) in edges.iter().enumerate() {
        for &f in &edges[i + 1..] {
            best = best.max(g.edge_pair_distance(e, f));
        }
    }
    best
}
