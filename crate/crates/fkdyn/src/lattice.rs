//! Geometry, edge configurations, and connectivity primitives.
//!
//! The periodic lattice `Z_n^d` is the main stage; small free-boundary
//! graphs (paths, cycles, grids) share the same interfaces so the exact
//! engine can run on state spaces it can enumerate.

use crate::error::FkError;

/// A finite graph whose edges carry the dynamics.
///
/// Implementors precompute endpoints and per-vertex incidence lists;
/// everything downstream (component counts, cut-edge checks, cluster
/// scans) only needs these accessors.
pub trait Lattice: Sync {
    fn vertex_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    fn endpoints(&self, e: usize) -> (usize, usize);
    fn incident_edges(&self, v: usize) -> &[u32];
}

/// The discrete torus `Z_n^d` with one edge per (vertex, axis) pair.
///
/// Vertices are indexed in mixed radix (axis 0 fastest), and edge
/// `v * d + axis` joins `v` to its positive neighbor along `axis`.
/// Requires `n >= 3` so no two vertices are joined by parallel edges.
#[derive(Clone, Debug)]
pub struct TorusGeometry {
    d: usize,
    n: usize,
    vertices: usize,
    edges: usize,
    endpoints: Vec<(u32, u32)>,
    incident: Vec<u32>, // vertex_count * 2d, flattened
}

impl TorusGeometry {
    pub fn new(d: usize, n: usize) -> Result<Self, FkError> {
        if d < 1 {
            return Err(FkError::BadGeometry("dimension must be >= 1".into()));
        }
        if n < 3 {
            return Err(FkError::BadGeometry(
                "side length must be >= 3 (smaller tori have parallel edges)".into(),
            ));
        }
        let vertices = n.checked_pow(d as u32).ok_or_else(|| {
            FkError::BadGeometry(format!("torus {n}^{d} overflows the vertex index"))
        })?;
        let edges = d * vertices;
        if edges > (u32::MAX / 4) as usize {
            return Err(FkError::BadGeometry(format!("torus {n}^{d} is too large")));
        }
        let mut endpoints = Vec::with_capacity(edges);
        for v in 0..vertices {
            for axis in 0..d {
                endpoints.push((v as u32, shift(v, axis, 1, d, n) as u32));
            }
        }
        let mut incident = vec![0u32; vertices * 2 * d];
        for v in 0..vertices {
            let base = v * 2 * d;
            for axis in 0..d {
                incident[base + axis] = (v * d + axis) as u32;
                let back = shift(v, axis, n - 1, d, n);
                incident[base + d + axis] = (back * d + axis) as u32;
            }
        }
        Ok(Self { d, n, vertices, edges, endpoints, incident })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn side(&self) -> usize {
        self.n
    }

    /// Coordinates of vertex `v`, axis 0 first.
    pub fn coords(&self, v: usize) -> Vec<usize> {
        let mut c = Vec::with_capacity(self.d);
        let mut rest = v;
        for _ in 0..self.d {
            c.push(rest % self.n);
            rest /= self.n;
        }
        c
    }

    pub fn vertex_at(&self, coords: &[usize]) -> usize {
        assert_eq!(coords.len(), self.d);
        let mut v = 0;
        for &c in coords.iter().rev() {
            v = v * self.n + (c % self.n);
        }
        v
    }

    /// Edge id for the edge leaving `v` in the positive `axis` direction.
    pub fn edge_at(&self, v: usize, axis: usize) -> usize {
        assert!(axis < self.d);
        v * self.d + axis
    }

    /// Torus L1 distance between two vertices (per-axis wrap minimum).
    pub fn vertex_distance(&self, u: usize, v: usize) -> usize {
        let mut total = 0;
        let mut a = u;
        let mut b = v;
        for _ in 0..self.d {
            let ca = a % self.n;
            let cb = b % self.n;
            let diff = ca.abs_diff(cb);
            total += diff.min(self.n - diff);
            a /= self.n;
            b /= self.n;
        }
        total
    }

    /// Minimum torus L1 distance over endpoint pairs of the two edges;
    /// edges sharing a vertex are at distance zero.
    pub fn edge_pair_distance(&self, e: usize, f: usize) -> usize {
        let (a, b) = self.endpoints(e);
        let (c, d) = self.endpoints(f);
        self.vertex_distance(a, c)
            .min(self.vertex_distance(a, d))
            .min(self.vertex_distance(b, c))
            .min(self.vertex_distance(b, d))
    }
}

fn shift(v: usize, axis: usize, by: usize, d: usize, n: usize) -> usize {
    debug_assert!(axis < d);
    let stride = n.pow(axis as u32);
    let coord = (v / stride) % n;
    let new_coord = (coord + by) % n;
    v - coord * stride + new_coord * stride
}

impl Lattice for TorusGeometry {
    fn vertex_count(&self) -> usize {
        self.vertices
    }

    fn edge_count(&self) -> usize {
        self.edges
    }

    fn endpoints(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.endpoints[e];
        (u as usize, v as usize)
    }

    fn incident_edges(&self, v: usize) -> &[u32] {
        let base = v * 2 * self.d;
        &self.incident[base..base + 2 * self.d]
    }
}

/// An explicit small graph (free boundary) given by its edge list.
#[derive(Clone, Debug)]
pub struct MicroGraph {
    vertices: usize,
    endpoints: Vec<(u32, u32)>,
    incident_index: Vec<u32>,
    incident: Vec<u32>,
}

impl MicroGraph {
    pub fn new(vertices: usize, edge_list: &[(usize, usize)]) -> Result<Self, FkError> {
        for &(u, v) in edge_list {
            if u >= vertices || v >= vertices {
                return Err(FkError::BadGeometry(format!(
                    "edge ({u},{v}) out of range for {vertices} vertices"
                )));
            }
            if u == v {
                return Err(FkError::BadGeometry("self-loops are not supported".into()));
            }
        }
        let endpoints: Vec<(u32, u32)> =
            edge_list.iter().map(|&(u, v)| (u as u32, v as u32)).collect();
        let mut degree = vec![0u32; vertices];
        for &(u, v) in edge_list {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut incident_index = Vec::with_capacity(vertices + 1);
        incident_index.push(0u32);
        for v in 0..vertices {
            incident_index.push(incident_index[v] + degree[v]);
        }
        let mut cursor: Vec<u32> = incident_index[..vertices].to_vec();
        let mut incident = vec![0u32; incident_index[vertices] as usize];
        for (e, &(u, v)) in edge_list.iter().enumerate() {
            incident[cursor[u] as usize] = e as u32;
            cursor[u] += 1;
            incident[cursor[v] as usize] = e as u32;
            cursor[v] += 1;
        }
        Ok(Self { vertices, endpoints, incident_index, incident })
    }

    pub fn single_edge() -> Self {
        Self::new(2, &[(0, 1)]).unwrap()
    }

    pub fn path(edges: usize) -> Self {
        let list: Vec<_> = (0..edges).map(|i| (i, i + 1)).collect();
        Self::new(edges + 1, &list).unwrap()
    }

    pub fn cycle(len: usize) -> Self {
        assert!(len >= 3);
        let list: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Self::new(len, &list).unwrap()
    }

    /// A w x h vertex grid with free boundary; `grid(2, 2)` is the 4-edge square.
    pub fn grid(w: usize, h: usize) -> Self {
        let idx = |x: usize, y: usize| y * w + x;
        let mut list = Vec::new();
        for y in 0..h {
            for x in 0..w {
                if x + 1 < w {
                    list.push((idx(x, y), idx(x + 1, y)));
                }
                if y + 1 < h {
                    list.push((idx(x, y), idx(x, y + 1)));
                }
            }
        }
        Self::new(w * h, &list).unwrap()
    }
}

impl Lattice for MicroGraph {
    fn vertex_count(&self) -> usize {
        self.vertices
    }

    fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    fn endpoints(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.endpoints[e];
        (u as usize, v as usize)
    }

    fn incident_edges(&self, v: usize) -> &[u32] {
        let lo = self.incident_index[v] as usize;
        let hi = self.incident_index[v + 1] as usize;
        &self.incident[lo..hi]
    }
}
