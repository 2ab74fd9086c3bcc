//! Bitsets over edge ids: configurations, regions, window percolations.

use rand::Rng;

/// A set of edges of a fixed geometry, one bit per edge id.
///
/// Configurations of the dynamics and plain edge regions are the same
/// carrier; [`EdgeConfig`] is an alias documenting intent. The partial
/// order is coordinatewise containment.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    nbits: usize,
    words: Vec<u64>,
}

/// A state of the dynamics, identified with its set of open edges.
pub type EdgeConfig = EdgeSet;

impl EdgeSet {
    pub fn empty(nbits: usize) -> Self {
        Self { nbits, words: vec![0; nbits.div_ceil(64)] }
    }

    pub fn full(nbits: usize) -> Self {
        let mut s = Self { nbits, words: vec![!0u64; nbits.div_ceil(64)] };
        s.trim();
        s
    }

    pub fn from_edges(nbits: usize, edges: &[usize]) -> Self {
        let mut s = Self::empty(nbits);
        for &e in edges {
            s.insert(e);
        }
        s
    }

    /// Independent Bernoulli(p) sample per edge.
    pub fn sample_bernoulli<R: Rng>(nbits: usize, p: f64, rng: &mut R) -> Self {
        let mut s = Self::empty(nbits);
        for e in 0..nbits {
            if rng.gen::<f64>() < p {
                s.insert(e);
            }
        }
        s
    }

    fn trim(&mut self) {
        let extra = self.words.len() * 64 - self.nbits;
        if extra > 0 {
            let last = self.words.len() - 1;
            self.words[last] &= !0u64 >> extra;
        }
    }

    pub fn len(&self) -> usize {
        self.nbits
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn get(&self, e: usize) -> bool {
        debug_assert!(e < self.nbits);
        self.words[e >> 6] >> (e & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: usize) {
        debug_assert!(e < self.nbits);
        self.words[e >> 6] |= 1u64 << (e & 63);
    }

    #[inline]
    pub fn remove(&mut self, e: usize) {
        debug_assert!(e < self.nbits);
        self.words[e >> 6] &= !(1u64 << (e & 63));
    }

    #[inline]
    pub fn assign(&mut self, e: usize, open: bool) {
        if open {
            self.insert(e);
        } else {
            self.remove(e);
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &Self) {
        assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &Self) {
        assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.subtract(other);
        s
    }

    pub fn complement(&self) -> Self {
        let mut s = Self { nbits: self.nbits, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }

    /// Coordinatewise partial order: `self(e) <= other(e)` for every edge.
    pub fn le(&self, other: &Self) -> bool {
        assert_eq!(self.nbits, other.nbits);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        assert_eq!(self.nbits, other.nbits);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(i * 64 + tz)
                }
            })
        })
    }

    pub fn to_sorted_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl std::fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EdgeSet({:?})", self.to_sorted_vec())
    }
}
