//! The shared randomness of all couplings: rate-1 Poisson clocks per
//! edge with i.i.d. uniform marks, deterministic under a seed.
//!
//! Realized as one global Poisson process of rate `|E|` with uniform
//! edge labels, which has the right per-edge marginals by superposition
//! and thinning. [`EventSource`] streams events without storing them;
//! [`UpdateStream`] materializes the list with a per-edge index for
//! window slicing and backward traversal.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::FkError;
use crate::lattice::Lattice;

/// Model parameters and the derived quantities used throughout.
///
/// `delta` is the time-discretization unit, `p^{-1/2}` unless
/// overridden; `p_perc` is the critical bond-percolation probability of
/// the ambient infinite lattice, looked up per dimension (d = 2: 0.5,
/// d = 3: 0.2488) and overridable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RCParams {
    pub p: f64,
    pub q: f64,
    pub delta: f64,
    pub p_perc: f64,
}

impl RCParams {
    pub fn new(p: f64, q: f64, dimension: usize) -> Result<Self, FkError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(FkError::BadParameter(format!("p = {p} outside (0, 1)")));
        }
        if !(q >= 1.0) {
            return Err(FkError::BadParameter(format!("q = {q} below 1")));
        }
        let p_perc = match dimension {
            1 => 1.0,
            2 => 0.5,
            3 => 0.2488,
            _ => {
                return Err(FkError::BadParameter(format!(
                    "no percolation threshold table entry for d = {dimension}; set p_perc explicitly"
                )))
            }
        };
        Ok(Self { p, q, delta: p.powf(-0.5), p_perc })
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        assert!(delta > 0.0);
        self.delta = delta;
        self
    }

    pub fn with_p_perc(mut self, p_perc: f64) -> Self {
        assert!(p_perc > 0.0 && p_perc <= 1.0);
        self.p_perc = p_perc;
        self
    }

    /// Conditional open probability at a cut-edge.
    pub fn p_star(&self) -> f64 {
        self.p / (self.q * (1.0 - self.p) + self.p)
    }

    /// Open probability of an oblivious update given it was oblivious.
    pub fn p_bar(&self) -> f64 {
        let ps = self.p_star();
        ps / (1.0 - self.p + ps)
    }

    /// Window endpoint `tau_i = i * delta`.
    pub fn tau(&self, i: usize) -> f64 {
        i as f64 * self.delta
    }

    /// Subcritical envelope level `(p + p_perc) / 2`.
    pub fn p_init(&self) -> f64 {
        0.5 * (self.p + self.p_perc)
    }

    /// Burn-in time solving `e^{-t} + p (1 - e^{-t}) = p_init`;
    /// infinite when `p >= p_perc` (the envelope never applies).
    pub fn t_init(&self) -> f64 {
        let pi = self.p_init();
        if pi <= self.p {
            return f64::INFINITY;
        }
        ((1.0 - self.p) / (pi - self.p)).ln()
    }
}

/// One clock ring: which edge, when, and the uniform mark.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdateEvent {
    pub edge: usize,
    pub time: f64,
    pub mark: f64,
}

/// Streaming generator of the global update process in time order.
/// Identical `(edge_count, horizon, seed)` always replays the same
/// sequence; [`UpdateStream::generate`] is exactly `collect()` of this.
pub struct EventSource {
    rng: ChaCha12Rng,
    edge_count: usize,
    horizon: f64,
    t: f64,
    exhausted: bool,
}

impl EventSource {
    pub fn new(edge_count: usize, horizon: f64, seed: u64) -> Result<Self, FkError> {
        if !(horizon > 0.0) {
            return Err(FkError::BadParameter(format!("horizon = {horizon} must be positive")));
        }
        if edge_count == 0 {
            return Err(FkError::BadGeometry("no edges".into()));
        }
        Ok(Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
            edge_count,
            horizon,
            t: 0.0,
            exhausted: false,
        })
    }
}

impl Iterator for EventSource {
    type Item = UpdateEvent;

    fn next(&mut self) -> Option<UpdateEvent> {
        if self.exhausted {
            return None;
        }
        let rate = self.edge_count as f64;
        // Exponential gap by inversion; redraw on the measure-zero ties
        // so event times stay strictly increasing.
        let next_t = loop {
            let u: f64 = self.rng.gen();
            let gap = -(1.0 - u).ln() / rate;
            let cand = self.t + gap;
            if cand > self.t {
                break cand;
            }
        };
        if next_t > self.horizon {
            self.exhausted = true;
            return None;
        }
        self.t = next_t;
        let edge = self.rng.gen_range(0..self.edge_count);
        let mark: f64 = self.rng.gen();
        Some(UpdateEvent { edge, time: next_t, mark })
    }
}

/// Derive an independent substream seed for a replica index.
/// SplitMix64 step, the usual seed-sequence construction.
pub fn replica_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Materialized update sequence over `(0, horizon]` with a per-edge
/// index. Immutable after construction.
#[derive(Clone, Debug)]
pub struct UpdateStream {
    edge_count: usize,
    horizon: f64,
    seed: u64,
    events: Vec<UpdateEvent>,
    per_edge: Vec<Vec<u32>>,
}

impl UpdateStream {
    pub fn generate<L: Lattice>(g: &L, horizon: f64, seed: u64) -> Result<Self, FkError> {
        let source = EventSource::new(g.edge_count(), horizon, seed)?;
        let events: Vec<UpdateEvent> = source.collect();
        Ok(Self::index(g.edge_count(), horizon, seed, events))
    }

    /// Build a stream from explicit events (hand-built scenarios, replay
    /// of a binary dump). Events must be strictly time-sorted.
    pub fn from_events(
        edge_count: usize,
        horizon: f64,
        events: Vec<UpdateEvent>,
    ) -> Result<Self, FkError> {
        for w in events.windows(2) {
            if w[0].time >= w[1].time {
                return Err(FkError::BadParameter("events not strictly time-sorted".into()));
            }
        }
        for ev in &events {
            if ev.edge >= edge_count {
                return Err(FkError::BadParameter(format!("edge {} out of range", ev.edge)));
            }
            if !(ev.time > 0.0 && ev.time <= horizon) {
                return Err(FkError::BadParameter(format!("time {} outside (0, horizon]", ev.time)));
            }
            if !(0.0..=1.0).contains(&ev.mark) {
                return Err(FkError::BadParameter(format!("mark {} outside [0, 1]", ev.mark)));
            }
        }
        Ok(Self::index(edge_count, horizon, 0, events))
    }

    fn index(edge_count: usize, horizon: f64, seed: u64, events: Vec<UpdateEvent>) -> Self {
        let mut per_edge = vec![Vec::new(); edge_count];
        for (i, ev) in events.iter().enumerate() {
            per_edge[ev.edge].push(i as u32);
        }
        Self { edge_count, horizon, seed, events, per_edge }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn events(&self) -> &[UpdateEvent] {
        &self.events
    }

    /// All events with time in `(t1, t2]`, every edge, time-sorted.
    pub fn events_between(&self, t1: f64, t2: f64) -> &[UpdateEvent] {
        let lo = self.events.partition_point(|ev| ev.time <= t1);
        let hi = self.events.partition_point(|ev| ev.time <= t2);
        &self.events[lo..hi]
    }

    /// Update sequence of one edge in `(t1, t2]`.
    pub fn slice(&self, t1: f64, t2: f64, e: usize) -> Result<Vec<UpdateEvent>, FkError> {
        if !(0.0 <= t1 && t1 <= t2) {
            return Err(FkError::InvertedInterval(t1, t2));
        }
        if t2 > self.horizon {
            return Err(FkError::HorizonExceeded { needed: t2, horizon: self.horizon });
        }
        Ok(self.edge_events_between(e, t1, t2).map(|i| self.events[i]).collect())
    }

    fn edge_range(&self, e: usize, t1: f64, t2: f64) -> (usize, usize) {
        let idx = &self.per_edge[e];
        let lo = idx.partition_point(|&i| self.events[i as usize].time <= t1);
        let hi = idx.partition_point(|&i| self.events[i as usize].time <= t2);
        (lo, hi)
    }

    fn edge_events_between(&self, e: usize, t1: f64, t2: f64) -> impl Iterator<Item = usize> + '_ {
        let (lo, hi) = self.edge_range(e, t1, t2);
        self.per_edge[e][lo..hi].iter().map(|&i| i as usize)
    }

    /// Whether `e` rings at all in `(t1, t2]`.
    pub fn has_event_in(&self, e: usize, t1: f64, t2: f64) -> bool {
        let (lo, hi) = self.edge_range(e, t1, t2);
        hi > lo
    }

    /// Last event of `e` in `(t1, t2]`, if any.
    pub fn last_update_in(&self, e: usize, t1: f64, t2: f64) -> Option<UpdateEvent> {
        let (lo, hi) = self.edge_range(e, t1, t2);
        if hi > lo {
            Some(self.events[self.per_edge[e][hi - 1] as usize])
        } else {
            None
        }
    }

    /// Last event of `e` with time `<= t`, if any.
    pub fn last_update(&self, e: usize, t: f64) -> Option<UpdateEvent> {
        self.last_update_in(e, 0.0, t)
    }

    /// Binary dump: little-endian `(u32 edge, f64 time, f64 mark)`
    /// records in time order.
    pub fn write_binary<W: Write>(&self, w: &mut W) -> Result<(), FkError> {
        for ev in &self.events {
            w.write_all(&(ev.edge as u32).to_le_bytes())?;
            w.write_all(&ev.time.to_le_bytes())?;
            w.write_all(&ev.mark.to_le_bytes())?;
        }
        Ok(())
    }

    /// Rebuild a stream from a binary dump.
    pub fn read_binary<R: Read>(
        r: &mut R,
        edge_count: usize,
        horizon: f64,
    ) -> Result<Self, FkError> {
        let mut events = Vec::new();
        let mut rec = [0u8; 20];
        loop {
            match read_exact_or_eof(r, &mut rec)? {
                false => break,
                true => {
                    let edge = u32::from_le_bytes(rec[0..4].try_into().unwrap()) as usize;
                    let time = f64::from_le_bytes(rec[4..12].try_into().unwrap());
                    let mark = f64::from_le_bytes(rec[12..20].try_into().unwrap());
                    events.push(UpdateEvent { edge, time, mark });
                }
            }
        }
        Self::from_events(edge_count, horizon, events)
    }
}

fn read_exact_or_eof<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<bool, FkError> {
    let mut filled = 0;
    while filled < buf.len() {
        let n = r.read(&mut buf[filled..])?;
        if n == 0 {
            if filled == 0 {
                return Ok(false);
            }
            return Err(FkError::Io(std::io::Error::new(
                std::io::ErrorKind::UnexpectedEof,
                "truncated record",
            )));
        }
        filled += n;
    }
    Ok(true)
}
