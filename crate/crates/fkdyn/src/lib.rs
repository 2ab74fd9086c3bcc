//! Simulation and verification laboratory for the heat-bath dynamics of
//! the random-cluster model on d-dimensional tori.
//!
//! The crate provides:
//!
//! - periodic lattice geometry, edge configurations, and connectivity
//!   queries ([`lattice`], [`config`], [`connectivity`], [`region`]);
//! - the shared update sequence (Poisson clocks with uniform marks) and
//!   model parameters ([`stream`]);
//! - the heat-bath dynamics with its grand coupling, the percolation
//!   (q = 1) dynamics, and censored variants ([`dynamics`]);
//! - static window percolations extracted from the update sequence and
//!   their domination reports ([`percolation`]);
//! - backward-in-time history diagrams, cluster colorings, and their
//!   deterministic invariants ([`history`]);
//! - an exact-enumeration oracle for micro graphs: measures, generators,
//!   spectral gaps, distance curves ([`exact`]);
//! - desk-scale estimators: coupling/mixing curves, cutoff profiles,
//!   gap stabilization, burn-in and locality checks ([`estimate`]).

pub mod config;
pub mod connectivity;
pub mod dynamics;
pub mod error;
pub mod estimate;
pub mod exact;
pub mod history;
pub mod lattice;
pub mod percolation;
pub mod region;
pub mod stats;
pub mod stream;

pub use config::{EdgeConfig, EdgeSet};
pub use error::FkError;
pub use lattice::{Lattice, MicroGraph, TorusGeometry};
pub use stream::{EventSource, RCParams, UpdateEvent, UpdateStream};
