//! Design and evaluation of inter-satellite-link topologies for satellite
//! constellations modeled as lattices on a flat torus.
//!
//! A constellation with `n_o` orbital planes of `n_s` satellites each is
//! treated as an `n_s x n_o` integer lattice with wraparound in both axes.
//! This crate provides:
//!
//! * modular lattice arithmetic and toroidal geometry ([`lattice`]),
//! * an undirected-graph type with exact BFS-based path metrics ([`graph`]),
//! * jump-set constructions for symmetric topologies: mesh grid, honeycomb,
//!   single-offset tori, circulants, and a coprime relabeling that transfers
//!   circulants onto the lattice ([`symmetric`]),
//! * average-shortest-path-length and diameter lower bounds for regular
//!   graphs, with exact rational arithmetic ([`bounds`]),
//! * exhaustive offset sweeps, random regular sampling, and simulated
//!   annealing over double edge swaps, optionally under a per-edge length
//!   budget ([`search`]),
//! * a partitioned random-graph construction that stitches locally sampled
//!   cells into a connected 4-regular topology whose every edge respects a
//!   length budget ([`prgs`]),
//! * JSON serialization of topologies ([`io`]).

pub mod bounds;
pub mod error;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod prgs;
pub mod search;
pub mod symmetric;

pub use error::{Error, Result};
pub use graph::Topology;
pub use lattice::{Constellation, Jump, LatticePoint};

/// Exact nonnegative rational, used for path-length averages and bounds.
pub type Frac = num_rational::Ratio<u128>;

/// Decimal view of a [`Frac`]; exact for the magnitudes this crate produces.
pub fn frac_f64(f: Frac) -> f64 {
    *f.numer() as f64 / *f.denom() as f64
}
