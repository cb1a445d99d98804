//! Statistical-mechanics graph models and cycle-space algebra.
//!
//! * [`graph`]: immutable graphs, spanning-subgraph views, grid/torus/named
//!   families and finite boxes of the Diestel-Leader graph DL(2,2).
//! * [`gf2`]: edge-indexed GF(2) vectors, reduced bases, cycle enumeration.
//! * [`models`]: Bernoulli percolation, FK-Ising (exact and heat-bath),
//!   Loop O(1), uniform even subgraphs, stochastic domination, tree survival.
//! * [`geodesics`]: distance oracles and geodesic-cycle predicates.
//! * [`dl_experiment`]: the 4n-cycle construction through the origin of a
//!   DL(2,2) box and its Monte Carlo driver.
//! * [`gensets`]: minimal relator decompositions, span-filtered generating
//!   sets of percolation clusters, k-closures.

pub mod dl_experiment;
pub mod error;
pub mod geodesics;
pub mod gensets;
pub mod gf2;
pub mod graph;
pub mod models;
pub mod stats;

pub use error::{Error, Result};
