//! Random games with `n` players and two actions per player, studied through
//! the partially oriented `n`-cube they induce.
//!
//! A profile is a vertex of the hypercube; each edge joins two profiles that
//! differ in one player's action and is oriented toward the profile where that
//! player earns more (or left unoriented on a tie). Pure Nash equilibria are
//! the vertices with no outgoing edge, best-response dynamics is a walk along
//! outgoing edges, and the set of vertices reachable from a start has the law
//! of a bond-percolation cluster.
//!
//! Modules:
//!
//! - [`hypercube`]: vertex/edge indexing, Hamming balls, parity.
//! - [`rng`]: counter-based random streams used by every sampler.
//! - [`randgame`]: payoff tables, tie parameter, oriented cubes.
//! - [`format`]: the `hrg 1` / `hrp 1` text file formats.
//! - [`equilibrium`]: PNE / SPNE detection and closed-form moments.
//! - [`dynamics`]: best-response dynamics and accessibility.
//! - [`percolation`]: bond percolation, components, the coupling construction.
//! - [`exact`]: exhaustive weighted enumeration for small `n`.
//! - [`experiments`]: seeded Monte Carlo harness and statistical tests.

pub mod dynamics;
pub mod equilibrium;
mod error;
pub mod exact;
pub mod experiments;
pub mod format;
pub mod hypercube;
pub mod percolation;
pub mod randgame;
pub mod rng;

pub use error::{Error, Result};
pub use hypercube::{Dimension, EdgeRef, Parity, VertexId, VertexSet};
pub use randgame::{
    DiscreteDistribution, EdgeMark, MarkSampler, MarkSource, OrientedCube, PayoffTable,
    TieParameter,
};
