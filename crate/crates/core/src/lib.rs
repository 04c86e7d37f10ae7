//! Relative Frattini subgroups and normal edge-transitive Cayley graphs.
//!
//! The crate works with explicit finite groups (multiplication tables) and
//! provides:
//!
//! - [`group`]: builders, subgroups, normal subgroups, quotients and the Frattini subgroup;
//! - [`automorphism`]: `Aut(G)`, set stabilizers, orbits and invariance tests;
//! - [`frattini`]: connection sets, transitivity, the invariant normal lattice
//!   and the relative Frattini subgroup `Φ(G;C)`;
//! - [`cayley`]: Cayley graphs, normal quotients, graph direct products,
//!   isomorphism testing and the decomposition onto a full subdirect product;
//! - [`dihedral`]: arithmetic on `Aut(D_2n)` and the classification of
//!   4-valent normal edge-transitive Cayley graphs of dihedral groups;
//! - [`harness`]: the casebook of worked examples and JSON reports.

pub mod automorphism;
pub mod cayley;
pub mod dihedral;
pub mod error;
pub mod fixtures;
pub mod frattini;
pub mod group;
pub mod harness;
pub mod limits;
pub mod numtheory;

pub use error::{Error, Result};
pub use limits::Limits;
