//! netform: strategic formation of heterogeneous networks.
//!
//! A two-class (major/minor) network formation game: exact rational cost
//! functions with optional survivability constraints, pairwise-stability
//! predicates and exhaustive equilibrium enumeration, turn-based dynamics
//! with monetary transfers, and topology analytics (k-cores, motifs,
//! configuration-model nulls).
//!
//! Start with the runnable programs in `examples/`, or the `netform` binary
//! for shell use.

pub mod analytics;
pub mod cli;
pub mod cost;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod rat;
pub mod stability;

pub use error::Error;
