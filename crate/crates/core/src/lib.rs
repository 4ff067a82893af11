//! Multiple patterning layout decomposition.
//!
//! The pipeline turns a rectangle layout into a layout graph
//! ([`geometry`]), inserts stitch candidates and simplifies the resulting
//! decomposition graph ([`decomp`]), then assigns `k` masks to every
//! surviving component with a distribution evolutionary algorithm
//! ([`dea`]) whose solution population is refined by tabu search
//! ([`tabu`]) and greedy partition crossover ([`crossover`]). Hidden
//! vertices are recolored on the way back out. [`oracle`] is an exact
//! branch-and-bound minimizer for small graphs.

pub mod cost;
pub mod crossover;
pub mod dea;
pub mod decomp;
mod error;
pub mod generate;
pub mod geometry;
pub mod oracle;
pub mod pipeline;
pub mod rng;
pub mod stats;
pub mod svg;
pub mod tabu;

pub use cost::{evaluate, Alpha, Cost, Solution};
pub use dea::{solve, SolverConfig};
pub use decomp::DecompositionGraph;
pub use error::{Error, Result};
pub use geometry::{Layout, Rect};

/// Mask (color) index in `0..k`.
pub type Color = usize;
