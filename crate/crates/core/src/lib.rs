//! Reachability indexing for directed graphs.
//!
//! Input digraphs are condensed to a [`graph::Dag`]; every index is built on
//! that DAG and can be checked against the brute-force closure in [`tc`]:
//!
//! * [`tree_cover`]: optimal tree cover (exact, group-batched, sampled) and
//!   multi-tree refinement, queried through interval containment.
//! * [`backbone`]: reachability backbone discovery by greedy set cover.
//! * [`hl`]: hierarchical labeling over a recursive backbone decomposition.
//! * [`dl`]: distribution labeling with pruned breadth-first broadcasts.
//! * [`query`]: hop-label intersection, GRAIL-pruned online search,
//!   backbone-based query schemes and workload generation.

pub mod backbone;
pub mod dl;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod hl;
pub mod index;
pub mod labels;
pub mod query;
pub mod tc;
pub mod tree_cover;

pub use error::{Error, Result};
pub use graph::{Dag, Direction, Vertex};
pub use labels::HopLabeling;

use rand_chacha::ChaCha8Rng;

/// All randomness in the crate flows through this portable, seedable generator.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Anything that answers `u -> v` over the vertices of one DAG.
pub trait Reachability {
    fn reaches(&self, u: Vertex, v: Vertex) -> bool;
}
