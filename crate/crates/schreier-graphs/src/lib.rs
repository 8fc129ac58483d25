//! Finite Schreier graphs: `d` permutations of `[n]` with `S_{i*} = S_i^{-1}`,
//! random colored lifts of a weighted base graph, and the walk kernels on both,
//! applied matrix-free.
//!
//! Direction convention, fixed everywhere:
//! `P(x,y) = sum_i p_i 1{x = alpha_i(y)}`. From `x` the walk therefore moves to
//! `alpha_i^{-1}(x) = alpha_{i*}(x)` with probability `p_i`, and a word acts by
//! `g_i -> alpha_i^{-1}`, so that projecting the tree walk `X_t` through
//! `apply_word` gives the graph walk.

mod error;
mod format;
mod graph;
mod kernel;
mod lift;

pub use error::GraphError;
pub use format::{export_graph, export_lift, import, read_file, write_file, GraphFile};
pub use graph::{random_schreier, SchreierGraph};
pub use kernel::{Kernel, SchreierKernel};
pub use lift::{random_lift, BaseGraph, ColoredWeights, LiftGraph, LiftKernel};

pub type Result<T> = std::result::Result<T, GraphError>;
