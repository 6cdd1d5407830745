//! Graphs, permutations, the correlated sampler and likelihood weights.

pub mod giant;
pub mod graph;
pub mod instance;
pub mod likelihood;
pub mod params;
pub mod permutation;

pub use giant::solve_c;
pub use graph::SparseGraph;
pub use instance::{sample_instance, Category, CorrelatedInstance};
pub use params::ModelParams;
pub use permutation::{fix_count, overlap_equivariant, Permutation};
