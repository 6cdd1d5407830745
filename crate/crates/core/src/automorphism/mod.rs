//! Random automorphisms of the intersection graph built from tree blocks,
//! extra double edges and the accepted families.

pub mod analysis;
pub mod block;
pub mod edges;
pub mod family;

pub use analysis::IntersectionAnalysis;
pub use block::{build_sigma, fix_decomposition, node_permutation, BlockPermutation, FixDecomposition};
pub use edges::{common_fixed_edges, common_fixed_edges_in_s, delta, EdgePartitionS};
pub use family::{default_max_attempts, generate_family, verify_family, Family, FamilyCheck};
