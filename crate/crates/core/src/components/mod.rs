//! Component decomposition, tree canonical codes and the tree census.

pub mod canonical;
pub mod census;
pub mod counting;
pub mod enumerate;
pub mod partition;
pub mod union_find;

pub use canonical::{canonical_code_of_tree, canonical_tree_code, CanonicalTree};
pub use census::{build_census, TreeCensus, TreeClass, TreeMember};
pub use counting::{cayley_count, class_first_moment, class_frequency, k_cutoff};
pub use partition::{decompose, Component, ComponentPartition};
