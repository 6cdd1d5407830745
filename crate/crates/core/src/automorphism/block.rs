use std::collections::BTreeMap;

use crate::components::census::{TreeCensus, TreeClass};
use crate::components::partition::ComponentPartition;
use crate::error::{Error, Result};
use crate::model::permutation::{fix_count, Permutation};
use crate::seed::Seed;

/// A random automorphism of the intersection graph that permutes
/// isomorphic small-tree components class by class.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPermutation {
    pub sigma: Permutation,
    /// Tree permutation `Sigma_T` on the `X_T` members of each class.
    pub tree_perms: BTreeMap<String, Permutation>,
    pub seed: Seed,
}

/// Draws the tree permutation of one class from the class sub-seed.
pub fn draw_tree_permutation(class: &TreeClass, seed: Seed) -> Permutation {
    Permutation::uniform(class.count(), &mut seed.derive_str(&class.code).rng())
}

/// Node permutation `sigma_T` induced by a tree permutation: member `i`
/// is sent onto member `tree_perm(i)` position by position, every vertex
/// outside the class is fixed.
pub fn node_permutation(class: &TreeClass, n: usize, tree_perm: &Permutation) -> Result<Permutation> {
    let mut images: Vec<usize> = (0..n).collect();
    write_class_images(class, tree_perm, &mut images)?;
    Permutation::from_images(images)
}

fn write_class_images(class: &TreeClass, tree_perm: &Permutation, images: &mut [usize]) -> Result<()> {
    Error::check_sizes(class.count(), tree_perm.len())?;
    for (i, member) in class.members.iter().enumerate() {
        let target = &class.members[tree_perm.apply(i)];
        for (&from, &to) in member.labeling.iter().zip(&target.labeling) {
            images[from] = to;
        }
    }
    Ok(())
}

/// Builds one block permutation: classes are visited in increasing tree
/// size, each draws a uniform tree permutation from its own sub-seed, and
/// the node maps are composed. Blocks act on disjoint vertex sets, so the
/// composition is written directly into one image array.
pub fn build_sigma(census: &TreeCensus, partition: &ComponentPartition, seed: Seed) -> Result<BlockPermutation> {
    let n = partition.n();
    let mut images: Vec<usize> = (0..n).collect();
    let mut tree_perms = BTreeMap::new();
    for class in census.classes_by_size() {
        let tree_perm = draw_tree_permutation(class, seed);
        write_class_images(class, &tree_perm, &mut images)?;
        tree_perms.insert(class.code.clone(), tree_perm);
    }
    Ok(BlockPermutation { sigma: Permutation::from_images(images)?, tree_perms, seed })
}

/// Terms of `Fix(sigma_i, sigma_j) = T_inf + T_gt + sum_T k Fix(Sigma_T^i, Sigma_T^j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixDecomposition {
    pub t_infinity: usize,
    pub t_gt: usize,
    pub fix_prime: usize,
}

impl FixDecomposition {
    pub fn total(&self) -> usize {
        self.t_infinity + self.t_gt + self.fix_prime
    }
}

pub fn fix_decomposition(
    a: &BlockPermutation,
    b: &BlockPermutation,
    census: &TreeCensus,
    partition: &ComponentPartition,
) -> Result<FixDecomposition> {
    let mut fix_prime = 0;
    for class in census.classes.values() {
        let (pa, pb) = match (a.tree_perms.get(&class.code), b.tree_perms.get(&class.code)) {
            (Some(pa), Some(pb)) => (pa, pb),
            _ => return Err(Error::invalid(format!("class {} missing from a block permutation", class.code))),
        };
        fix_prime += class.k * fix_count(pa, pb)?;
    }
    Ok(FixDecomposition { t_infinity: partition.v_infinity().len(), t_gt: partition.v_gt().len(), fix_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::{build_census, decompose};
    use crate::model::graph::SparseGraph;

    #[test]
    fn singleton_classes_give_identity() {
        // one isolated vertex, one edge, one 3-path
        let g = SparseGraph::from_edges(6, [(1, 2), (3, 4), (4, 5)]).unwrap();
        let p = decompose(&g, 3);
        let census = build_census(&p, &g).unwrap();
        let b = build_sigma(&census, &p, Seed(4)).unwrap();
        assert!(b.sigma.is_identity());
    }

    #[test]
    fn swapping_two_paths() {
        // a-b-c = 0-1-2 and d-e-f = 3-4-5
        let g = SparseGraph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let p = decompose(&g, 3);
        let census = build_census(&p, &g).unwrap();
        let class = &census.classes["(()())"];
        let swap = Permutation::from_images(vec![1, 0]).unwrap();
        let sigma = node_permutation(class, 6, &swap).unwrap();
        // both paths are labeled center-first with leaves in id order
        assert_eq!(sigma.to_cycle_notation(), "(1 4)(2 5)(3 6)");
        assert_eq!(g.relabel(&sigma).unwrap(), g);
    }

    #[test]
    fn empty_census_gives_identity() {
        let g = SparseGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p = decompose(&g, 2);
        let census = build_census(&p, &g).unwrap();
        assert!(census.is_empty());
        assert!(build_sigma(&census, &p, Seed(1)).unwrap().sigma.is_identity());
    }
}
