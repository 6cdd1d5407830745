use std::collections::BTreeMap;

use crate::components::canonical::canonical_tree_code;
use crate::components::partition::ComponentPartition;
use crate::error::Result;
use crate::model::graph::SparseGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeMember {
    /// Index into `ComponentPartition::components`.
    pub component: usize,
    /// `labeling[pos]` is the member vertex at canonical position `pos`.
    pub labeling: Vec<usize>,
}

impl TreeMember {
    pub fn root(&self) -> usize {
        self.labeling[0]
    }
}

/// All small-tree components isomorphic to one unlabeled tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeClass {
    pub code: String,
    pub k: usize,
    pub automorphism_count: u64,
    /// Ordered by smallest member vertex.
    pub members: Vec<TreeMember>,
}

impl TreeClass {
    /// Number of components in the class, `X_T`.
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCensus {
    pub k_max: usize,
    pub classes: BTreeMap<String, TreeClass>,
}

impl TreeCensus {
    /// Classes in increasing size, ties by code.
    pub fn classes_by_size(&self) -> Vec<&TreeClass> {
        let mut v: Vec<&TreeClass> = self.classes.values().collect();
        v.sort_by(|a, b| a.k.cmp(&b.k).then_with(|| a.code.cmp(&b.code)));
        v
    }

    pub fn count(&self, code: &str) -> usize {
        self.classes.get(code).map_or(0, TreeClass::count)
    }

    /// `sum_T k(T) X_T`.
    pub fn covered_vertices(&self) -> usize {
        self.classes.values().map(|c| c.k * c.count()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Groups every small-tree component of `g` by canonical code.
pub fn build_census(partition: &ComponentPartition, g: &SparseGraph) -> Result<TreeCensus> {
    let mut classes: BTreeMap<String, TreeClass> = BTreeMap::new();
    for (idx, component) in partition.components().iter().enumerate() {
        if !partition.is_small_tree(idx) {
            continue;
        }
        let canon = canonical_tree_code(g, &component.vertices)?;
        let member = TreeMember { component: idx, labeling: canon.labeling };
        match classes.get_mut(&canon.code) {
            Some(class) => class.members.push(member),
            None => {
                classes.insert(
                    canon.code.clone(),
                    TreeClass {
                        code: canon.code,
                        k: component.size(),
                        automorphism_count: canon.automorphisms,
                        members: vec![member],
                    },
                );
            }
        }
    }
    Ok(TreeCensus { k_max: partition.k_max(), classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::partition::decompose;

    #[test]
    fn empty_graph_has_one_class() {
        let g = SparseGraph::empty(7);
        let census = build_census(&decompose(&g, 2), &g).unwrap();
        assert_eq!(census.classes.len(), 1);
        assert_eq!(census.count("()"), 7);
    }

    #[test]
    fn paths_and_star() {
        // two 4-paths and one 4-star
        let g = SparseGraph::from_edges(12, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7), (8, 9), (8, 10), (8, 11)])
            .unwrap();
        let p = decompose(&g, 4);
        // all three are 4-vertex trees so the tie leaves no giant
        assert!(p.giant_index().is_none());
        let census = build_census(&p, &g).unwrap();
        let counts: Vec<(usize, usize)> = census.classes_by_size().iter().map(|c| (c.k, c.count())).collect();
        assert_eq!(census.classes.len(), 2);
        let mut sorted_counts: Vec<usize> = counts.iter().map(|c| c.1).collect();
        sorted_counts.sort();
        assert_eq!(sorted_counts, vec![1, 2]);
        let star = census.classes.values().find(|c| c.automorphism_count == 6).unwrap();
        assert_eq!(star.count(), 1);
        assert_eq!(star.members[0].root(), 8);
        assert_eq!(census.covered_vertices(), 12);
    }

    #[test]
    fn conservation_with_giant_and_cycles() {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 1)).collect();
        edges.extend([(6, 7), (7, 8), (6, 8), (9, 10)]);
        let g = SparseGraph::from_edges(13, edges).unwrap();
        let p = decompose(&g, 3);
        let census = build_census(&p, &g).unwrap();
        assert_eq!(census.covered_vertices() + p.fixed_count(), 13);
        assert_eq!(census.count("()"), 2);
        assert_eq!(census.count("(())"), 1);
    }
}
