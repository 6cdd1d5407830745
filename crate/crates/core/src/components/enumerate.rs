//! Exhaustive enumeration of labeled trees through Prüfer sequences.

use std::collections::BTreeMap;

use crate::components::canonical::canonical_code_of_tree;
use crate::model::graph::SparseGraph;

fn decode_prufer(seq: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &x in seq {
        let leaf = (0..k).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every labeled tree on `0..k`, `k^(k-2)` in total.
pub fn labeled_trees(k: usize) -> Vec<SparseGraph> {
    match k {
        0 => Vec::new(),
        1 => vec![SparseGraph::empty(1)],
        2 => vec![SparseGraph::from_edges(2, [(0, 1)]).unwrap()],
        _ => {
            let len = k - 2;
            let total = k.pow(len as u32);
            let mut out = Vec::with_capacity(total);
            let mut seq = vec![0usize; len];
            for mut idx in 0..total {
                for slot in seq.iter_mut() {
                    *slot = idx % k;
                    idx /= k;
                }
                out.push(SparseGraph::from_edges(k, decode_prufer(&seq, k)).unwrap());
            }
            out
        }
    }
}

/// Canonical code and automorphism count of every unlabeled tree on `k`
/// vertices.
pub fn unlabeled_tree_codes(k: usize) -> BTreeMap<String, u64> {
    labeled_trees(k)
        .iter()
        .map(|t| {
            let c = canonical_code_of_tree(t).expect("enumerated graphs are trees");
            (c.code, c.automorphisms)
        })
        .collect()
}
