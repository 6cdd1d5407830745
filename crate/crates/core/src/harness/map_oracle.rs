//! Exhaustive maximum-a-posteriori alignment for tiny graphs.

use crate::error::{Error, Result};
use crate::model::graph::SparseGraph;
use crate::model::permutation::Permutation;

/// Largest `n` accepted by the exhaustive search.
pub const MAX_N: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct MapSolution {
    /// `max_pi e(G^pi ∧ H)`.
    pub max_common: usize,
    /// Number of permutations attaining the maximum.
    pub multiplicity: u64,
    /// Lexicographically smallest maximizer (by image sequence).
    pub argmax: Permutation,
}

/// Rearranges `a` into the next permutation in lexicographic order.
/// Returns `false` after the last one.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn adjacency_masks(h: &SparseGraph) -> Vec<u32> {
    let mut adj = vec![0u32; h.n()];
    for &(u, v) in h.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

fn check_size(g: &SparseGraph, h: &SparseGraph) -> Result<()> {
    Error::check_sizes(g.n(), h.n())?;
    if g.n() > MAX_N {
        return Err(Error::invalid(format!("exhaustive search needs n <= {MAX_N}, got {}", g.n())));
    }
    Ok(())
}

/// Scans all `n!` relabelings `pi` of `g` and maximizes the number of
/// edges `(pi(u), pi(v))` present in `h`.
pub fn exhaustive_map(g: &SparseGraph, h: &SparseGraph) -> Result<MapSolution> {
    check_size(g, h)?;
    let adj = adjacency_masks(h);
    let mut images: Vec<usize> = (0..g.n()).collect();
    let mut best = 0usize;
    let mut multiplicity = 0u64;
    let mut argmax = images.clone();
    loop {
        let common = g.edges().iter().filter(|&&(u, v)| adj[images[u]] >> images[v] & 1 == 1).count();
        if common > best || multiplicity == 0 {
            best = common;
            multiplicity = 1;
            argmax.copy_from_slice(&images);
        } else if common == best {
            multiplicity += 1;
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    Ok(MapSolution { max_common: best, multiplicity, argmax: Permutation::from_images(argmax)? })
}

/// Number of automorphisms of `g`, counting stops once `limit` is reached.
pub fn automorphism_count(g: &SparseGraph, limit: u64) -> Result<u64> {
    check_size(g, g)?;
    let adj = adjacency_masks(g);
    let mut images: Vec<usize> = (0..g.n()).collect();
    let mut count = 0;
    loop {
        if g.edges().iter().all(|&(u, v)| adj[images[u]] >> images[v] & 1 == 1) {
            count += 1;
            if count >= limit {
                return Ok(count);
            }
        }
        if !next_permutation(&mut images) {
            return Ok(count);
        }
    }
}
