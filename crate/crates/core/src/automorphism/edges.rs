//! The pair set `S` outside the fixed vertices, extra double edges and
//! common fixed edges.

use std::collections::BTreeSet;

use crate::components::partition::ComponentPartition;
use crate::error::{Error, Result};
use crate::model::graph::pair;
use crate::model::instance::{Category, CorrelatedInstance};
use crate::model::permutation::Permutation;

/// Implicit view of `S = S_in ∪ S_out`: `S_in` holds the pairs with both
/// endpoints outside `V_inf ∪ V_gt`, `S_out` the pairs with exactly one.
///
/// The sets are quadratic in `n`, so membership is answered from a vertex
/// mask and the pairs are only listed on demand.
#[derive(Debug, Clone)]
pub struct EdgePartitionS {
    fixed: Vec<bool>,
    fixed_count: usize,
}

impl EdgePartitionS {
    pub fn from_partition(partition: &ComponentPartition) -> Self {
        let fixed: Vec<bool> = (0..partition.n()).map(|v| partition.is_fixed(v)).collect();
        Self::from_mask(fixed)
    }

    /// `fixed[v]` marks membership in `V_inf ∪ V_gt`.
    pub fn from_mask(fixed: Vec<bool>) -> Self {
        let fixed_count = fixed.iter().filter(|&&f| f).count();
        EdgePartitionS { fixed, fixed_count }
    }

    pub fn n(&self) -> usize {
        self.fixed.len()
    }

    /// `n'`, the number of vertices the block permutations act on.
    pub fn n_prime(&self) -> usize {
        self.n() - self.fixed_count
    }

    pub fn is_fixed(&self, v: usize) -> bool {
        self.fixed[v]
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        u != v && !(self.fixed[u] && self.fixed[v])
    }

    pub fn in_s_in(&self, u: usize, v: usize) -> bool {
        u != v && !self.fixed[u] && !self.fixed[v]
    }

    pub fn in_s_out(&self, u: usize, v: usize) -> bool {
        u != v && self.fixed[u] != self.fixed[v]
    }

    pub fn in_count(&self) -> u64 {
        let m = self.n_prime() as u64;
        m * m.saturating_sub(1) / 2
    }

    pub fn out_count(&self) -> u64 {
        self.n_prime() as u64 * self.fixed_count as u64
    }

    pub fn len(&self) -> u64 {
        self.in_count() + self.out_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lists `S_in` in lexicographic order. Quadratic; meant for small `n`.
    pub fn iter_in(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| self.in_s_in(u, v))
    }

    /// Lists `S_out` in lexicographic order. Quadratic; meant for small `n`.
    pub fn iter_out(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| self.in_s_out(u, v))
    }
}

/// Number of extra double edges created by relabeling `G` with `sigma`:
/// blue-only pairs of `S` whose image is a red-only pair.
pub fn delta(sigma: &Permutation, inst: &CorrelatedInstance, s: &EdgePartitionS) -> Result<usize> {
    Error::check_sizes(sigma.len(), inst.n())?;
    Error::check_sizes(s.n(), inst.n())?;
    Ok(inst
        .blue_only()
        .filter(|&(u, v)| s.contains(u, v))
        .filter(|&(u, v)| inst.category(sigma.apply(u), sigma.apply(v)) == Some(Category::RedOnly))
        .count())
}

fn check_family(sigmas: &[&Permutation]) -> Result<usize> {
    let first = sigmas.first().ok_or_else(|| Error::invalid("at least one permutation is required"))?;
    for s in sigmas {
        Error::check_sizes(first.len(), s.len())?;
    }
    Ok(first.len())
}

/// Counts the pairs of `w` whose unordered image is the same under every
/// permutation of `sigmas`. Direct enumeration over `w`.
pub fn common_fixed_edges(w: impl IntoIterator<Item = (usize, usize)>, sigmas: &[&Permutation]) -> Result<usize> {
    check_family(sigmas)?;
    let (first, rest) = sigmas.split_first().expect("non-empty");
    Ok(w.into_iter()
        .filter(|&(u, v)| {
            let image = pair(first.apply(u), first.apply(v));
            rest.iter().all(|s| pair(s.apply(u), s.apply(v)) == image)
        })
        .count())
}

/// Same count as [`common_fixed_edges`] over the whole of `S`, in time
/// linear in `n` per permutation pair.
///
/// With `tau_i = sigma_i^-1 ∘ sigma_1`, a pair is a common fixed edge iff
/// each `tau_i` either fixes both endpoints or swaps them. Pairs fixed by
/// every `tau_i` are counted in closed form; pairs swapped by some `tau_i`
/// are 2-cycles of that `tau_i` and are enumerated.
pub fn common_fixed_edges_in_s(s: &EdgePartitionS, sigmas: &[&Permutation]) -> Result<u64> {
    let n = check_family(sigmas)?;
    Error::check_sizes(n, s.n())?;
    if sigmas.len() == 1 {
        return Ok(s.len());
    }
    let first = sigmas[0];
    let taus: Vec<Vec<usize>> =
        sigmas[1..].iter().map(|sig| (0..n).map(|u| sig.apply_inverse(first.apply(u))).collect()).collect();

    let fixed_by_all = |u: usize| taus.iter().all(|t| t[u] == u);
    let (mut all_fixed, mut all_fixed_outside_s) = (0u64, 0u64);
    for u in 0..n {
        if fixed_by_all(u) {
            all_fixed += 1;
            if s.is_fixed(u) {
                all_fixed_outside_s += 1;
            }
        }
    }
    let choose2 = |m: u64| m * m.saturating_sub(1) / 2;
    let mut count = choose2(all_fixed) - choose2(all_fixed_outside_s);

    let mut swapped = BTreeSet::new();
    for t in &taus {
        for u in 0..n {
            let v = t[u];
            if u < v && t[v] == u {
                swapped.insert((u, v));
            }
        }
    }
    for (u, v) in swapped {
        let consistent = taus.iter().all(|t| (t[u] == u && t[v] == v) || (t[u] == v && t[v] == u));
        if consistent && s.contains(u, v) {
            count += 1;
        }
    }
    Ok(count)
}
