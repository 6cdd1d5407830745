use crate::error::{Error, Result};
use crate::model::permutation::Permutation;

/// Normalized unordered pair `(min, max)`.
#[inline]
pub fn pair(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph on `0..n`.
///
/// Edges are kept as lexicographically sorted normalized pairs; a CSR
/// adjacency view is built alongside.
#[derive(Debug, Clone)]
pub struct SparseGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl PartialEq for SparseGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for SparseGraph {}

impl SparseGraph {
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unchecked(n, Vec::new())
    }

    /// Builds a graph from arbitrary pairs; duplicates (in either
    /// orientation) collapse to one edge.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range for n={n}")));
            }
            list.push(pair(u, v));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_unchecked(n, list))
    }

    /// `edges` must be sorted, deduplicated and normalized.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| u < v && v < n));
        let mut degree = vec![0usize; n + 1];
        for &(u, v) in &edges {
            degree[u + 1] += 1;
            degree[v + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; 2 * edges.len()];
        for &(u, v) in &edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        SparseGraph { n, edges, offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.binary_search(&pair(u, v)).is_ok()
    }

    /// `G^sigma`: the graph with an edge `(sigma(u), sigma(v))` for every
    /// edge `(u, v)` of `self`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<SparseGraph> {
        Error::check_sizes(self.n, sigma.len())?;
        let mut edges: Vec<_> = self.edges.iter().map(|&(u, v)| pair(sigma.apply(u), sigma.apply(v))).collect();
        edges.sort_unstable();
        Ok(Self::from_sorted_unchecked(self.n, edges))
    }

    pub fn intersect(&self, other: &SparseGraph) -> Result<SparseGraph> {
        self.merge(other, |a, b| a && b)
    }

    pub fn union(&self, other: &SparseGraph) -> Result<SparseGraph> {
        self.merge(other, |a, b| a || b)
    }

    pub fn sym_diff(&self, other: &SparseGraph) -> Result<SparseGraph> {
        self.merge(other, |a, b| a != b)
    }

    /// Number of common edges, without materializing the intersection.
    pub fn common_edge_count(&self, other: &SparseGraph) -> Result<usize> {
        Error::check_sizes(self.n, other.n)?;
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.edges.len() && j < other.edges.len() {
            match self.edges[i].cmp(&other.edges[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(count)
    }

    fn merge(&self, other: &SparseGraph, keep: impl Fn(bool, bool) -> bool) -> Result<SparseGraph> {
        Error::check_sizes(self.n, other.n)?;
        let (a, b) = (&self.edges, &other.edges);
        let mut out = Vec::with_capacity(a.len().max(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (e, in_a, in_b) = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                    (x, true, true)
                }
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    (x, true, false)
                }
                (Some(_), Some(&y)) => {
                    j += 1;
                    (y, false, true)
                }
                (Some(&x), None) => {
                    i += 1;
                    (x, true, false)
                }
                (None, Some(&y)) => {
                    j += 1;
                    (y, false, true)
                }
                (None, None) => unreachable!(),
            };
            if keep(in_a, in_b) {
                out.push(e);
            }
        }
        Ok(Self::from_sorted_unchecked(self.n, out))
    }
}
