use crate::components::union_find::DisjointSet;
use crate::model::graph::SparseGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Sorted vertex ids.
    pub vertices: Vec<usize>,
    /// Number of edges of the induced subgraph.
    pub edge_count: usize,
}

impl Component {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count + 1 == self.vertices.len()
    }

    pub fn min_vertex(&self) -> usize {
        self.vertices[0]
    }
}

/// Connected components of a graph, split into the giant component `V_inf`,
/// the leftover non-small vertices `V_gt` and the small trees.
#[derive(Debug, Clone)]
pub struct ComponentPartition {
    n: usize,
    k_max: usize,
    /// Ordered by smallest contained vertex.
    components: Vec<Component>,
    component_of: Vec<usize>,
    giant_index: Option<usize>,
    giant_tied: bool,
    v_infinity: Vec<usize>,
    v_gt: Vec<usize>,
    fixed: Vec<bool>,
}

impl ComponentPartition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn giant_index(&self) -> Option<usize> {
        self.giant_index
    }

    /// True when several components share the largest size.
    pub fn giant_tied(&self) -> bool {
        self.giant_tied
    }

    pub fn v_infinity(&self) -> &[usize] {
        &self.v_infinity
    }

    pub fn v_gt(&self) -> &[usize] {
        &self.v_gt
    }

    /// Membership in `V_inf ∪ V_gt`, the vertices every block permutation fixes.
    pub fn is_fixed(&self, v: usize) -> bool {
        self.fixed[v]
    }

    pub fn fixed_count(&self) -> usize {
        self.v_infinity.len() + self.v_gt.len()
    }

    pub fn is_small_tree(&self, idx: usize) -> bool {
        let c = &self.components[idx];
        c.is_tree() && c.size() <= self.k_max && Some(idx) != self.giant_index
    }

    pub fn small_tree_vertex_count(&self) -> usize {
        self.n - self.fixed_count()
    }
}

/// Splits `g` into connected components with cutoff `k` for small trees.
///
/// The largest component (ties broken by smallest vertex id) is flagged as
/// the giant only when it is not itself a small tree, so an empty graph has
/// no giant.
pub fn decompose(g: &SparseGraph, k: usize) -> ComponentPartition {
    let n = g.n();
    let mut ds = DisjointSet::new(n);
    for &(u, v) in g.edges() {
        ds.union(u, v);
    }

    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Component> = Vec::new();
    let mut root_to_component = vec![usize::MAX; n];
    for (v, slot) in component_of.iter_mut().enumerate() {
        let r = ds.find(v);
        if root_to_component[r] == usize::MAX {
            root_to_component[r] = components.len();
            components.push(Component { vertices: Vec::new(), edge_count: 0 });
        }
        *slot = root_to_component[r];
        components[*slot].vertices.push(v);
    }
    for &(u, _) in g.edges() {
        components[component_of[u]].edge_count += 1;
    }

    let mut giant_index = None;
    let mut giant_tied = false;
    if let Some(max_size) = components.iter().map(Component::size).max() {
        let mut largest = components.iter().enumerate().filter(|(_, c)| c.size() == max_size);
        let (idx, c) = largest.next().expect("non-empty");
        giant_tied = largest.next().is_some();
        if !(c.is_tree() && c.size() <= k) {
            giant_index = Some(idx);
        } else {
            giant_tied = false;
        }
    }

    let mut fixed = vec![false; n];
    let mut v_infinity = Vec::new();
    let mut v_gt = Vec::new();
    for (idx, c) in components.iter().enumerate() {
        if Some(idx) == giant_index {
            v_infinity.extend_from_slice(&c.vertices);
        } else if !(c.is_tree() && c.size() <= k) {
            v_gt.extend_from_slice(&c.vertices);
        } else {
            continue;
        }
        for &v in &c.vertices {
            fixed[v] = true;
        }
    }
    v_gt.sort_unstable();

    ComponentPartition { n, k_max: k, components, component_of, giant_index, giant_tied, v_infinity, v_gt, fixed }
}
