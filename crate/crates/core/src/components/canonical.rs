//! Canonical codes for unrooted trees.
//!
//! A tree is rooted at its center (for bicentral trees, at the center whose
//! rooted code is smaller, then at the smaller vertex id) and encoded
//! bottom-up as a balanced-parenthesis string with children sorted by code.
//! The canonical labeling `psi` numbers vertices in preorder of that ordered
//! tree; siblings with equal codes are visited by increasing vertex id, which
//! makes the labeling the lexicographically smallest valid one.

use crate::error::{Error, Result};
use crate::model::graph::SparseGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalTree {
    pub code: String,
    /// `labeling[pos]` is the vertex sent to canonical position `pos`,
    /// i.e. the inverse of `psi`.
    pub labeling: Vec<usize>,
    /// Size of the automorphism group.
    pub automorphisms: u64,
}

impl CanonicalTree {
    pub fn size(&self) -> usize {
        self.labeling.len()
    }

    /// `psi(v)`, the canonical position of vertex `v`.
    pub fn position_of(&self, v: usize) -> Option<usize> {
        self.labeling.iter().position(|&x| x == v)
    }
}

struct LocalTree {
    vertices: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl LocalTree {
    fn build(g: &SparseGraph, vertices: &[usize]) -> Result<Self> {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("repeated vertex in tree component"));
        }
        let local = |v: usize| sorted.binary_search(&v).ok();
        let mut adj = vec![Vec::new(); sorted.len()];
        let mut edges = 0;
        for (i, &v) in sorted.iter().enumerate() {
            for &w in g.neighbors(v) {
                let j = local(w)
                    .ok_or_else(|| Error::invalid(format!("vertex set is not a full component: {v}-{w} leaves it")))?;
                adj[i].push(j);
                if i < j {
                    edges += 1;
                }
            }
        }
        if edges + 1 != sorted.len() {
            return Err(Error::invalid(format!(
                "component with {} vertices and {edges} edges is not a tree",
                sorted.len()
            )));
        }
        let t = LocalTree { vertices: sorted, adj };
        // connected + (k-1) edges => tree
        let mut seen = vec![false; t.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &t.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        if count != t.vertices.len() {
            return Err(Error::invalid("vertex set is not connected"));
        }
        Ok(t)
    }

    fn centers(&self) -> Vec<usize> {
        let k = self.vertices.len();
        if k <= 2 {
            return (0..k).collect();
        }
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
        let mut remaining = k;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                for &w in &self.adj[leaf] {
                    if degree[w] > 0 {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
                degree[leaf] = 0;
            }
            layer = next;
        }
        let mut c = layer;
        c.sort_unstable();
        c
    }

    /// Codes of every vertex when rooted at `root`, plus the parent array.
    fn rooted_codes(&self, root: usize) -> (Vec<String>, Vec<usize>) {
        let k = self.vertices.len();
        let mut parent = vec![usize::MAX; k];
        let mut order = Vec::with_capacity(k);
        let mut stack = vec![root];
        parent[root] = root;
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut codes = vec![String::new(); k];
        for &x in order.iter().rev() {
            let mut child_codes: Vec<&str> =
                self.adj[x].iter().filter(|&&y| parent[y] == x && y != root).map(|&y| codes[y].as_str()).collect();
            child_codes.sort_unstable();
            let mut code = String::with_capacity(2 + child_codes.iter().map(|c| c.len()).sum::<usize>());
            code.push('(');
            for c in child_codes {
                code.push_str(c);
            }
            code.push(')');
            codes[x] = code;
        }
        (codes, parent)
    }
}

/// Canonical code, labeling and automorphism count of the tree spanned by
/// `vertices` in `g`. The vertex set must be a whole connected component of
/// `g` that is a tree.
pub fn canonical_tree_code(g: &SparseGraph, vertices: &[usize]) -> Result<CanonicalTree> {
    match vertices.len() {
        0 => return Err(Error::invalid("empty vertex set")),
        1 => {
            if g.degree(vertices[0]) != 0 {
                return Err(Error::invalid("vertex set is not a full component"));
            }
            return Ok(CanonicalTree { code: "()".into(), labeling: vec![vertices[0]], automorphisms: 1 });
        }
        2 => {
            let (a, b) = (vertices[0].min(vertices[1]), vertices[0].max(vertices[1]));
            if a != b && g.neighbors(a) == [b] && g.neighbors(b) == [a] {
                return Ok(CanonicalTree { code: "(())".into(), labeling: vec![a, b], automorphisms: 2 });
            }
        }
        _ => {}
    }
    let tree = LocalTree::build(g, vertices)?;
    Ok(canonicalize(&tree))
}

/// Convenience for a graph that is itself a single tree on `0..n`.
pub fn canonical_code_of_tree(tree: &SparseGraph) -> Result<CanonicalTree> {
    let vertices: Vec<usize> = (0..tree.n()).collect();
    canonical_tree_code(tree, &vertices)
}

fn canonicalize(tree: &LocalTree) -> CanonicalTree {
    let centers = tree.centers();
    let (root, codes, parent, symmetric) = match centers.as_slice() {
        [c] => {
            let (codes, parent) = tree.rooted_codes(*c);
            (*c, codes, parent, false)
        }
        [c1, c2] => {
            let (codes1, parent1) = tree.rooted_codes(*c1);
            let (codes2, parent2) = tree.rooted_codes(*c2);
            // local indices follow vertex-id order, so c1 has the smaller id
            match codes1[*c1].cmp(&codes2[*c2]) {
                std::cmp::Ordering::Greater => (*c2, codes2, parent2, false),
                std::cmp::Ordering::Less => (*c1, codes1, parent1, false),
                std::cmp::Ordering::Equal => (*c1, codes1, parent1, true),
            }
        }
        _ => unreachable!("a tree has one or two centers"),
    };

    let k = tree.vertices.len();
    let mut labeling = Vec::with_capacity(k);
    let mut automorphisms: u64 = if symmetric { 2 } else { 1 };
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        labeling.push(tree.vertices[x]);
        let mut children: Vec<usize> = tree.adj[x].iter().copied().filter(|&y| parent[y] == x && y != root).collect();
        children.sort_unstable_by(|&a, &b| codes[a].cmp(&codes[b]).then(a.cmp(&b)));
        let mut run = 1u64;
        for w in children.windows(2) {
            if codes[w[0]] == codes[w[1]] {
                run += 1;
                automorphisms = automorphisms.saturating_mul(run);
            } else {
                run = 1;
            }
        }
        // preorder: push in reverse so the first child is visited next
        stack.extend(children.into_iter().rev());
    }

    CanonicalTree { code: codes[root].clone(), labeling, automorphisms }
}
