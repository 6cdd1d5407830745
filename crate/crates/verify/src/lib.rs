//! Brute-force oracles and criterion reporting for the acceptance suite.

use std::io::Write;

use align_lab::model::SparseGraph;

/// All permutations of `0..k` as image vectors.
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn pair_bit(k: usize, u: usize, v: usize) -> u32 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    // rank of (a, b) among the pairs of 0..k in lexicographic order
    1 << (a * (2 * k - a - 1) / 2 + (b - a - 1))
}

fn image_mask(g: &SparseGraph, p: &[usize]) -> u32 {
    g.edges().iter().fold(0, |m, &(u, v)| m | pair_bit(g.n(), p[u], p[v]))
}

/// Edge set of a graph on at most 8 vertices as a bit mask.
pub fn edge_mask(g: &SparseGraph) -> u32 {
    assert!(g.n() <= 8, "pair masks hold at most 8 vertices");
    image_mask(g, &(0..g.n()).collect::<Vec<_>>())
}

/// Smallest edge mask over all relabelings: equal iff isomorphic.
pub fn brute_form(g: &SparseGraph, perms: &[Vec<usize>]) -> u32 {
    perms.iter().map(|p| image_mask(g, p)).min().unwrap_or(0)
}

pub fn brute_automorphisms(g: &SparseGraph, perms: &[Vec<usize>]) -> u64 {
    let mask = edge_mask(g);
    perms.iter().filter(|p| image_mask(g, p) == mask).count() as u64
}

/// Prints one criterion line to the real stdout, past the test harness
/// capture, so it shows up whether or not the test passes.
pub fn report_criterion(number: u32, title: &str, pass: bool, detail: &str) {
    let line = format!("\ncriterion {number:02} {} {title}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}
