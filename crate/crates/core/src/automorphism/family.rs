use serde::Serialize;

use crate::automorphism::analysis::IntersectionAnalysis;
use crate::automorphism::block::BlockPermutation;
use crate::error::{Error, Result};
use crate::model::giant::{solve_c, DEFAULT_TOL};
use crate::model::instance::CorrelatedInstance;
use crate::model::params::ModelParams;
use crate::model::permutation::fix_count;
use crate::seed::Seed;

/// `ceil(10 p exp(lambda^2 (1-s)^2 / 2))`, about ten times the expected
/// number of draws needed to collect `p` members without extra double edges.
pub fn default_max_attempts(params: &ModelParams, p: usize) -> usize {
    (10.0 * p as f64 * params.poisson_delta_mean_uncorrected().exp()).ceil() as usize
}

#[derive(Debug, Clone)]
pub struct Family {
    pub members: Vec<BlockPermutation>,
    /// Attempt index of each member.
    pub attempt_of: Vec<usize>,
    pub attempts: usize,
}

impl Family {
    pub fn acceptance_rate(&self) -> f64 {
        self.members.len() as f64 / self.attempts.max(1) as f64
    }
}

/// Draws block permutations with seeds `seed.derive(attempt)` and keeps
/// those creating no extra double edge, until `p` are collected.
pub fn generate_family(
    inst: &CorrelatedInstance,
    analysis: &IntersectionAnalysis,
    p: usize,
    seed: Seed,
    max_attempts: usize,
) -> Result<Family> {
    if p == 0 {
        return Err(Error::invalid("family size must be at least 1"));
    }
    let mut members = Vec::with_capacity(p);
    let mut attempt_of = Vec::with_capacity(p);
    let mut attempts = 0;
    while members.len() < p && attempts < max_attempts {
        let candidate = analysis.build_sigma(seed.derive(attempts as u64))?;
        if analysis.delta(&candidate, inst)? == 0 {
            members.push(candidate);
            attempt_of.push(attempts);
        }
        attempts += 1;
    }
    if members.len() < p {
        return Err(Error::ResourceExhausted {
            requested: p,
            accepted: members.len(),
            attempts,
            acceptance_rate: members.len() as f64 / attempts.max(1) as f64,
        });
    }
    Ok(Family { members, attempt_of, attempts })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairMargin {
    pub i: usize,
    pub j: usize,
    pub fix: usize,
    pub bound: f64,
    /// `bound - fix`; negative means the pair violates the bound.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyCheck {
    pub base_common_edges: usize,
    pub member_common_edges: Vec<usize>,
    /// Every member preserves the number of common edges.
    pub edges_preserved: bool,
    pub pairs: Vec<PairMargin>,
    /// Every pair agrees on at most `(c(lambda s) + slack) n` points.
    pub fix_bounded: bool,
}

impl FamilyCheck {
    pub fn pass(&self) -> bool {
        self.edges_preserved && self.fix_bounded
    }
}

/// Checks a family for equal posterior weight (exact common-edge count
/// equality) and pairwise separation.
pub fn verify_family(family: &[BlockPermutation], inst: &CorrelatedInstance, slack: f64) -> Result<FamilyCheck> {
    let n = inst.n();
    let g = inst.g();
    let g_prime = inst.g_prime();
    let base_common_edges = g.common_edge_count(&g_prime)?;
    let member_common_edges =
        family.iter().map(|b| g.relabel(&b.sigma)?.common_edge_count(&g_prime)).collect::<Result<Vec<_>>>()?;
    let edges_preserved = member_common_edges.iter().all(|&e| e == base_common_edges);

    let c = solve_c(inst.params().mu(), DEFAULT_TOL)?;
    let bound = (c + slack) * n as f64;
    let mut pairs = Vec::new();
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let fix = fix_count(&family[i].sigma, &family[j].sigma)?;
            pairs.push(PairMargin { i, j, fix, bound, margin: bound - fix as f64 });
        }
    }
    let fix_bounded = pairs.iter().all(|p| p.margin >= 0.0);
    Ok(FamilyCheck { base_common_edges, member_common_edges, edges_preserved, pairs, fix_bounded })
}
