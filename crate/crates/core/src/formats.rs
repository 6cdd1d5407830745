//! Text and JSON exchange formats. All vertex ids in files are 1-based.
//!
//! Instance text format: a header line `n lambda s seed`, then one line
//! `u v C` per sampled pair with `C` in `{T, B, R}`. The planted
//! permutation is not stored; it is regenerated from `(n, seed)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::automorphism::BlockPermutation;
use crate::components::ComponentPartition;
use crate::components::TreeCensus;
use crate::error::{Error, Result};
use crate::model::instance::{planted_permutation, Category, CorrelatedInstance};
use crate::model::params::ModelParams;
use crate::model::permutation::Permutation;
use crate::seed::Seed;

pub fn instance_to_text(inst: &CorrelatedInstance) -> String {
    let p = inst.params();
    let mut out = format!("{} {} {} {}\n", p.n, p.lambda, p.s, inst.seed());
    for (u, v, c) in inst.pairs() {
        let _ = writeln!(out, "{} {} {}", u + 1, v + 1, c.code());
    }
    out
}

pub fn instance_from_text(text: &str) -> Result<CorrelatedInstance> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad_header = |m: &str| Error::Parse { line: 1, message: format!("{m} in header {header:?}") };
    if fields.len() != 4 {
        return Err(bad_header("expected `n lambda s seed`"));
    }
    let n: usize = fields[0].parse().map_err(|_| bad_header("bad n"))?;
    let lambda: f64 = fields[1].parse().map_err(|_| bad_header("bad lambda"))?;
    let s: f64 = fields[2].parse().map_err(|_| bad_header("bad s"))?;
    let seed: u64 = fields[3].parse().map_err(|_| bad_header("bad seed"))?;
    let params = ModelParams::new(n, lambda, s)?;

    let mut pairs = Vec::new();
    for (idx, line) in lines {
        let bad = |m: String| Error::Parse { line: idx + 1, message: m };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(bad(format!("expected `u v category`, got {line:?}")));
        }
        let u: usize = f[0].parse().map_err(|_| bad(format!("bad vertex {:?}", f[0])))?;
        let v: usize = f[1].parse().map_err(|_| bad(format!("bad vertex {:?}", f[1])))?;
        if u == 0 || v == 0 || u > n || v > n {
            return Err(bad(format!("vertex out of range 1..={n}")));
        }
        let c = Category::from_code(f[2]).ok_or_else(|| bad(format!("bad category {:?}", f[2])))?;
        pairs.push((u - 1, v - 1, c));
    }
    CorrelatedInstance::from_parts(params, Seed(seed), pairs, planted_permutation(n, Seed(seed)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub n: usize,
    pub lambda: f64,
    pub s: f64,
    pub seed: u64,
    /// `(u, v, category)` with 1-based vertices.
    pub pairs: Vec<(usize, usize, String)>,
    /// 1-based images `pi_star(i)` for `i = 1..=n`.
    pub pi_star: Vec<usize>,
}

impl InstanceJson {
    pub fn from_instance(inst: &CorrelatedInstance) -> Self {
        let p = inst.params();
        InstanceJson {
            n: p.n,
            lambda: p.lambda,
            s: p.s,
            seed: inst.seed().0,
            pairs: inst.pairs().map(|(u, v, c)| (u + 1, v + 1, c.code().to_string())).collect(),
            pi_star: inst.pi_star().images().iter().map(|x| x + 1).collect(),
        }
    }

    pub fn into_instance(self) -> Result<CorrelatedInstance> {
        let params = ModelParams::new(self.n, self.lambda, self.s)?;
        let pi_star = Permutation::from_images(
            self.pi_star
                .iter()
                .map(|&x| x.checked_sub(1).ok_or_else(|| Error::invalid("0 in pi_star")))
                .collect::<Result<_>>()?,
        )?;
        let pairs = self
            .pairs
            .iter()
            .map(|(u, v, c)| {
                let cat = Category::from_code(c).ok_or_else(|| Error::invalid(format!("bad category {c:?}")))?;
                if *u == 0 || *v == 0 {
                    return Err(Error::invalid("vertices are 1-based"));
                }
                Ok((u - 1, v - 1, cat))
            })
            .collect::<Result<Vec<_>>>()?;
        CorrelatedInstance::from_parts(params, Seed(self.seed), pairs, pi_star)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusClassJson {
    pub k: usize,
    #[serde(rename = "X")]
    pub x: usize,
    pub a: u64,
    /// 1-based root vertex (canonical position 0) of each member.
    pub member_roots: Vec<usize>,
}

/// Census export keyed by canonical code.
pub fn census_to_json(census: &TreeCensus) -> BTreeMap<String, CensusClassJson> {
    census
        .classes
        .iter()
        .map(|(code, class)| {
            (
                code.clone(),
                CensusClassJson {
                    k: class.k,
                    x: class.count(),
                    a: class.automorphism_count,
                    member_roots: class.members.iter().map(|m| m.root() + 1).collect(),
                },
            )
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyMemberJson {
    pub seed: u64,
    pub attempt: usize,
    pub delta: usize,
    pub cycles: String,
    /// 1-based tree permutation of each class.
    pub tree_perms: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyJson {
    pub instance_seed: u64,
    pub builder_seed: u64,
    pub k_max: usize,
    pub fixed_vertices: usize,
    pub members: Vec<FamilyMemberJson>,
}

pub fn family_member_json(member: &BlockPermutation, attempt: usize, delta: usize) -> FamilyMemberJson {
    FamilyMemberJson {
        seed: member.seed.0,
        attempt,
        delta,
        cycles: member.sigma.to_cycle_notation(),
        tree_perms: member
            .tree_perms
            .iter()
            .map(|(code, p)| (code.clone(), p.images().iter().map(|x| x + 1).collect()))
            .collect(),
    }
}

pub fn family_json(
    inst: &CorrelatedInstance,
    builder_seed: Seed,
    partition: &ComponentPartition,
    members: Vec<FamilyMemberJson>,
) -> FamilyJson {
    FamilyJson {
        instance_seed: inst.seed().0,
        builder_seed: builder_seed.0,
        k_max: partition.k_max(),
        fixed_vertices: partition.fixed_count(),
        members,
    }
}
