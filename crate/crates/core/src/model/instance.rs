use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::graph::{pair, SparseGraph};
use crate::model::params::ModelParams;
use crate::model::permutation::Permutation;
use crate::seed::{stream, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    /// Present in both graphs.
    TwoColored,
    /// Present in `G` only.
    BlueOnly,
    /// Present in `G'` only.
    RedOnly,
}

impl Category {
    pub fn code(self) -> char {
        match self {
            Category::TwoColored => 'T',
            Category::BlueOnly => 'B',
            Category::RedOnly => 'R',
        }
    }

    pub fn from_code(c: &str) -> Option<Category> {
        match c {
            "T" => Some(Category::TwoColored),
            "B" => Some(Category::BlueOnly),
            "R" => Some(Category::RedOnly),
            _ => None,
        }
    }

    pub fn in_blue(self) -> bool {
        matches!(self, Category::TwoColored | Category::BlueOnly)
    }

    pub fn in_red(self) -> bool {
        matches!(self, Category::TwoColored | Category::RedOnly)
    }
}

/// A sampled pair `(G, G')` with per-pair categories and the planted
/// relabeling `pi_star`. The observed second graph is `H = G'^{pi_star}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedInstance {
    params: ModelParams,
    seed: Seed,
    pairs: Vec<(usize, usize)>,
    categories: Vec<Category>,
    pi_star: Permutation,
}

/// Counts of sampled pairs per category.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CategoryCounts {
    pub two_colored: usize,
    pub blue_only: usize,
    pub red_only: usize,
}

impl CorrelatedInstance {
    /// Assembles an instance from explicit pairs. Pairs are normalized and
    /// sorted; a pair listed twice is rejected.
    pub fn from_parts(
        params: ModelParams,
        seed: Seed,
        pairs: impl IntoIterator<Item = (usize, usize, Category)>,
        pi_star: Permutation,
    ) -> Result<Self> {
        params.validate()?;
        Error::check_sizes(params.n, pi_star.len())?;
        let mut list: Vec<((usize, usize), Category)> = Vec::new();
        for (u, v, c) in pairs {
            if u == v || u >= params.n || v >= params.n {
                return Err(Error::invalid(format!("bad pair ({u}, {v}) for n={}", params.n)));
            }
            list.push((pair(u, v), c));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid(format!("pair {:?} listed twice", w[0].0)));
        }
        let (pairs, categories) = list.into_iter().unzip();
        Ok(CorrelatedInstance { params, seed, pairs, categories, pi_star })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn pi_star(&self) -> &Permutation {
        &self.pi_star
    }

    /// All sampled (non-absent) pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Category)> + '_ {
        self.pairs.iter().zip(&self.categories).map(|(&(u, v), &c)| (u, v, c))
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn category(&self, u: usize, v: usize) -> Option<Category> {
        self.pairs.binary_search(&pair(u, v)).ok().map(|i| self.categories[i])
    }

    pub fn counts(&self) -> CategoryCounts {
        let mut c = CategoryCounts::default();
        for cat in &self.categories {
            match cat {
                Category::TwoColored => c.two_colored += 1,
                Category::BlueOnly => c.blue_only += 1,
                Category::RedOnly => c.red_only += 1,
            }
        }
        c
    }

    fn project(&self, keep: impl Fn(Category) -> bool) -> SparseGraph {
        let edges = self.pairs().filter(|&(_, _, c)| keep(c)).map(|(u, v, _)| (u, v)).collect();
        SparseGraph::from_sorted_unchecked(self.params.n, edges)
    }

    /// Blue graph `G`.
    pub fn g(&self) -> SparseGraph {
        self.project(Category::in_blue)
    }

    /// Red graph `G'` (before relabeling).
    pub fn g_prime(&self) -> SparseGraph {
        self.project(Category::in_red)
    }

    /// `G ∧ G'`, the two-colored pairs.
    pub fn intersection(&self) -> SparseGraph {
        self.project(|c| c == Category::TwoColored)
    }

    /// Observed second graph `H = G'^{pi_star}`.
    pub fn h(&self) -> SparseGraph {
        self.g_prime().relabel(&self.pi_star).expect("pi_star has size n")
    }

    pub fn blue_only(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs().filter(|&(_, _, c)| c == Category::BlueOnly).map(|(u, v, _)| (u, v))
    }
}

/// Planted permutation for an instance of size `n` drawn from `seed`.
///
/// It depends only on `(n, seed)`, so it can be regenerated when an
/// instance is read back from its text form.
pub fn planted_permutation(n: usize, seed: Seed) -> Permutation {
    Permutation::uniform(n, &mut seed.derive(stream::PI_STAR).rng())
}

/// Samples a correlated pair.
///
/// Non-absent pairs are visited with geometric skips at rate
/// `lambda (2 - s) / n`, then split into categories in proportion
/// `s : (1 - s) : (1 - s)`. This is equivalent to an independent four-way
/// draw on every one of the `n (n - 1) / 2` pairs.
pub fn sample_instance(params: ModelParams, seed: Seed) -> Result<CorrelatedInstance> {
    params.validate()?;
    let n = params.n;
    let p = params.p_any();
    let total = (n as u64) * (n as u64 - 1) / 2;
    let mut rng = seed.derive(stream::EDGES).rng();
    let mut pairs = Vec::new();
    let mut categories = Vec::new();

    if p > 0.0 && total > 0 {
        let log_q = (-p).ln_1p();
        let width = 2.0 - params.s;
        // linear index over lexicographic pairs, tracked with its row
        let mut idx: u64 = 0;
        let mut first = true;
        let mut row = 0usize;
        let mut row_start: u64 = 0;
        loop {
            let skip = if p >= 1.0 {
                0
            } else {
                let r: f64 = 1.0 - rng.random::<f64>();
                let k = (r.ln() / log_q).floor();
                if k >= total as f64 {
                    break;
                }
                k as u64
            };
            idx = if first { skip } else { idx + 1 + skip };
            first = false;
            if idx >= total {
                break;
            }
            while idx >= row_start + (n - 1 - row) as u64 {
                row_start += (n - 1 - row) as u64;
                row += 1;
            }
            let v = row + 1 + (idx - row_start) as usize;
            let draw: f64 = rng.random::<f64>() * width;
            let cat = if draw < params.s {
                Category::TwoColored
            } else if draw < 1.0 {
                Category::BlueOnly
            } else {
                Category::RedOnly
            };
            pairs.push((row, v));
            categories.push(cat);
        }
    }

    Ok(CorrelatedInstance { params, seed, pairs, categories, pi_star: planted_permutation(n, seed) })
}
