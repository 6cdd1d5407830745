use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::params::ModelParams;
use crate::seed::Seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    PoissonDelta,
    FixConcentration,
    TreeCensusConcentration,
    SmallTreeCoverage,
    GiantComponent,
    FBounds,
    MapOracle,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::PoissonDelta,
        ExperimentKind::FixConcentration,
        ExperimentKind::TreeCensusConcentration,
        ExperimentKind::SmallTreeCoverage,
        ExperimentKind::GiantComponent,
        ExperimentKind::FBounds,
        ExperimentKind::MapOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::PoissonDelta => "poisson-delta",
            ExperimentKind::FixConcentration => "fix-concentration",
            ExperimentKind::TreeCensusConcentration => "tree-census-concentration",
            ExperimentKind::SmallTreeCoverage => "small-tree-coverage",
            ExperimentKind::GiantComponent => "giant-component",
            ExperimentKind::FBounds => "f-bounds",
            ExperimentKind::MapOracle => "map-oracle",
        }
    }

    /// Tolerances used when the config does not set them.
    pub fn default_tolerances(self) -> BTreeMap<String, f64> {
        let pairs: &[(&str, f64)] = match self {
            ExperimentKind::PoissonDelta => &[
                ("mean_rel", 0.2),
                ("factorial2_rel", 0.3),
                ("gof_alpha", 0.01),
                ("corr_max", 0.05),
                ("acceptance_se", 3.0),
            ],
            ExperimentKind::FixConcentration => &[("fix_abs", 0.05)],
            ExperimentKind::TreeCensusConcentration => {
                &[("count_slack", 0.1), ("mean_rel", 0.2), ("variance_rel", 0.2)]
            }
            ExperimentKind::SmallTreeCoverage => &[("giant_abs", 0.02), ("v_gt_max", 0.02), ("small_tree_abs", 0.03)],
            ExperimentKind::GiantComponent => &[("giant_abs", 0.02)],
            ExperimentKind::FBounds => &[("t", 0.2)],
            ExperimentKind::MapOracle => &[("mean_overlap_max", 3.0), ("multiplicity_fraction", 0.6)],
        };
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    /// Smallest family size the experiment accepts.
    pub fn min_family_size(self) -> usize {
        match self {
            ExperimentKind::FixConcentration => 2,
            ExperimentKind::FBounds => 4,
            _ => 1,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment {s:?}")))
    }
}

/// Rejection conditioning applied to sampled instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conditioning {
    /// No two-colored pair.
    EmptyIntersection,
    /// `G` is connected and has a trivial automorphism group.
    ConnectedAsymmetric,
}

fn default_family_size() -> usize {
    1
}

fn default_max_conditioning_attempts() -> usize {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub params: ModelParams,
    pub replicates: usize,
    pub base_seed: Seed,
    #[serde(default = "default_family_size")]
    pub family_size: usize,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditioning: Option<Conditioning>,
    #[serde(default = "default_max_conditioning_attempts")]
    pub max_conditioning_attempts: usize,
    /// Every family member reuses the first member's seed.
    #[serde(default)]
    pub shared_member_seed: bool,
    /// Draw budget per family; `None` uses the default budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_attempts: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, params: ModelParams, replicates: usize, base_seed: u64) -> Self {
        ExperimentConfig {
            experiment,
            params,
            replicates,
            base_seed: Seed(base_seed),
            family_size: experiment.min_family_size(),
            tolerances: BTreeMap::new(),
            conditioning: None,
            max_conditioning_attempts: default_max_conditioning_attempts(),
            shared_member_seed: false,
            max_attempts: None,
        }
    }

    pub fn with_family_size(mut self, p: usize) -> Self {
        self.family_size = p;
        self
    }

    pub fn with_tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn with_conditioning(mut self, c: Conditioning) -> Self {
        self.conditioning = Some(c);
        self
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.replicates < 1 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        let min_p = self.experiment.min_family_size();
        if self.family_size < min_p {
            return Err(Error::Config(format!("{} needs family_size >= {min_p}", self.experiment)));
        }
        if self.experiment == ExperimentKind::MapOracle && self.params.n > 9 {
            return Err(Error::Config(format!(
                "map-oracle enumerates n! permutations and needs n <= 9, got {}",
                self.params.n
            )));
        }
        let known = self.experiment.default_tolerances();
        for (name, &value) in &self.tolerances {
            if !known.contains_key(name) {
                let names: Vec<_> = known.keys().cloned().collect();
                return Err(Error::Config(format!(
                    "unknown tolerance {name:?} for {} (expected one of {names:?})",
                    self.experiment
                )));
            }
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Config(format!("tolerance {name} must be positive, got {value}")));
            }
        }
        if self.max_conditioning_attempts < 1 {
            return Err(Error::Config("max_conditioning_attempts must be at least 1".into()));
        }
        Ok(())
    }

    /// Defaults overlaid with the configured tolerances.
    pub fn resolved_tolerances(&self) -> BTreeMap<String, f64> {
        let mut t = self.experiment.default_tolerances();
        t.extend(self.tolerances.iter().map(|(k, &v)| (k.clone(), v)));
        t
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.resolved_tolerances()[name]
    }

    /// SHA-256 of the canonical JSON form of the config.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn replicate_seed(&self, index: usize) -> Seed {
        self.base_seed.derive(index as u64)
    }
}
