//! Monte Carlo experiments with statistical checks.
//!
//! Each replicate derives its seed from `(base_seed, index)` and runs
//! independently, so reports do not depend on the thread count.

pub mod config;
mod experiments;
pub mod map_oracle;
pub mod report;
pub mod stats;

use rayon::prelude::*;

pub use config::{Conditioning, ExperimentConfig, ExperimentKind};
pub use map_oracle::{exhaustive_map, MapSolution};
pub use report::{
    plot_tables, read_replicates_csv, replicates_csv_string, summarize, write_replicates_csv, ColumnSummary,
    ExperimentReport, PlotTable, ReplicateRecord, TestOutcome,
};

use crate::error::{Error, Result};

/// Column names of the replicate table for a config.
pub fn columns(cfg: &ExperimentConfig) -> Vec<String> {
    experiments::columns(cfg)
}

/// Runs one replicate. Errors are returned, not recorded.
pub fn run_replicate(cfg: &ExperimentConfig, index: usize) -> Result<Vec<f64>> {
    experiments::run_replicate(cfg, cfg.replicate_seed(index))
}

/// Runs every replicate on the current rayon pool and summarizes them.
/// A failing replicate is recorded with its error and the run continues.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let columns = experiments::columns(cfg);
    let records: Vec<ReplicateRecord> = (0..cfg.replicates)
        .into_par_iter()
        .map(|index| {
            let seed = cfg.replicate_seed(index);
            match experiments::run_replicate(cfg, seed) {
                Ok(values) => ReplicateRecord { index, seed, values, error: None },
                Err(e) => ReplicateRecord { index, seed, values: Vec::new(), error: Some(e.to_string()) },
            }
        })
        .collect();
    summarize(cfg, &columns, records)
}

fn run_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<ExperimentReport> {
    if cfg.experiment != kind {
        return Err(Error::Config(format!("config is for {}, not {kind}", cfg.experiment)));
    }
    run_experiment(cfg)
}

pub fn run_poisson_delta(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_kind(cfg, ExperimentKind::PoissonDelta)
}

pub fn run_fix_concentration(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_kind(cfg, ExperimentKind::FixConcentration)
}

pub fn run_census_concentration(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_kind(cfg, ExperimentKind::TreeCensusConcentration)
}

/// Small-tree coverage or, for the giant-component kind, the giant size only.
pub fn run_coverage(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.experiment {
        ExperimentKind::GiantComponent => run_kind(cfg, ExperimentKind::GiantComponent),
        _ => run_kind(cfg, ExperimentKind::SmallTreeCoverage),
    }
}

pub fn run_f_bounds(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_kind(cfg, ExperimentKind::FBounds)
}

pub fn run_map_oracle(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_kind(cfg, ExperimentKind::MapOracle)
}
