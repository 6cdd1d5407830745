use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::{ExperimentConfig, ExperimentKind};
use crate::harness::experiments;
use crate::harness::stats;
use crate::seed::Seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub index: usize,
    pub seed: Seed,
    /// One value per report column; empty when the replicate failed.
    pub values: Vec<f64>,
    pub error: Option<String>,
}

impl ReplicateRecord {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub count: usize,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub min: Option<f64>,
    pub q05: Option<f64>,
    pub median: Option<f64>,
    pub q95: Option<f64>,
    pub max: Option<f64>,
}

impl ColumnSummary {
    pub fn of(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        ColumnSummary {
            count: values.len(),
            mean: stats::mean(values),
            variance: stats::variance(values),
            min: sorted.first().copied(),
            q05: stats::quantile(&sorted, 0.05),
            median: stats::quantile(&sorted, 0.5),
            q95: stats::quantile(&sorted, 0.95),
            max: sorted.last().copied(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub name: String,
    /// `None` when there was nothing to measure; such a test fails.
    pub statistic: Option<f64>,
    pub threshold: f64,
    /// How `statistic` is compared with `threshold`, e.g. `<=`.
    pub relation: String,
    pub pass: bool,
    pub detail: String,
}

impl TestOutcome {
    pub fn at_most(name: impl Into<String>, statistic: Option<f64>, threshold: f64, detail: impl Into<String>) -> Self {
        Self::compare(name, statistic, threshold, "<=", |s, t| s <= t, detail)
    }

    pub fn at_least(
        name: impl Into<String>,
        statistic: Option<f64>,
        threshold: f64,
        detail: impl Into<String>,
    ) -> Self {
        Self::compare(name, statistic, threshold, ">=", |s, t| s >= t, detail)
    }

    fn compare(
        name: impl Into<String>,
        statistic: Option<f64>,
        threshold: f64,
        relation: &str,
        holds: impl Fn(f64, f64) -> bool,
        detail: impl Into<String>,
    ) -> Self {
        let statistic = statistic.filter(|s| !s.is_nan());
        let mut detail = detail.into();
        if statistic.is_none() {
            detail = format!("no samples; {detail}");
        }
        TestOutcome {
            name: name.into(),
            pass: statistic.is_some_and(|s| holds(s, threshold)),
            statistic,
            threshold,
            relation: relation.to_string(),
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub tolerances: BTreeMap<String, f64>,
    pub crate_version: String,
    /// How replicate seeds are obtained from the base seed.
    pub seed_rule: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub columns: Vec<String>,
    pub per_replicate: Vec<ReplicateRecord>,
    pub failed_replicates: usize,
    pub aggregates: BTreeMap<String, ColumnSummary>,
    /// Experiment-specific statistics computed from the records.
    pub derived: BTreeMap<String, f64>,
    pub tests: Vec<TestOutcome>,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        !self.tests.is_empty() && self.tests.iter().all(|t| t.pass)
    }

    pub fn test(&self, name: &str) -> Option<&TestOutcome> {
        self.tests.iter().find(|t| t.name == name)
    }

    /// Values of one column over the successful replicates.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.per_replicate.iter().filter(|r| r.is_ok()).map(|r| r.values[idx]).collect())
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Builds the full report from per-replicate records. Everything except the
/// records themselves is a deterministic function of `(cfg, columns, records)`.
pub fn summarize(
    cfg: &ExperimentConfig,
    columns: &[String],
    mut records: Vec<ReplicateRecord>,
) -> Result<ExperimentReport> {
    records.sort_by_key(|r| r.index);
    for r in records.iter().filter(|r| r.is_ok()) {
        if r.values.len() != columns.len() {
            return Err(Error::SizeMismatch { left: r.values.len(), right: columns.len() });
        }
    }
    let ok: Vec<&[f64]> = records.iter().filter(|r| r.is_ok()).map(|r| r.values.as_slice()).collect();
    let failed_replicates = records.len() - ok.len();
    let aggregates = columns
        .iter()
        .enumerate()
        .map(|(j, c)| (c.clone(), ColumnSummary::of(&ok.iter().map(|row| row[j]).collect::<Vec<_>>())))
        .collect();

    let table = Table { columns, rows: &ok };
    let eval = experiments::evaluate(cfg, &table)?;
    let mut warnings = eval.warnings;
    if failed_replicates > 0 {
        warnings.insert(0, format!("{failed_replicates} of {} replicates failed", records.len()));
    }
    Ok(ExperimentReport {
        experiment: cfg.experiment,
        columns: columns.to_vec(),
        per_replicate: records,
        failed_replicates,
        aggregates,
        derived: eval.derived,
        tests: eval.tests,
        provenance: Provenance {
            config: cfg.clone(),
            config_hash: cfg.hash(),
            tolerances: cfg.resolved_tolerances(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            seed_rule: "replicate seed = base_seed.derive(index)".to_string(),
        },
        warnings,
    })
}

/// Successful rows with named columns.
pub(crate) struct Table<'a> {
    pub columns: &'a [String],
    pub rows: &'a [&'a [f64]],
}

impl Table<'_> {
    pub fn col(&self, name: &str) -> Vec<f64> {
        match self.columns.iter().position(|c| c == name) {
            Some(j) => self.rows.iter().map(|r| r[j]).collect(),
            None => Vec::new(),
        }
    }

    pub fn cols_with_prefix(&self, prefix: &str) -> Vec<(String, Vec<f64>)> {
        self.columns.iter().filter(|c| c.starts_with(prefix)).map(|c| (c.clone(), self.col(c))).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }
}

pub fn write_replicates_csv<W: Write>(columns: &[String], records: &[ReplicateRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["index".to_string(), "seed".to_string(), "error".to_string()];
    header.extend(columns.iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for r in records {
        let mut row = vec![r.index.to_string(), r.seed.0.to_string(), r.error.clone().unwrap_or_default()];
        if r.is_ok() {
            row.extend(r.values.iter().map(|v| v.to_string()));
        } else {
            row.extend(std::iter::repeat_n(String::new(), columns.len()));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn replicates_csv_string(columns: &[String], records: &[ReplicateRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_replicates_csv(columns, records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Reads `(columns, records)` back from a replicate table.
pub fn read_replicates_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<ReplicateRecord>)> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.len() < 3 || &header[0] != "index" || &header[1] != "seed" || &header[2] != "error" {
        return Err(Error::Parse { line: 1, message: "expected header starting with index,seed,error".into() });
    }
    let columns: Vec<String> = header.iter().skip(3).map(str::to_string).collect();
    let mut records = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(csv_err)?;
        let bad = |m: String| Error::Parse { line, message: m };
        let index = row[0].parse().map_err(|_| bad(format!("bad index {:?}", &row[0])))?;
        let seed = Seed(row[1].parse().map_err(|_| bad(format!("bad seed {:?}", &row[1])))?);
        let error = (!row[2].is_empty()).then(|| row[2].to_string());
        let values = if error.is_some() {
            Vec::new()
        } else {
            row.iter()
                .skip(3)
                .map(|v| v.parse::<f64>().map_err(|_| bad(format!("bad value {v:?}"))))
                .collect::<Result<Vec<_>>>()?
        };
        records.push(ReplicateRecord { index, seed, values, error });
    }
    Ok((columns, records))
}

fn csv_err(e: csv::Error) -> Error {
    match e.position() {
        Some(p) => Error::Parse { line: p.line() as usize, message: e.to_string() },
        None => Error::Parse { line: 0, message: e.to_string() },
    }
}

/// A small CSV table meant for plotting, written as `plotdata_<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl PlotTable {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn plot_tables(report: &ExperimentReport) -> Vec<PlotTable> {
    experiments::plot_tables(report)
}
