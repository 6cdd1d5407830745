use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use align_lab::automorphism::{default_max_attempts, delta, generate_family, verify_family, IntersectionAnalysis};
use align_lab::formats::{
    census_to_json, family_json, family_member_json, instance_from_text, instance_to_text, InstanceJson,
};
use align_lab::harness::{
    plot_tables, read_replicates_csv, run_experiment, summarize, write_replicates_csv, ExperimentConfig,
    ExperimentKind, ExperimentReport,
};
use align_lab::model::{sample_instance, CorrelatedInstance, ModelParams};
use align_lab::Seed;

#[derive(Parser)]
#[command(name = "align-lab", version, about = "Correlated sparse graph alignment experiments")]
struct Cli {
    /// Worker threads (overrides ALIGN_LAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct InstanceSource {
    /// Read the instance from a text file instead of sampling it.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a correlated pair and write instance.txt.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write instance.json, which includes the planted permutation.
        #[arg(long)]
        json: bool,
    },
    /// Write the small-tree census of the intersection graph as census.json.
    Census {
        #[command(flatten)]
        source: InstanceSource,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Build a family of block permutations with no extra double edges.
    BuildPerms {
        #[command(flatten)]
        source: InstanceSource,
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Seed of the permutation builder (defaults to the instance seed).
        #[arg(long)]
        builder_seed: Option<u64>,
        #[arg(long)]
        max_attempts: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a Monte Carlo experiment.
    Experiment {
        /// One of: poisson-delta, fix-concentration, tree-census-concentration,
        /// small-tree-coverage, giant-component, f-bounds, map-oracle.
        name: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Exit with status 3 when a statistical test fails.
        #[arg(long)]
        strict: bool,
    },
    /// Recompute report.json from a config and a replicates.csv table.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "replicates.csv")]
        replicates_csv: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn params_from(model: &ModelArgs) -> Result<(ModelParams, Seed)> {
    let (Some(n), Some(lambda), Some(s)) = (model.n, model.lambda, model.s) else {
        bail!("--n, --lambda and --s are required");
    };
    Ok((ModelParams::new(n, lambda, s)?, Seed(model.seed.unwrap_or(0))))
}

fn load_instance(src: &InstanceSource) -> Result<CorrelatedInstance> {
    match &src.instance {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(instance_from_text(&text).with_context(|| format!("parsing {}", path.display()))?)
        }
        None => {
            let (params, seed) = params_from(&src.model)?;
            Ok(sample_instance(params, seed)?)
        }
    }
}

fn write(out: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let path = out.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_outputs(out: &Path, report: &ExperimentReport) -> Result<()> {
    let mut csv = Vec::new();
    write_replicates_csv(&report.columns, &report.per_replicate, &mut csv)?;
    write(out, "replicates.csv", std::str::from_utf8(&csv)?)?;
    write(out, "report.json", &report.to_json_pretty()?)?;
    for t in plot_tables(report) {
        write(out, &format!("plotdata_{}.csv", t.name), &t.to_csv())?;
    }
    Ok(())
}

fn print_tests(report: &ExperimentReport) {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for t in &report.tests {
        let stat = t.statistic.map_or("none".to_string(), |s| format!("{s:.6}"));
        println!(
            "{} {}: {} {} {} ({})",
            if t.pass { "PASS" } else { "FAIL" },
            t.name,
            stat,
            t.relation,
            t.threshold,
            t.detail
        );
    }
}

fn experiment_config(
    name: &str,
    config: Option<&Path>,
    model: &ModelArgs,
    replicates: Option<usize>,
    p: Option<usize>,
) -> Result<ExperimentConfig> {
    let kind: ExperimentKind = name.parse()?;
    let mut cfg = match config {
        Some(path) => {
            let cfg = ExperimentConfig::from_file(path)?;
            if cfg.experiment != kind {
                bail!("{} configures {}, not {kind}", path.display(), cfg.experiment);
            }
            cfg
        }
        None => {
            let (params, seed) = params_from(model)?;
            ExperimentConfig::new(kind, params, 100, seed.0)
        }
    };
    if let Some(n) = model.n {
        cfg.params.n = n;
    }
    if let Some(l) = model.lambda {
        cfg.params.lambda = l;
    }
    if let Some(s) = model.s {
        cfg.params.s = s;
    }
    if let Some(seed) = model.seed {
        cfg.base_seed = Seed(seed);
    }
    if let Some(r) = replicates {
        cfg.replicates = r;
    }
    if let Some(p) = p {
        cfg.family_size = p;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    let threads = match threads {
        Some(t) => Some(t),
        None => match std::env::var("ALIGN_LAB_THREADS") {
            Ok(v) => Some(v.parse().with_context(|| format!("ALIGN_LAB_THREADS={v:?} is not a count"))?),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Sample { model, out, json } => {
            let (params, seed) = params_from(&model)?;
            let inst = sample_instance(params, seed)?;
            write(&out, "instance.txt", &instance_to_text(&inst))?;
            if json {
                write(&out, "instance.json", &serde_json::to_string_pretty(&InstanceJson::from_instance(&inst))?)?;
            }
            let c = inst.counts();
            println!("n={} T={} B={} R={}", inst.n(), c.two_colored, c.blue_only, c.red_only);
        }
        Command::Census { source, out } => {
            let inst = load_instance(&source)?;
            let analysis = IntersectionAnalysis::new(&inst)?;
            write(&out, "census.json", &serde_json::to_string_pretty(&census_to_json(&analysis.census))?)?;
            for class in analysis.census.classes_by_size() {
                println!("k={} {} X={} a={}", class.k, class.code, class.count(), class.automorphism_count);
            }
        }
        Command::BuildPerms { source, p, builder_seed, max_attempts, out } => {
            let inst = load_instance(&source)?;
            let analysis = IntersectionAnalysis::new(&inst)?;
            let seed = Seed(builder_seed.unwrap_or(inst.seed().0));
            let budget = max_attempts.unwrap_or_else(|| default_max_attempts(inst.params(), p));
            let fam = generate_family(&inst, &analysis, p, seed, budget)?;
            let check = verify_family(&fam.members, &inst, 0.05)?;
            let mut members = Vec::new();
            for (i, (m, &attempt)) in fam.members.iter().zip(&fam.attempt_of).enumerate() {
                members.push(family_member_json(m, attempt, delta(&m.sigma, &inst, &analysis.s)?));
                write(&out, &format!("sigma_{}.txt", i + 1), &format!("{}\n", m.sigma.to_cycle_notation()))?;
                write(&out, &format!("sigma_{}.tsv", i + 1), &m.sigma.to_table())?;
            }
            let bundle = family_json(&inst, seed, &analysis.partition, members);
            write(&out, "family.json", &serde_json::to_string_pretty(&bundle)?)?;
            println!(
                "accepted {} of {} draws; common edges preserved: {}",
                fam.members.len(),
                fam.attempts,
                check.edges_preserved
            );
        }
        Command::Experiment { name, config, model, replicates, p, out, strict } => {
            let cfg = experiment_config(&name, config.as_deref(), &model, replicates, p)?;
            let report = run_experiment(&cfg)?;
            write_outputs(&out, &report)?;
            print_tests(&report);
            if strict && !report.all_pass() {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Report { config, replicates_csv, out } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let file =
                fs::File::open(&replicates_csv).with_context(|| format!("opening {}", replicates_csv.display()))?;
            let (columns, records) = read_replicates_csv(file)?;
            let report = summarize(&cfg, &columns, records)?;
            write(&out, "report.json", &report.to_json_pretty()?)?;
            for t in plot_tables(&report) {
                write(&out, &format!("plotdata_{}.csv", t.name), &t.to_csv())?;
            }
            print_tests(&report);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
