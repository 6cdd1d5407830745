//! End-to-end acceptance criteria. Each test prints one PASS/FAIL line.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use align_lab::automorphism::{default_max_attempts, generate_family, verify_family, IntersectionAnalysis};
use align_lab::components::canonical_code_of_tree;
use align_lab::components::enumerate::labeled_trees;
use align_lab::harness::{
    replicates_csv_string, run_experiment, Conditioning, ExperimentConfig, ExperimentKind, ExperimentReport,
};
use align_lab::model::giant::solve_c;
use align_lab::model::{sample_instance, ModelParams};
use align_lab::Seed;
use align_lab_verify::{all_permutations, brute_form, report_criterion};

const DESK_N: usize = 100_000;

fn config(kind: ExperimentKind, n: usize, lambda: f64, s: f64, replicates: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig::new(kind, ModelParams::new(n, lambda, s).unwrap(), replicates, seed)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn stat(report: &ExperimentReport, test: &str) -> (bool, String) {
    let t = report.test(test).unwrap_or_else(|| panic!("missing test {test}"));
    let s = t.statistic.map_or("none".to_string(), |s| format!("{s:.5}"));
    (t.pass, format!("{test} {s} {} {}", t.relation, t.threshold))
}

fn finish(number: u32, title: &str, pass: bool, detail: String) {
    report_criterion(number, title, pass, &detail);
    assert!(pass, "criterion {number} failed: {detail}");
}

#[test]
fn criterion_01_giant_fraction_solver() {
    let mus = [1.1, 1.5, 2.0, 3.0, 5.0];
    let (cs, elapsed) = timed(|| mus.map(|mu| solve_c(mu, 1e-12).unwrap()));
    let residual = mus.iter().zip(&cs).map(|(mu, c)| ((-mu * c).exp() - (1.0 - c)).abs()).fold(0.0f64, f64::max);
    let monotone = cs.windows(2).all(|w| w[0] < w[1]);
    let zeros = [0.0, 0.3, 0.99, 1.0].iter().all(|&mu| solve_c(mu, 1e-12).unwrap() == 0.0);
    let pass = residual <= 1e-12 && monotone && zeros && elapsed < Duration::from_millis(1);
    finish(
        1,
        "giant fraction solver",
        pass,
        format!("max residual {residual:.2e}, monotone {monotone}, zero below 1 {zeros}, {elapsed:?} for 5 solves"),
    );
}

#[test]
fn criterion_02_tree_code_oracle() {
    let (result, elapsed) = timed(|| {
        let mut counts = Vec::new();
        let mut consistent = true;
        for k in 1..=7 {
            let perms = all_permutations(k);
            let mut code_to_form: BTreeMap<String, u32> = BTreeMap::new();
            let mut form_to_code: BTreeMap<u32, String> = BTreeMap::new();
            for t in labeled_trees(k) {
                let code = canonical_code_of_tree(&t).unwrap().code;
                let form = brute_form(&t, &perms);
                consistent &= *code_to_form.entry(code.clone()).or_insert(form) == form;
                consistent &= *form_to_code.entry(form).or_insert_with(|| code.clone()) == code;
            }
            counts.push(code_to_form.len());
        }
        (counts, consistent)
    });
    let (counts, consistent) = result;
    let pass = counts == [1, 1, 1, 2, 3, 6, 11] && consistent && elapsed < Duration::from_secs(10);
    finish(
        2,
        "tree-code oracle",
        pass,
        format!("class counts {counts:?}, code equality matches isomorphism {consistent}, {elapsed:?}"),
    );
}

#[test]
fn criterion_03_automorphism_exactness() {
    let (result, elapsed) = timed(|| {
        let mut checked = 0;
        let mut bad = 0;
        for (i, lambda) in [0.8, 4.0].into_iter().enumerate() {
            let params = ModelParams::new(10_000, lambda, 0.5).unwrap();
            for r in 0..100u64 {
                let inst = sample_instance(params, Seed(1000 * i as u64 + r)).unwrap();
                let analysis = IntersectionAnalysis::new(&inst).unwrap();
                let b = analysis.build_sigma(Seed(r).derive(7)).unwrap();
                let preserved = analysis.intersection.relabel(&b.sigma).unwrap() == analysis.intersection;
                let fixed = analysis
                    .partition
                    .v_infinity()
                    .iter()
                    .chain(analysis.partition.v_gt())
                    .all(|&v| b.sigma.apply(v) == v);
                checked += 1;
                if !(preserved && fixed) {
                    bad += 1;
                }
            }
        }
        (checked, bad)
    });
    let (checked, bad) = result;
    let pass = checked == 200 && bad == 0 && elapsed < Duration::from_secs(30);
    finish(3, "automorphism exactness", pass, format!("{bad} of {checked} instances violated, {elapsed:?}"));
}

#[test]
fn criterion_04_accepted_members_keep_common_edges() {
    let mut members = 0;
    let mut bad = 0;
    for (i, lambda) in [0.8, 4.0].into_iter().enumerate() {
        let params = ModelParams::new(10_000, lambda, 0.5).unwrap();
        for r in 0..25u64 {
            let inst = sample_instance(params, Seed(5000 + 100 * i as u64 + r)).unwrap();
            let analysis = IntersectionAnalysis::new(&inst).unwrap();
            let fam = generate_family(&inst, &analysis, 4, Seed(r), default_max_attempts(&params, 4)).unwrap();
            let check = verify_family(&fam.members, &inst, 0.05).unwrap();
            members += check.member_common_edges.len();
            bad += check.member_common_edges.iter().filter(|&&e| e != check.base_common_edges).count();
        }
    }
    finish(
        4,
        "accepted members keep the common edge count",
        bad == 0 && members == 200,
        format!("{bad} of {members} accepted members changed e(G ∧ G')"),
    );
}

/// 5000 replicates with two raw draws each, shared by criteria 5 and 6.
fn poisson_run() -> &'static (ExperimentReport, Duration) {
    static RUN: OnceLock<(ExperimentReport, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let cfg = config(ExperimentKind::PoissonDelta, DESK_N, 0.8, 0.5, 5000, 20_240_501).with_family_size(2);
        timed(|| run_experiment(&cfg).unwrap())
    })
}

#[test]
fn criterion_05_poisson_calibration() {
    let (report, elapsed) = poisson_run();
    let (mean_ok, mean) = stat(report, "mean_rel");
    let (gof_ok, gof) = stat(report, "gof_p_value");
    let (corr_ok, corr) = stat(report, "corr_abs");
    let pass = mean_ok && gof_ok && corr_ok && report.failed_replicates == 0 && *elapsed < Duration::from_secs(600);
    finish(
        5,
        "extra double edge count is Poisson",
        pass,
        format!(
            "mean {:.5} over {} draws; {mean}; {gof}; {corr}; {elapsed:?}",
            report.derived["pooled_mean"], report.derived["pooled_draws"]
        ),
    );
}

#[test]
fn criterion_06_acceptance_rate() {
    let (report, _) = poisson_run();
    let (ok, z) = stat(report, "zero_rate_z");
    let draws = report.column("delta_1").unwrap().len();
    finish(
        6,
        "acceptance rate",
        ok && draws == 5000,
        format!(
            "P(delta = 0) = {:.5} over {draws} draws vs {:.5}; {z}",
            report.derived["zero_rate"], report.derived["expected_zero_rate"]
        ),
    );
}

#[test]
fn criterion_07_fix_concentration() {
    let (runs, elapsed) = timed(|| {
        [(0.8, 0.5), (4.0, 0.5)].map(|(lambda, s)| {
            let cfg = config(ExperimentKind::FixConcentration, DESK_N, lambda, s, 50, 7).with_family_size(4);
            run_experiment(&cfg).unwrap()
        })
    });
    let mut pass = elapsed < Duration::from_secs(900);
    let mut parts = Vec::new();
    for (label, r) in ["lambda s = 0.4", "lambda s = 2"].iter().zip(&runs) {
        let (ok, fix) = stat(r, "fix_abs");
        let (dec_ok, _) = stat(r, "decomposition_mismatches");
        let (edges_ok, _) = stat(r, "edges_preserved");
        pass &= ok && dec_ok && edges_ok && r.failed_replicates == 0;
        parts.push(format!(
            "{label}: Fix/n in [{:.5}, {:.5}], {fix}, V_gt/n mean {:.5}",
            r.derived["fix_min"], r.derived["fix_max"], r.derived["v_gt_mean"]
        ));
    }
    finish(7, "pairwise fixed points concentrate", pass, format!("{}; {elapsed:?}", parts.join("; ")));
}

#[test]
fn criterion_08_census_concentration() {
    let (runs, elapsed) = timed(|| {
        [0.5, 1.0].map(|mu| {
            run_experiment(&config(ExperimentKind::TreeCensusConcentration, DESK_N, mu, 1.0, 100, 8)).unwrap()
        })
    });
    let mut pass = elapsed < Duration::from_secs(600);
    let mut parts = Vec::new();
    for (mu, r) in [0.5, 1.0].iter().zip(&runs) {
        pass &= r.failed_replicates == 0 && r.tests.len() == 9;
        for t in &r.tests {
            pass &= t.pass;
            if !t.pass {
                parts.push(format!(
                    "mu {mu}: {} = {:.4} (limit {})",
                    t.name,
                    t.statistic.unwrap_or(f64::NAN),
                    t.threshold
                ));
            }
        }
        let ratios: Vec<String> = r
            .derived
            .iter()
            .filter(|(k, _)| k.starts_with("variance_over_mean:"))
            .map(|(k, v)| format!("{}={v:.3}", &k["variance_over_mean:".len()..]))
            .collect();
        parts.push(format!("mu {mu}: var/mean {}", ratios.join(" ")));
    }
    finish(8, "tree census concentration", pass, format!("{}; {elapsed:?}", parts.join("; ")));
}

#[test]
fn criterion_09_coverage() {
    let r = run_experiment(&config(ExperimentKind::SmallTreeCoverage, DESK_N, 2.0, 1.0, 100, 9)).unwrap();
    let (a, giant) = stat(&r, "giant_abs");
    let (b, vgt) = stat(&r, "v_gt_max");
    let (c, small) = stat(&r, "small_tree_abs");
    finish(
        9,
        "giant and small-tree coverage",
        a && b && c && r.failed_replicates == 0,
        format!("{giant}; {vgt}; {small}"),
    );
}

#[test]
fn criterion_10_common_fixed_edge_bounds() {
    let r = run_experiment(&config(ExperimentKind::FBounds, DESK_N, 0.8, 0.5, 100, 10).with_family_size(6)).unwrap();
    let (a, quad) = stat(&r, "quad_zero");
    let (b, triple) = stat(&r, "triple_bound");
    let (c, pair) = stat(&r, "pair_bound");
    let nonzero_triples = r.column("max_triple").unwrap().iter().filter(|&&x| x > 0.0).count();
    finish(
        10,
        "common fixed edge bounds",
        a && b && c && r.failed_replicates == 0,
        format!(
            "{quad}; {triple}; {pair}; replicates with a non-empty triple {nonzero_triples}/100, fixed vertices mean {:.0}",
            r.aggregates["fixed_vertices"].mean.unwrap_or(f64::NAN)
        ),
    );
}

#[test]
fn criterion_11_map_flatness() {
    let (runs, elapsed) = timed(|| {
        let flat = run_experiment(&config(ExperimentKind::MapOracle, 8, 0.8, 0.5, 500, 11)).unwrap();
        let control = run_experiment(
            &config(ExperimentKind::MapOracle, 8, 2.0, 1.0, 100, 12)
                .with_conditioning(Conditioning::ConnectedAsymmetric),
        )
        .unwrap();
        (flat, control)
    });
    let (flat, control) = runs;
    let (a, overlap) = stat(&flat, "mean_overlap");
    let (b, mult) = stat(&flat, "multiplicity_ge2_fraction");
    let (c, unique) = stat(&control, "unique_maximizer");
    let (d, recover) = stat(&control, "recovers_planted");
    let (e, _) = stat(&flat, "map_dominates_planted");
    let pass = a && b && c && d && e && flat.failed_replicates == 0 && control.failed_replicates == 0;
    finish(
        11,
        "MAP posterior flatness",
        pass && elapsed < Duration::from_secs(300),
        format!("{overlap}; {mult}; control {unique}, {recover}; {elapsed:?}"),
    );
}

#[test]
fn criterion_12_determinism() {
    let cfgs = [
        config(ExperimentKind::PoissonDelta, 5000, 0.8, 0.5, 16, 1).with_family_size(2),
        config(ExperimentKind::FixConcentration, 5000, 4.0, 0.5, 6, 2).with_family_size(3),
        config(ExperimentKind::TreeCensusConcentration, 5000, 1.0, 1.0, 8, 3),
        config(ExperimentKind::SmallTreeCoverage, 5000, 2.0, 1.0, 8, 4),
        config(ExperimentKind::GiantComponent, 5000, 2.0, 1.0, 8, 5),
        config(ExperimentKind::FBounds, 5000, 0.8, 0.5, 6, 6).with_family_size(4),
        config(ExperimentKind::MapOracle, 7, 0.8, 0.5, 12, 7),
    ];
    let csv = |cfg: &ExperimentConfig, threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let r = pool.install(|| run_experiment(cfg).unwrap());
        replicates_csv_string(&r.columns, &r.per_replicate).unwrap()
    };
    let mut differing = Vec::new();
    for cfg in &cfgs {
        let first = csv(cfg, 1);
        if first != csv(cfg, 1) || first != csv(cfg, 4) {
            differing.push(cfg.experiment.name());
        }
    }
    finish(
        12,
        "deterministic replicate tables",
        differing.is_empty(),
        format!("{} experiments compared across repeated runs and thread counts, differing: {differing:?}", cfgs.len()),
    );
}
