use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn align_lab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_align-lab"))
        .args(args)
        .current_dir(dir)
        .env_remove("ALIGN_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const POISSON: &str = r#"
experiment = "poisson-delta"
replicates = 30
base_seed = 5
family_size = 2

[params]
n = 4000
lambda = 0.8
s = 0.5
"#;

#[test]
fn sample_writes_header() {
    let dir = tempfile::tempdir().unwrap();
    let o = align_lab(&["sample", "--n", "11", "--lambda", "1.9", "--s", "0.7", "--seed", "1", "--json"], dir.path());
    assert!(o.status.success(), "{o:?}");
    let text = fs::read_to_string(dir.path().join("instance.txt")).unwrap();
    assert_eq!(text.lines().next(), Some("11 1.9 0.7 1"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("instance.json")).unwrap()).unwrap();
    assert_eq!(json["pi_star"].as_array().unwrap().len(), 11);
}

#[test]
fn census_and_permutations_from_an_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "--n", "3000", "--lambda", "0.8", "--s", "0.5", "--seed", "4"];
    assert!(align_lab(&args, dir.path()).status.success());

    let o = align_lab(&["census", "--instance", "instance.txt", "--out", "c"], dir.path());
    assert!(o.status.success(), "{o:?}");
    let census: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("c/census.json")).unwrap()).unwrap();
    assert_eq!(census["()"]["k"], 1);
    assert_eq!(census["(())"]["a"], 2);

    let o = align_lab(&["build-perms", "--instance", "instance.txt", "--p", "3", "--out", "f"], dir.path());
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("common edges preserved: true"));
    let family: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("f/family.json")).unwrap()).unwrap();
    let members = family["members"].as_array().unwrap();
    assert_eq!(members.len(), 3);
    assert!(members.iter().all(|m| m["delta"] == 0));
    let table = fs::read_to_string(dir.path().join("f/sigma_1.tsv")).unwrap();
    assert_eq!(table.lines().count(), 3000);
    assert!(fs::read_to_string(dir.path().join("f/sigma_1.txt")).unwrap().starts_with("(1"));
}

#[test]
fn experiment_outputs_and_report_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.toml"), POISSON).unwrap();
    let o =
        align_lab(&["experiment", "poisson-delta", "--config", "c.toml", "--out", "run", "--threads", "2"], dir.path());
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("mean_rel"));
    for f in ["replicates.csv", "report.json", "plotdata_delta_hist.csv"] {
        assert!(dir.path().join("run").join(f).exists(), "{f}");
    }
    let hist = fs::read_to_string(dir.path().join("run/plotdata_delta_hist.csv")).unwrap();
    assert!(hist.starts_with("delta,empirical,poisson\n0,"));

    let o = align_lab(
        &["report", "--config", "c.toml", "--replicates-csv", "run/replicates.csv", "--out", "again"],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    let a = fs::read_to_string(dir.path().join("run/report.json")).unwrap();
    let b = fs::read_to_string(dir.path().join("again/report.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn thread_count_does_not_change_replicates() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.toml"), POISSON).unwrap();
    let base = ["experiment", "poisson-delta", "--config", "c.toml"];
    let one = align_lab(&[&base[..], &["--out", "a", "--threads", "1"]].concat(), dir.path());
    let four = Command::new(env!("CARGO_BIN_EXE_align-lab"))
        .args([&base[..], &["--out", "b"]].concat())
        .current_dir(dir.path())
        .env("ALIGN_LAB_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(
        fs::read(dir.path().join("a/replicates.csv")).unwrap(),
        fs::read(dir.path().join("b/replicates.csv")).unwrap()
    );
}

#[test]
fn flags_override_config_and_strict_mode() {
    let dir = tempfile::tempdir().unwrap();
    // no monochromatic edges: only the zero test runs, and it passes
    let o = align_lab(
        &[
            "experiment",
            "poisson-delta",
            "--n",
            "2000",
            "--lambda",
            "0.8",
            "--s",
            "1",
            "--replicates",
            "5",
            "--p",
            "2",
            "--strict",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("PASS delta_identically_zero"));

    // K(2000) = 2 leaves far too many vertices outside small trees
    let o = align_lab(
        &[
            "experiment",
            "small-tree-coverage",
            "--n",
            "2000",
            "--lambda",
            "2",
            "--s",
            "1",
            "--replicates",
            "3",
            "--strict",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3), "{o:?}");
    assert!(stdout(&o).contains("FAIL v_gt_max"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["provenance"]["config"]["replicates"], 3);
    assert_eq!(report["provenance"]["tolerances"]["giant_abs"], 0.02);
}

#[test]
fn errors_exit_non_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = align_lab(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));

    fs::write(dir.path().join("bad.toml"), "experiment = \"poisson-delta\"\nreplicates = 0\n").unwrap();
    let o = align_lab(&["experiment", "poisson-delta", "--config", "bad.toml"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    fs::write(dir.path().join("c.toml"), POISSON).unwrap();
    let o = align_lab(&["experiment", "map-oracle", "--config", "c.toml"], dir.path());
    assert_eq!(o.status.code(), Some(1));

    let o = align_lab(&["experiment", "no-such-experiment", "--n", "10", "--lambda", "1", "--s", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(1));

    fs::write(dir.path().join("broken.txt"), "5 1 0.5 1\n1 9 T\n").unwrap();
    let o = align_lab(&["census", "--instance", "broken.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}
