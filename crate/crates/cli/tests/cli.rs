//! End-to-end tests of the `swaplab` binary: formats, exit codes and
//! determinism of each subcommand.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_swaplab"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("swaplab-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

const SINGLE_CLAUSE: &str = "p wsat2 2 1 std\n1 2 1\n";
const SINGLE_NAE: &str = "p wsat2 2 1 nae\n1 2 1\n";

#[test]
fn reduce_prints_constants_and_writes_artifact() {
    let dir = workdir("reduce");
    write(&dir, "a.wsat2", SINGLE_CLAUSE);
    let out = run_in(
        &dir,
        &[
            "reduce", "--in", "a.wsat2", "--target", "mufl", "--out", "a.json",
        ],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("W: 1"));
    assert!(text.contains("f: 2"));
    let artifact = fs::read_to_string(dir.join("a.json")).unwrap();
    assert!(artifact.contains("\"reduction\""));
    assert!(artifact.contains("\"W\": 1"));

    let out = run_in(
        &dir,
        &[
            "reduce", "--in", "a.wsat2", "--target", "dkm", "--c", "3/2", "--out", "b.json",
        ],
    );
    assert!(stdout(&out).contains("epsilon: 1/10"));
}

#[test]
fn reduce_rejects_mode_target_mismatch() {
    let dir = workdir("reduce-mismatch");
    write(&dir, "n.wsat2", SINGLE_NAE);
    let out = run_in(
        &dir,
        &[
            "reduce", "--in", "n.wsat2", "--target", "mufl", "--out", "x.json",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_reports_parse_error_line() {
    let dir = workdir("reduce-parse");
    write(&dir, "bad.wsat2", "p wsat2 2 1 std\n1 2\n");
    let out = run_in(
        &dir,
        &[
            "reduce",
            "--in",
            "bad.wsat2",
            "--target",
            "mufl",
            "--out",
            "x.json",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn search_label_init_and_trace() {
    let dir = workdir("search");
    write(&dir, "a.wsat2", SINGLE_CLAUSE);
    run_in(
        &dir,
        &[
            "reduce", "--in", "a.wsat2", "--target", "mufl", "--out", "a.json",
        ],
    );
    let out = run_in(
        &dir,
        &[
            "search",
            "--in",
            "a.json",
            "--init",
            "indices:x1,!x1,x2",
            "--trace",
            "t.csv",
        ],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("final cost: 22/3"));
    assert!(text.contains("psi: 01") || text.contains("psi: 10"));
    let trace = fs::read_to_string(dir.join("t.csv")).unwrap();
    assert!(trace.starts_with("step,move,cost\n0,init,25/3\n"));
}

#[test]
fn search_lift_init_zero_steps_when_optimal() {
    let dir = workdir("search-lift");
    write(&dir, "a.wsat2", SINGLE_CLAUSE);
    run_in(
        &dir,
        &[
            "reduce", "--in", "a.wsat2", "--target", "mufl", "--out", "a.json",
        ],
    );
    let out = run_in(&dir, &["search", "--in", "a.json", "--init", "lift:10"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("steps: 0"));
}

#[test]
fn search_rejects_wrong_cardinality() {
    let dir = workdir("search-card");
    write(&dir, "a.wsat2", SINGLE_CLAUSE);
    run_in(
        &dir,
        &[
            "reduce", "--in", "a.wsat2", "--target", "dkm", "--out", "a.json",
        ],
    );
    let out = run_in(&dir, &["search", "--in", "a.json", "--init", "indices:0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_on_sat_input() {
    let dir = workdir("search-sat");
    write(&dir, "a.wsat2", SINGLE_CLAUSE);
    let out = run_in(
        &dir,
        &[
            "search", "--in", "a.wsat2", "--init", "bits:00", "--pivot", "best",
        ],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("final solution: 10"));
    assert!(text.contains("final cost: 1"));
}

#[test]
fn tg_emits_edge_list_and_respects_guard() {
    let dir = workdir("tg");
    write(&dir, "a.wsat2", SINGLE_CLAUSE);
    let out = run_in(&dir, &["tg", "--in", "a.wsat2", "--out", "e.csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("nodes: 4"));
    assert!(text.contains("arcs: 2"));
    assert!(text.contains("local optima: 3"));
    let csv = fs::read_to_string(dir.join("e.csv")).unwrap();
    assert_eq!(csv, "from,to\n00,10\n00,01\n");

    let out = run_in(
        &dir,
        &["tg", "--in", "a.wsat2", "--out", "e.csv", "--guard", "3"],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_file_passes_and_writes_report() {
    let dir = workdir("verify");
    write(&dir, "a.wsat2", SINGLE_CLAUSE);
    let out = run_in(
        &dir,
        &[
            "verify",
            "--in",
            "a.wsat2",
            "--target",
            "all",
            "--exhaustive",
            "--report",
            "r.json",
            "--gamma-samples",
            "200",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(true));
    assert_eq!(report["runs"].as_array().unwrap().len(), 2); // mufl + dkm
}

#[test]
fn verify_randomized_batch() {
    let dir = workdir("verify-batch");
    let out = run_in(
        &dir,
        &[
            "verify",
            "--samples",
            "3",
            "--nmax",
            "3",
            "--seed",
            "7",
            "--gamma-samples",
            "100",
            "--membership-samples",
            "500",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // 3 samples x (mufl + dkm + dfkm)
    assert!(stdout(&out).contains("verify: 9 runs, 0 failed"));
}

#[test]
fn verify_corrupted_artifact_fails_with_counterexample() {
    let dir = workdir("verify-corrupt");
    write(&dir, "a.wsat2", SINGLE_CLAUSE);
    run_in(
        &dir,
        &[
            "reduce", "--in", "a.wsat2", "--target", "dkm", "--out", "a.json",
        ],
    );
    let path = dir.join("a.json");
    let text = fs::read_to_string(&path).unwrap();
    // move the clause point onto !x1
    let corrupted = text.replace("\"23/20\"", "\"1/2\"");
    assert_ne!(corrupted, text);
    fs::write(&path, corrupted).unwrap();
    let out = run_in(
        &dir,
        &[
            "verify",
            "--in",
            "a.json",
            "--report",
            "r.json",
            "--gamma-samples",
            "100",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let report = fs::read_to_string(dir.join("r.json")).unwrap();
    assert!(report.contains("\"fail\""));
    assert!(report.contains("counterexample"));
}

#[test]
fn verify_requires_input_or_samples() {
    let dir = workdir("verify-usage");
    let out = run_in(&dir, &["verify"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_in(&dir, &["verify", "--samples", "2"]);
    assert_eq!(out.status.code(), Some(2)); // missing --seed
}

#[test]
fn embed_instance_and_matrix() {
    let dir = workdir("embed");
    write(&dir, "a.wsat2", SINGLE_CLAUSE);
    run_in(
        &dir,
        &[
            "reduce", "--in", "a.wsat2", "--target", "dkm", "--out", "a.json",
        ],
    );
    let out = run_in(&dir, &["embed", "--in", "a.json", "--points", "p.csv"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("schoenberg: embeddable"));
    let points = fs::read_to_string(dir.join("p.csv")).unwrap();
    assert!(points.starts_with("5,")); // 5 points, dim in the header

    write(&dir, "bad.csv", "3\n0,1,9\n1,0,1\n9,1,0\n");
    let out = run_in(&dir, &["embed", "--in", "bad.csv"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("not embeddable"));
    assert!(text.contains("witness:"));

    // two-point matrix embeds on a line
    write(&dir, "two.csv", "2\n0,1\n1,0\n");
    let out = run_in(&dir, &["embed", "--in", "two.csv"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("dim: 1"));
}

#[test]
fn embed_rejects_mufl_instances() {
    let dir = workdir("embed-mufl");
    write(&dir, "a.wsat2", SINGLE_CLAUSE);
    run_in(
        &dir,
        &[
            "reduce", "--in", "a.wsat2", "--target", "mufl", "--out", "m.json",
        ],
    );
    let out = run_in(&dir, &["embed", "--in", "m.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_emits_ratios_and_is_deterministic() {
    let dir1 = workdir("bench1");
    let dir2 = workdir("bench2");
    let args = [
        "bench",
        "--target",
        "mufl",
        "--mode",
        "metric",
        "--count",
        "6",
        "--seed",
        "42",
        "--facilities",
        "5",
        "--out",
        "b.csv",
    ];
    let out1 = run_in(&dir1, &args);
    let out2 = run_in(&dir2, &args);
    assert!(out1.status.success());
    assert_eq!(out1.stdout, out2.stdout);
    let csv1 = fs::read_to_string(dir1.join("b.csv")).unwrap();
    let csv2 = fs::read_to_string(dir2.join("b.csv")).unwrap();
    assert_eq!(csv1, csv2);
    let mut lines = csv1.lines();
    assert_eq!(
        lines.next(),
        Some("instance,steps,final_cost,optimum,ratio")
    );
    for line in lines {
        let ratio: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(ratio >= 1.0);
    }
}

#[test]
fn reduced_mode_bench_runs() {
    let dir = workdir("bench-reduced");
    let out = run_in(
        &dir,
        &[
            "bench", "--target", "dkm", "--mode", "reduced", "--count", "4", "--seed", "3",
            "--out", "b.csv",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        fs::read_to_string(dir.join("b.csv"))
            .unwrap()
            .lines()
            .count(),
        5
    );
}

#[test]
fn commands_are_deterministic_across_reruns() {
    let dir1 = workdir("det1");
    let dir2 = workdir("det2");
    for dir in [&dir1, &dir2] {
        write(dir, "a.wsat2", SINGLE_CLAUSE);
        write(dir, "n.wsat2", SINGLE_NAE);
    }
    let command_sets: Vec<Vec<&str>> = vec![
        vec![
            "reduce", "--in", "a.wsat2", "--target", "dkm", "--out", "out.json",
        ],
        vec![
            "reduce",
            "--in",
            "n.wsat2",
            "--target",
            "dfkm",
            "--out",
            "outn.json",
        ],
        vec![
            "search", "--in", "out.json", "--init", "random", "--seed", "5", "--trace", "t.csv",
        ],
        vec!["tg", "--in", "out.json", "--out", "e.csv"],
        vec![
            "verify",
            "--samples",
            "2",
            "--nmax",
            "2",
            "--seed",
            "11",
            "--gamma-samples",
            "50",
            "--membership-samples",
            "200",
            "--report",
            "r.json",
        ],
        vec!["embed", "--in", "out.json", "--points", "p.csv"],
    ];
    for args in &command_sets {
        let out1 = run_in(&dir1, args);
        let out2 = run_in(&dir2, args);
        assert!(
            out1.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out1.stderr)
        );
        assert_eq!(out1.stdout, out2.stdout, "stdout differs for {args:?}");
    }
    for file in ["out.json", "outn.json", "t.csv", "e.csv", "r.json", "p.csv"] {
        let a = fs::read(dir1.join(file)).unwrap();
        let b = fs::read(dir2.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between reruns");
    }
}
