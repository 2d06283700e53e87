//! End-to-end runs of the binary: exit codes, metric output, file round
//! trips, and experiment CSV determinism.

use std::path::Path;
use std::process::{Command, Output};

fn isl_topo(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isl-topo"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn build_writes_a_file_that_evals_identically() {
    let dir = tempfile::tempdir().unwrap();
    let built = isl_topo(
        &["build", "offset", "--ns", "8", "--no", "4", "--omega", "1", "--out", "g.json"],
        dir.path(),
    );
    assert!(built.status.success(), "{}", stderr(&built));
    assert!(stdout(&built).contains("aspl: 2.709677 (84/31)"));
    assert!(stdout(&built).contains("vs_lb: 2.709677 ratio 1.000000"));

    let evaled = isl_topo(&["eval", "g.json"], dir.path());
    assert!(evaled.status.success());
    assert!(stdout(&evaled).contains("aspl: 2.709677 (84/31)"));
    assert!(stdout(&evaled).contains("provenance: offset"));
}

#[test]
fn exit_codes_distinguish_failure_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let degenerate = isl_topo(&["build", "circulant", "--n", "6", "--jumps", "3"], dir.path());
    assert_eq!(degenerate.status.code(), Some(2), "{}", stderr(&degenerate));
    assert!(stderr(&degenerate).contains("degenerate"));

    let odd_parity = isl_topo(
        &["build", "sample", "--n", "7", "--delta", "3"],
        dir.path(),
    );
    assert_eq!(odd_parity.status.code(), Some(2));

    let missing = isl_topo(&["eval", "missing.json"], dir.path());
    assert_eq!(missing.status.code(), Some(3));

    let usage = isl_topo(&["build", "mesh", "--bogus"], dir.path());
    assert_eq!(usage.status.code(), Some(1));

    let help = isl_topo(&["--help"], dir.path());
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn eval_reports_disconnected_graphs_without_metrics() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("disc.json"),
        r#"{"n_s": 6, "n_o": 1, "delta": 2, "edges": [[0,1],[1,2],[0,2],[3,4],[4,5],[3,5]]}"#,
    )
    .unwrap();
    let out = isl_topo(&["eval", "disc.json"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("connected: false"));
    assert!(!stdout(&out).contains("aspl"));
}

#[test]
fn bound_prints_exact_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = isl_topo(&["bound", "--n", "32", "--delta", "4"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("vs_lb: 2.709677 (84/31)"));
    assert!(stdout(&out).contains("vs_diameter_lb: 4"));
}

#[test]
fn offset_search_reports_the_winner() {
    let dir = tempfile::tempdir().unwrap();
    let out = isl_topo(&["search", "offset4", "--ns", "8", "--no", "4"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("best omega: 1"));

    let out = isl_topo(
        &["search", "offset3", "--ns", "12", "--no", "2", "--space", "wide"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("best jumps: (1,0)+"));
    assert!(stdout(&out).contains("ratio 1.000000"));
}

#[test]
fn anneal_writes_best_graph_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = isl_topo(
        &[
            "search", "anneal", "--ns", "4", "--no", "4", "--seed", "1", "--t0", "0.1",
            "--cooling", "0.5", "--steps", "20", "--tmin", "0.01", "--trace", "t.csv", "--out",
            "best.json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let trace = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(trace.starts_with("step,temperature,current,best\n"));
    let evaled = isl_topo(&["eval", "best.json"], dir.path());
    assert!(stdout(&evaled).contains("regular: true"));
}

fn strip_runtime(csv: &str) -> String {
    csv.lines()
        .map(|line| line.rsplit_once(',').map(|(head, _)| head).unwrap_or(line))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn experiments_are_deterministic_modulo_runtime() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("exp.cfg"),
        "method = mesh,sample,lb\nns = 6,8\nno = 4\nseeds = 2\n",
    )
    .unwrap();
    for out in ["a.csv", "b.csv"] {
        let run = isl_topo(
            &[
                "experiment", "--id", "custom", "--config", "exp.cfg", "--seed", "3", "--out", out,
            ],
            dir.path(),
        );
        assert!(run.status.success(), "{}", stderr(&run));
    }
    let a = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(strip_runtime(&a), strip_runtime(&b));

    let header = a.lines().next().unwrap();
    assert_eq!(
        header,
        "n_s,n_o,N,method,param,aspl,diameter,lb_vs,lb_moore,ratio_vs,ratio_moore,seed,runtime_ms"
    );
    // Two sizes x (mesh + 2 sample seeds + lb).
    assert_eq!(a.lines().count(), 9);
    for line in a.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        for ratio in [fields[9], fields[10]] {
            if !ratio.is_empty() {
                assert!(ratio.parse::<f64>().unwrap() >= 1.0 - 1e-12, "{line}");
            }
        }
        assert!(fields[3] != "sample" || fields[11].parse::<u64>().unwrap() >= 3);
    }
}

#[test]
fn sweep_experiment_emits_all_methods_and_a_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("small.cfg"), "ns = 10..12\n").unwrap();
    let run = isl_topo(
        &[
            "experiment", "--id", "offset-sweep", "--config", "small.cfg", "--plot-script",
            "--out", "sweep.csv",
        ],
        dir.path(),
    );
    assert!(run.status.success(), "{}", stderr(&run));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    for method in ["mesh", "sqrt_offset", "best_offset", "lb"] {
        assert!(
            csv.lines().any(|l| l.split(',').nth(3) == Some(method)),
            "missing {method} rows"
        );
    }
    let script = std::fs::read_to_string(dir.path().join("sweep.gp")).unwrap();
    assert!(script.contains("set datafile separator"));
    assert!(script.contains("strcol(4) eq \"best_offset\""));
}

#[test]
fn invalid_sweep_rows_are_skipped_with_reasons() {
    let dir = tempfile::tempdir().unwrap();
    // Odd n_o makes every honeycomb row unrealizable; the jump-set search
    // rows still land.
    std::fs::write(dir.path().join("d3.cfg"), "ns = 8,10\n").unwrap();
    let run = isl_topo(
        &[
            "experiment", "--id", "deg3-sweep", "--config", "d3.cfg", "--out", "d3.csv",
        ],
        dir.path(),
    );
    assert!(run.status.success(), "{}", stderr(&run));
    assert!(stderr(&run).contains("skip honeycomb at 8 x 5"));
    let csv = std::fs::read_to_string(dir.path().join("d3.csv")).unwrap();
    assert!(!csv.contains("honeycomb"));
    assert!(csv.lines().any(|l| l.contains("best_offset_d3")));
}
