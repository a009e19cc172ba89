use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sscaug::commands::verify_augmented;
use sscaug::formats::load_graph;
use sscaug_core::zero_forcing::augment_zf;
use sscaug_core::{BoundKind, DiGraph, LeaderSet};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sscaug"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

// Chain 2 -> 1 -> 0 plus two loose nodes; leaders {0, 3} force a derived set of 4.
const SIX: &str = "6\n# chain into leader 0\n1 0\n2 1\n";
const CHAIN: &str = "3\n2 1\n1 0\n";

#[test]
fn bounds_on_empty_graph_equal_leader_count() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "empty.edges", "5\n");
    let v = json(&run(&["bounds", "--graph", s(&g), "--leaders", "0,2,4"]));
    assert_eq!(v["zf_bound"], 3);
    assert_eq!(v["pmi_bound"], 3);
}

#[test]
fn bounds_on_chain_equal_n() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "chain.edges", CHAIN);
    let v = json(&run(&["bounds", "--graph", s(&g), "--leaders", "0"]));
    assert_eq!(v["zf_bound"], 3);
    assert_eq!(v["pmi_bound"], 3);
    assert_eq!(v["sequence"]["nodes"], serde_json::json!([0, 1, 2]));
}

#[test]
fn bounds_from_dl_file() {
    let dir = tempfile::tempdir().unwrap();
    let dl = write(dir.path(), "m.dl", "0 3\n1 0\n1 4\n2 1\n2 2\n");
    for mode in ["exact", "greedy", "auto"] {
        let v = json(&run(&["bounds", "--dl-file", s(&dl), "--pmi", mode]));
        assert_eq!(v["pmi_bound"], 5, "{mode}");
        assert!(v["zf_bound"].is_null());
    }
    let v = json(&run(&["bounds", "--dl-file", s(&dl), "--pmi", "exact"]));
    assert_eq!(
        v["sequence"]["witnesses"],
        serde_json::json!([0, 1, 0, 1, 0])
    );
}

#[test]
fn augment_zf_writes_and_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "six.edges", SIX);
    let out = dir.path().join("out");
    let v = json(&run(&[
        "augment",
        "--graph",
        s(&g),
        "--leaders",
        "0,3",
        "--bound",
        "zf",
        "--out",
        s(&out),
    ]));
    assert_eq!(v["bound_kind"], "zf");
    assert_eq!(v["bound_value"], 4);
    assert_eq!(v["edges_after"], 25);
    let h = load_graph(&out.join("augmented.edges")).unwrap();
    assert_eq!(h.edge_count(), 25);
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary, v);
}

#[test]
fn augment_dot_highlights_added_edges() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "chain.edges", CHAIN);
    let out = dir.path().join("out");
    let o = run(&[
        "augment",
        "--graph",
        s(&g),
        "--leaders",
        "0",
        "--format",
        "dot",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success());
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("color=red").count(), 3);
    assert_eq!(
        std::fs::read_to_string(out.join("augmented.dot")).unwrap(),
        dot
    );
}

#[test]
fn augment_distance_on_complete_graph_adds_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let text = sscaug::formats::write_edge_list(&DiGraph::complete(5));
    let g = write(dir.path(), "k5.edges", &text);
    let v = json(&run(&[
        "augment",
        "--graph",
        s(&g),
        "--leaders",
        "1,3",
        "--bound",
        "distance",
    ]));
    assert_eq!(v["added_edges"], serde_json::json!([]));
    assert_eq!(v["edges_after"], 20);
}

#[test]
fn more_repeats_never_hurt() {
    let dir = tempfile::tempdir().unwrap();
    let g = sscaug_core::graph::random_digraph(12, 0.15, 4).unwrap();
    let path = write(dir.path(), "r.edges", &sscaug::formats::write_edge_list(&g));
    let edges = |reps: &str| {
        json(&run(&[
            "augment",
            "--graph",
            s(&path),
            "--leaders",
            "0,5",
            "--bound",
            "distance",
            "--repeats",
            reps,
            "--seed",
            "9",
        ]))["edges_after"]
            .as_u64()
            .unwrap()
    };
    assert!(edges("8") >= edges("1"));
}

#[test]
fn dpea_reports_levels() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p.edges", "4\n0 1\n1 2\n2 3\n");
    let v = json(&run(&[
        "dpea",
        "--graph",
        s(&g),
        "--source",
        "0",
        "--target",
        "3",
    ]));
    assert_eq!(v["distance"], 3);
    assert_eq!(v["levels"], serde_json::json!([0, 1, 2, 3]));
    // All pairs except the three forward jumps of two or more levels.
    assert_eq!(v["edges_after"], 12 - 3);
}

#[test]
fn validate_passes_on_sound_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "six.edges", SIX);
    let v = json(&run(&[
        "validate",
        "--graph",
        s(&g),
        "--leaders",
        "0,3",
        "--samples",
        "4",
    ]));
    assert_eq!(v["violations"], serde_json::json!([]));
    assert_eq!(v["sampled_ranks"].as_array().unwrap().len(), 4);
}

#[test]
fn bench_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let args = [
        "bench",
        "--n",
        "15",
        "--p",
        "0.1",
        "--trials",
        "2",
        "--leader-counts",
        "1..=3",
        "--out",
        s(&out),
    ];
    assert!(run(&args).status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("# pmi_mode: greedy"));
    assert!(csv.contains(
        "leaders,zf_bound,pmi_bound,edges_orig,edges_zf,edges_dist,edges_dist_same_bound"
    ));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.edges", "3\n0 1\n1 x\n");
    let o = run(&["bounds", "--graph", s(&bad), "--leaders", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3:"));

    let g = write(dir.path(), "chain.edges", CHAIN);
    assert_eq!(
        run(&["bounds", "--graph", s(&g), "--leaders", "7"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["bounds", "--graph", s(&g)]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(
        run(&["bounds", "--graph", s(&dir.path().join("missing"))])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verification_failure_maps_to_exit_three() {
    let g = load_graph_text(CHAIN);
    let leaders = LeaderSet::new(vec![0], 3).unwrap();
    let good = augment_zf(&g, &leaders).unwrap().graph;
    assert!(verify_augmented(&g, &good, &leaders, BoundKind::ZeroForcing, None).is_ok());
    let err = verify_augmented(
        &g,
        &DiGraph::complete(3),
        &leaders,
        BoundKind::ZeroForcing,
        None,
    )
    .unwrap_err();
    assert_eq!(err.exit_code(), 3);
}

fn load_graph_text(text: &str) -> DiGraph {
    sscaug::formats::parse_edge_list(text).unwrap()
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let g = sscaug_core::graph::random_digraph(14, 0.12, 21).unwrap();
    let path = write(dir.path(), "r.edges", &sscaug::formats::write_edge_list(&g));
    let p = s(&path);
    let commands: Vec<Vec<&str>> = vec![
        vec!["bounds", "--graph", p, "--leaders", "0,4,9"],
        vec![
            "augment",
            "--graph",
            p,
            "--leaders",
            "0,4,9",
            "--bound",
            "zf",
        ],
        vec![
            "augment",
            "--graph",
            p,
            "--leaders",
            "0,4,9",
            "--bound",
            "distance",
            "--repeats",
            "6",
            "--seed",
            "3",
        ],
        vec![
            "validate",
            "--graph",
            p,
            "--leaders",
            "0,4,9",
            "--samples",
            "3",
            "--seed",
            "5",
        ],
        vec![
            "bench",
            "--n",
            "12",
            "--trials",
            "3",
            "--leader-counts",
            "1,2",
            "--seed",
            "8",
        ],
    ];
    for args in commands {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
