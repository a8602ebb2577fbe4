use std::path::Path;
use std::process::{Command, Output};

use monocycle::graph::io::parse_text;
use monocycle::matching::{check_robmat, RobmatConfig, RobmatType};
use monocycle::rational::ratio;
use monocycle_cli::suite::CSV_HEADER;
use serde_json::Value;

fn monocycle(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monocycle"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn empty_grid_writes_a_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "grid.json", r#"{"suite": "posa"}"#);
    let out = monocycle(&["suite", "--grid", "grid.json", "--output", "empty"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("empty.csv")).unwrap();
    assert_eq!(csv, CSV_HEADER.join(",") + "\n");
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "unknown.json", r#"{"suite": "nope", "seeds": [0]}"#);
    write(
        dir.path(),
        "extra.json",
        r#"{"suite": "posa", "seeds": [0], "colour": 3}"#,
    );
    write(
        dir.path(),
        "density.json",
        r#"{"suite": "posa", "seeds": [0], "density": 1.5}"#,
    );
    for grid in ["unknown.json", "extra.json", "density.json", "missing.json"] {
        let out = monocycle(&["suite", "--grid", grid, "--output", "x"], dir.path());
        assert_eq!(out.status.code(), Some(2), "{grid}");
    }
    let out = monocycle(&["construct", "degree-lb", "--n", "64"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_rows_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    // average degree 100 * 31 is out of reach on 30 vertices, so the row fails
    write(
        dir.path(),
        "grid.json",
        r#"{"suite": "exact-length", "seeds": [0], "n": [30], "length": [31]}"#,
    );
    let out = monocycle(&["suite", "--grid", "grid.json", "--output", "r"], dir.path());
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains(",false,"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "grid.json",
        r#"{"suite": "robmat", "seeds": [4, 5], "n": [64]}"#,
    );
    for out in ["a", "b"] {
        let run = monocycle(&["suite", "--grid", "grid.json", "--output", out], dir.path());
        assert_eq!(run.status.code(), Some(0));
    }
    for ext in ["csv", "json", "artifacts.jsonl"] {
        let a = std::fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(a, b, "{ext}");
    }
}

#[test]
fn seed_flag_overrides_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "grid.json", r#"{"suite": "posa", "seeds": [0]}"#);
    let out = monocycle(
        &[
            "suite",
            "--grid",
            "grid.json",
            "--output",
            "s",
            "--seed",
            "7",
            "--seed",
            "8",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["seeds"], serde_json::json!([7, 8]));
    assert_eq!(report["summary"]["rows"], 6);
}

#[test]
fn full_density_blow_up_is_complete_bipartite() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "spec.json",
        r#"{"m": 2, "cluster_size": 5, "r": 1, "sides": [true, false],
            "pairs": [{"i": 0, "j": 1, "colour": 1, "density": 1.0}],
            "eps": "1/20", "d": "1/10"}"#,
    );
    let out = monocycle(
        &[
            "generate",
            "blow-up",
            "--spec",
            "spec.json",
            "--seed",
            "1",
            "--output",
            "g.txt",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let g = parse_text(&std::fs::read_to_string(dir.path().join("g.txt")).unwrap()).unwrap();
    assert_eq!(g.order(), 10);
    assert_eq!(g.size(), 25);
    for u in 0..5 {
        for v in 5..10 {
            assert_eq!(g.colour(u, v), Some(1));
        }
    }
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["clusters"]["eps"], "1/20");
}

#[test]
fn generated_type_two_graph_passes_the_checker() {
    let dir = tempfile::tempdir().unwrap();
    let out = monocycle(
        &[
            "generate",
            "robmat-type2",
            "--n",
            "64",
            "--seed",
            "3",
            "--output",
            "g.txt",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let g = parse_text(&std::fs::read_to_string(dir.path().join("g.txt")).unwrap()).unwrap();
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.meta.json")).unwrap()).unwrap();
    let side: Vec<bool> = serde_json::from_value(meta["bipartition"].clone()).unwrap();
    let verdict = check_robmat(
        &g.underlying(),
        &ratio(1, 4000),
        &ratio(1, 2000),
        RobmatType::Two,
        Some(&side),
        &RobmatConfig::default(),
    )
    .unwrap();
    assert!(verdict.accepted, "{verdict:?}");
}

#[test]
fn degree_construction_certificate_holds() {
    let dir = tempfile::tempdir().unwrap();
    let out = monocycle(
        &["generate", "degree-lb", "--n", "16384", "--output", "d.txt"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["graph_written"], false);
    let c = &meta["certificate"];
    assert!(c["min_degree"].as_f64().unwrap() >= c["degree_bar"].as_f64().unwrap());
    assert!(!dir.path().join("d.txt").exists());

    let out = monocycle(&["construct", "degree-lb", "--n", "16384"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(&printed, c);
}

#[test]
fn planted_instance_partitions_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "params.json",
        r#"{"nu": "1/1200", "mu": "1/25000", "d": "1/50000", "eps": "1/100000"}"#,
    );
    let out = monocycle(
        &["generate", "planted", "--n", "2000", "--k", "2", "--output", "p.txt"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let args = [
        "partition",
        "run",
        "--input",
        "p.txt",
        "--per-side",
        "2",
        "--params",
        "params.json",
        "--report",
        "rep.json",
    ];
    // the n floor is far out of reach, so this is a configuration error
    assert_eq!(monocycle(&args, dir.path()).status.code(), Some(2));
    let mut with_override = args.to_vec();
    with_override.push("--override-n-floor");
    let out = monocycle(&with_override, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("rep.json")).unwrap()).unwrap();
    assert_eq!(report["validated"], true);
    assert_eq!(report["ledger"]["desk_override"], true);
    assert!(report["count"].as_f64().unwrap() <= report["bound_sharp"].as_f64().unwrap());
}

#[test]
fn posa_cover_on_a_file() {
    let dir = tempfile::tempdir().unwrap();
    // a 5-cycle plus a pendant vertex
    write(dir.path(), "g.txt", "6 1\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n4 0 1\n4 5 1\n");
    let out = monocycle(&["cover", "posa", "--input", "g.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    // alpha = 3
    assert!(v["pieces"].as_array().unwrap().len() <= 3);
}
