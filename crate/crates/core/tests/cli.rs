use std::path::Path;
use std::process::{Command, Output};

use tangles::io::parse_labels;
use tangles::models::thm2_psi_range;

fn tangles(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangles"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    tangles(args).status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["cluster", "--bogus"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    let args = ["cluster", "--input", s(&missing), "--format", "graph", "--agreement", "3"];
    assert_eq!(code(&args), 2);
    let args = ["cluster", "--input", s(&missing), "--format", "graph", "--agreement", "0"];
    assert_eq!(code(&args), 1);
    let args = ["cluster", "--input", s(&missing), "--format", "graph", "--agreement", "3", "--cuts", "column"];
    assert_eq!(code(&args), 1);
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "0,1\n1,7\n").unwrap();
    let args = ["cluster", "--input", s(&bad), "--format", "binary-matrix", "--agreement", "1"];
    let out = tangles(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&["generate", "questionnaire", "--n", "10", "--m", "4", "--k", "2", "--p", "0.7"]), 1);
}

#[test]
fn sbm_round_trip_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let gen = ["generate", "sbm", "--n", "100", "--blocks", "2", "--p", "0.3", "--q", "0.05", "--seed", "7", "--out", s(&data)];
    assert_eq!(code(&gen), 0);
    let graph = data.join("graph.edges");
    let truth = parse_labels(&read(&data.join("labels.csv"))).unwrap();
    assert_eq!(truth.len(), 100);

    let out = dir.path().join("out");
    let run = |threads: &str| {
        let args = [
            "cluster", "--input", s(&graph), "--format", "graph", "--agreement", "16",
            "--normalize", "--seed", "3", "--threads", threads, "--out", s(&out),
        ];
        assert_eq!(code(&args), 0);
    };
    let files = ["labels.csv", "soft.csv", "tree.json", "condensed.json", "dendrogram.json"];
    run("1");
    let before: Vec<String> = files.iter().map(|f| read(&out.join(f))).collect();
    run("1");
    for (f, x) in files.iter().zip(&before) {
        assert!(!x.is_empty(), "{f} empty");
        assert_eq!(&read(&out.join(f)), x, "{f} differs between identical runs");
    }
    run("4");
    for (f, x) in files.iter().zip(&before) {
        let y = read(&out.join(f));
        let y = y.replace("\"threads\":4", "\"threads\":1").replace("\"threads\": 4", "\"threads\": 1");
        assert_eq!(y, *x, "{f} depends on thread count");
    }
    let first = out;
    let labels_text = read(&first.join("labels.csv"));
    assert!(labels_text.starts_with("# config: {"));
    assert!(labels_text.contains("\"agreement\":16"));
    let labels = parse_labels(&labels_text).unwrap();
    assert!(tangles::eval::nmi(&labels, &truth).unwrap() > 0.8);
    let tree: serde_json::Value = serde_json::from_str(&read(&first.join("tree.json"))).unwrap();
    assert_eq!(tree["schema_version"], 1);
    assert_eq!(tree["config"]["agreement"], 16);
}

#[test]
fn questionnaire_and_points_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q");
    assert_eq!(code(&["generate", "questionnaire", "--n", "150", "--m", "20", "--k", "3", "--p", "0", "--seed", "4", "--out", s(&q)]), 0);
    let out = dir.path().join("q_out");
    let answers = q.join("answers.csv");
    let args = [
        "cluster", "--input", s(&answers), "--format", "binary-matrix",
        "--agreement", "16", "--prune", "1", "--out", s(&out),
    ];
    assert_eq!(code(&args), 0);
    let labels = parse_labels(&read(&out.join("labels.csv"))).unwrap();
    let truth = parse_labels(&read(&q.join("labels.csv"))).unwrap();
    assert_eq!(tangles::eval::nmi(&labels, &truth).unwrap(), 1.0);

    let g = dir.path().join("g");
    assert_eq!(code(&["generate", "gmm", "--n", "300", "--centers", "0,0;6,0", "--sigma", "1", "--seed", "2", "--out", s(&g)]), 0);
    let points = g.join("points.csv");
    for cuts in ["axis-slices", "random-projection"] {
        let out = dir.path().join(cuts);
        let args = [
            "cluster", "--input", s(&points), "--format", "points", "--agreement", "30",
            "--cuts", cuts, "--cut-count", "10", "--weighting", "exponential", "--lambda", "0.5",
            "--out", s(&out),
        ];
        assert_eq!(code(&args), 0, "{cuts}");
        let soft = read(&out.join("soft.csv"));
        assert!(soft.lines().nth(1).is_some());
    }
}

#[test]
fn bounds_print_json() {
    let out = tangles(&["bounds", "thm2", "--n", "100", "--p", "0.3", "--q", "0.05", "--a", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = thm2_psi_range(100.0, 0.3, 0.05, 16.0);
    assert_eq!(v["lower"].as_f64().unwrap(), r.lower);
    assert_eq!(v["upper"].as_f64().unwrap(), r.upper);
    assert_eq!(v["interval"].is_null(), r.interval.is_none());
    let out = tangles(&["bounds", "thm1", "--n", "999", "--m", "40", "--k", "3", "--p", "0.05", "--a", "111"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["total"].as_f64().is_some());
    let out = tangles(&["bounds", "gauss", "--mu", "0,0", "--nu", "4,0", "--sigma", "1", "--n", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["axis"], 0);
    assert_eq!(code(&["bounds", "gauss", "--mu", "0,x", "--nu", "4,0", "--sigma", "1", "--n", "1000"]), 1);
}

#[test]
fn oracle_and_bench() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q");
    assert_eq!(code(&["generate", "questionnaire", "--n", "40", "--m", "10", "--k", "2", "--p", "0.1", "--seed", "1", "--out", s(&q)]), 0);
    let out = tangles(&["oracle", "--input", s(&q.join("answers.csv")), "--format", "binary-matrix", "--agreement", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["match"], true);

    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "seeds = [1, 2]\n[scenario]\nkind = \"questionnaire\"\nn = 90\nm = 12\nk = 3\np = 0.05\n[sweep]\nparam = \"p\"\nvalues = [0.0, 0.05]\n",
    )
    .unwrap();
    let out_dir = dir.path().join("bench");
    assert_eq!(code(&["bench", "--config", s(&cfg), "--out", s(&out_dir)]), 0);
    let plot = read(&out_dir.join("plot.csv"));
    let lines: Vec<&str> = plot.lines().collect();
    assert!(lines[0].starts_with("# config: "));
    assert_eq!(lines[1], "x,mean,std,tangle_count");
    assert_eq!(lines.len(), 4);
    let report: serde_json::Value = serde_json::from_str(&read(&out_dir.join("report.json"))).unwrap();
    assert_eq!(report["points"].as_array().unwrap().len(), 2);
    std::fs::write(&cfg, "seeds = [1]\nunknown = 3\n").unwrap();
    assert_eq!(code(&["bench", "--config", s(&cfg)]), 1);
}
