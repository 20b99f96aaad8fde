use std::path::Path;
use std::process::{Command, Output};

use prodforest::graph::EdgeKey;
use prodforest::labeling::EdgeLabeling;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodforest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn edge_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn star_tree_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("star.g");
    ok(&["gen-graph", "rooted-tree", "--d", "3", "--n", "1", "--out", p(&out)]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# vertices=4 edges=3 kind=rooted-tree(d=3,n=1)\n"));
    assert_eq!(edge_lines(&out), ["0 1", "0 2", "0 3"]);
}

#[test]
fn product_of_two_edges_is_a_four_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("p2.g");
    let c4 = dir.path().join("c4.g");
    ok(&["gen-graph", "path", "--vertices", "2", "--out", p(&e)]);
    ok(&[
        "gen-graph",
        "product",
        "--left",
        p(&e),
        "--right",
        p(&e),
        "--out",
        p(&c4),
    ]);
    let edges = edge_lines(&c4);
    assert_eq!(edges.len(), 4);
    let mut degree = [0; 4];
    for l in &edges {
        for v in l.split(' ') {
            degree[v.parse::<usize>().unwrap()] += 1;
        }
    }
    assert_eq!(degree, [2; 4]);
}

#[test]
fn manifest_digest_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.g");
    ok(&["gen-graph", "grid", "--width", "5", "--height", "4", "--out", p(&out)]);
    let m = json(&dir.path().join("grid.g.manifest.json"));
    let entry = &m["outputs"][0];
    let bytes = std::fs::read(&out).unwrap();
    assert_eq!(entry["path"], "grid.g");
    assert_eq!(entry["bytes"], bytes.len() as u64);
    let expected = format!("{:016x}", xxhash_rust::xxh3::xxh3_64(&bytes));
    assert_eq!(entry["xxh3_64"], expected);
    assert_eq!(edge_lines(&out).len(), 31);
}

#[test]
fn mst_of_a_tree_is_itself_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t.g");
    let (a, b) = (dir.path().join("a.g"), dir.path().join("b.g"));
    ok(&["gen-graph", "rooted-tree", "--d", "3", "--n", "3", "--out", p(&tree)]);
    ok(&["mst", "--graph", p(&tree), "--seed", "99", "--out", p(&a)]);
    ok(&["mst", "--graph", p(&tree), "--seed", "99", "--out", p(&b)]);
    assert_eq!(edge_lines(&a), edge_lines(&tree));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(std::fs::read_to_string(&a).unwrap().contains("# total_label="));
}

#[test]
fn triangle_drops_its_heaviest_edge() {
    let dir = tempfile::tempdir().unwrap();
    let tri = dir.path().join("tri.g");
    let out = dir.path().join("mst.g");
    std::fs::write(&tri, "# vertices=3\n0 1\n1 2\n0 2\n").unwrap();
    ok(&["mst", "--graph", p(&tri), "--seed", "0x2a", "--out", p(&out)]);

    let l = EdgeLabeling::new(42);
    let mut keys = [
        EdgeKey::canonical(0, 1),
        EdgeKey::canonical(1, 2),
        EdgeKey::canonical(0, 2),
    ];
    keys.sort_by(|x, y| l.edge_label(*x).total_cmp(&l.edge_label(*y)));
    let mut expected: Vec<String> = keys[..2].iter().map(|k| k.to_string()).collect();
    expected.sort();
    assert_eq!(edge_lines(&out), expected);

    let header = std::fs::read_to_string(&out).unwrap();
    let total: f64 = header
        .lines()
        .find_map(|l| l.strip_prefix("# total_label="))
        .unwrap()
        .parse()
        .unwrap();
    let want = l.edge_label(keys[0]) + l.edge_label(keys[1]);
    assert!((total - want).abs() < 1e-15);
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.g");
    std::fs::write(&bad, "# vertices=3\n0 1\n1 two\n").unwrap();
    let out = run(&[
        "mst",
        "--graph",
        p(&bad),
        "--seed",
        "1",
        "--out",
        p(&dir.path().join("o.g")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains(":3"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let missing = run(&[
        "mst",
        "--graph",
        p(&dir.path().join("none.g")),
        "--seed",
        "1",
        "--out",
        "x",
    ]);
    assert_eq!(missing.status.code(), Some(3));
    let bad_param = run(&["gen-graph", "rooted-tree", "--d", "1", "--n", "2", "--out", p(&bad)]);
    assert_eq!(bad_param.status.code(), Some(2));
    let too_big = run(&[
        "gen-graph",
        "grid",
        "--width",
        "100",
        "--height",
        "100",
        "--max-edges",
        "10",
        "--out",
        p(&bad),
    ]);
    assert_eq!(too_big.status.code(), Some(4));
    let disconnected = dir.path().join("two.g");
    std::fs::write(&disconnected, "# vertices=4\n0 1\n2 3\n").unwrap();
    let strict = run(&[
        "mst",
        "--graph",
        p(&disconnected),
        "--seed",
        "1",
        "--strict",
        "--out",
        p(&bad),
    ]);
    assert_eq!(strict.status.code(), Some(5));
}

#[test]
fn single_trial_ln_run_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "ln-experiment",
        "--n-list",
        "2",
        "--trials",
        "1",
        "--seed",
        "5",
        "--out",
        p(dir.path()),
    ]);
    let report = json(&dir.path().join("report.json"));
    assert_eq!(report["per_n"][0]["degenerate"], true);
    assert_eq!(
        std::fs::read_to_string(dir.path().join("trials.jsonl"))
            .unwrap()
            .lines()
            .count(),
        1
    );
}

#[test]
fn ln_run_is_reproducible_and_verifiable() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (dir, workers) in [(&a, "1"), (&b, "3")] {
        ok(&[
            "ln-experiment",
            "--n-list",
            "2,3",
            "--trials",
            "200",
            "--seed",
            "0xbeef",
            "--probes",
            "20,40,60",
            "--workers",
            workers,
            "--out",
            p(dir.path()),
        ]);
    }
    let trials = |d: &tempfile::TempDir| std::fs::read(d.path().join("trials.jsonl")).unwrap();
    assert_eq!(trials(&a), trials(&b));
    assert_eq!(String::from_utf8(trials(&a)).unwrap().lines().count(), 400);

    let csv = std::fs::read_to_string(a.path().join("report.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2 * 3);
    assert!(rows.iter().all(|r| r.split(',').count() == 5));

    let m = json(&a.path().join("manifest.json"));
    assert_eq!(m["seed"], "0xbeef");
    assert_eq!(m["seed_value"], 0xbeef);
    let verified = run(&["verify", p(&a.path().join("manifest.json"))]);
    assert_eq!(verified.status.code(), Some(0));

    std::fs::write(a.path().join("report.csv"), "tampered\n").unwrap();
    assert_eq!(
        run(&["verify", p(&a.path().join("manifest.json"))]).status.code(),
        Some(5)
    );
}

#[test]
fn finite_census_has_one_component() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "fmsf-census",
        "--family",
        "finite-grid",
        "--sizes",
        "6x5",
        "--seeds",
        "4",
        "--seed",
        "3",
        "--out",
        p(dir.path()),
    ]);
    let report = json(&dir.path().join("report.json"));
    let w = &report["per_window"][0];
    assert_eq!(w["core_vertices"], 30);
    assert_eq!(w["mean_components_per_core_vertex"].as_f64().unwrap(), 1.0 / 30.0);
    assert_eq!(report["component_count_kind"], "upper_bound");
}

#[test]
fn batch_config_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[ln]\nd = 2\nb = 2\nn_list = [2]\ntrials = 10\nseed = 8\n").unwrap();
    ok(&["ln-experiment", "--config", p(&cfg), "--out", p(&dir.path().join("o"))]);
    let report = json(&dir.path().join("o/report.json"));
    assert_eq!(report["d"], 2);
    assert_eq!(report["per_n"][0]["trials"], 10);
}
