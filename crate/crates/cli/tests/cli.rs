use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use clustered_apsp::bench::{random_bit_matrix, random_digraph, random_scalar_matrix};
use clustered_apsp::io;
use clustered_apsp::oracle::floyd_warshall_vertex_weighted;

fn capsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capsp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn apsp_with_oracle_succeeds_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let g = random_digraph(40, 0.1, 10.0, 3);
    let input = dir.path().join("g.txt");
    let out = dir.path().join("d.csv");
    let stats = dir.path().join("stats.jsonl");
    fs::write(&input, io::format_graph(&g)).unwrap();

    let o = capsp(&[
        "apsp",
        path_str(&input),
        "--oracle",
        "--seed",
        "5",
        "--out",
        path_str(&out),
        "--stats",
        path_str(&stats),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let d = io::parse_scalar_csv(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(d.first_mismatch(&floyd_warshall_vertex_weighted(&g), 1e-9).is_none());
    let line = fs::read_to_string(&stats).unwrap();
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["command"], "apsp");
    assert_eq!(v["n"], 40);
    assert_eq!(v["oracle_agrees"], true);
    assert!(v["t"].as_u64().unwrap() >= 2);
}

#[test]
fn apsp_flags_and_thread_counts_agree() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    fs::write(&input, io::format_graph(&random_digraph(30, 0.08, 10.0, 8))).unwrap();
    let base = capsp(&["apsp", path_str(&input), "--threads", "1"]);
    for extra in [
        vec!["--threads", "3"],
        vec!["--mst", "exact", "--side", "left", "--t", "4", "--oracle"],
        vec!["--side", "right", "--epsilon", "1", "--oracle"],
    ] {
        let mut args = vec!["apsp", path_str(&input)];
        args.extend(extra.iter());
        let o = capsp(&args);
        assert_eq!(o.status.code(), Some(0));
        let a = io::parse_scalar_csv(&String::from_utf8(base.stdout.clone()).unwrap()).unwrap();
        let b = io::parse_scalar_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
        assert!(a.first_mismatch(&b, 1e-12).is_none());
    }
}

#[test]
fn malformed_graph_header_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    fs::write(&input, "3\n1 2 3\n").unwrap();
    let o = capsp(&["apsp", path_str(&input)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let o = capsp(&["apsp", path_str(&dir.path().join("missing.txt"))]);
    assert_eq!(o.status.code(), Some(2));
    let o = capsp(&["apsp", path_str(&input), "--mst", "euclid"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn edge_class_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.txt");
    fs::write(&input, "3 3\n2 1 0.5\n1 1 1\n0 1 0\n1 2 1\n0 2 0\n").unwrap();
    let o = capsp(&["apsp", path_str(&input), "--classes", "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let d = io::parse_scalar_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    // 0 -> 2 directly costs 1 + 1 + 1 = 3; via 1 it costs 1 + 1 + 1 + 0.5 + 1 = 4.5.
    assert_eq!(d.get(0, 2), 3.0);
    assert_eq!(d.get(0, 1), 3.0);
}

#[test]
fn disk_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.txt");
    let o = capsp(&["gen-disk", "--n", "120", "--b", "3", "--r", "0.15", "--seed", "4", "-o", path_str(&pts)]);
    assert_eq!(o.status.code(), Some(0));
    let set = io::parse_point_set(&fs::read_to_string(&pts).unwrap()).unwrap();
    assert_eq!(set.len(), 120);

    let o = capsp(&["apsp", path_str(&pts), "--disk", "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let o = capsp(&["mst", path_str(&pts), "--disk"]);
    assert_eq!(o.status.code(), Some(0));
    let tree = io::parse_tree::<usize>(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(tree.node_count(), 120);
}

#[test]
fn closure_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("b.txt");
    let b = random_bit_matrix(60, 60, 0.02, 1);
    fs::write(&input, io::format_bit_matrix(&b)).unwrap();
    let o = capsp(&["closure", path_str(&input), "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let c = io::parse_bit_matrix(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(c, clustered_apsp::oracle::bfs_closure(&b).unwrap());

    fs::write(&input, "2 3\n010\n001\n").unwrap();
    assert_eq!(capsp(&["closure", path_str(&input)]).status.code(), Some(2));
}

#[test]
fn mixed_outputs_and_stats_line() {
    let dir = tempfile::tempdir().unwrap();
    let (a_path, b_path) = (dir.path().join("a.csv"), dir.path().join("b.txt"));
    let (c_path, w_path) = (dir.path().join("c.csv"), dir.path().join("w.csv"));
    let a = random_scalar_matrix(20, 30, 0.1, 2);
    let b = random_bit_matrix(30, 25, 0.2, 3);
    fs::write(&a_path, io::format_scalar_csv(&a)).unwrap();
    fs::write(&b_path, io::format_bit_matrix(&b)).unwrap();

    let args = [
        "mixed", "--a", path_str(&a_path), "--b", path_str(&b_path), "--mst", "exact", "--oracle", "--c",
        path_str(&c_path), "--w", path_str(&w_path),
    ];
    let o = capsp(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stats: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert!(stats["op_count"].as_u64().unwrap() > 0);

    let naive = clustered_apsp::mixed::mixed_right_naive(&a, &b).unwrap();
    let c = io::parse_scalar_csv(&fs::read_to_string(&c_path).unwrap()).unwrap();
    let w = io::parse_witness_csv(&fs::read_to_string(&w_path).unwrap()).unwrap();
    assert!(c.bit_eq(&naive.c));
    assert_eq!(w, naive.w);

    let o = capsp(&["mixed", "--a", path_str(&a_path), "--b", path_str(&b_path), "--naive"]);
    assert_eq!(o.status.code(), Some(0));
    let o = capsp(&["mixed", "--a", path_str(&a_path), "--b", path_str(&b_path), "--side", "left"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mst_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.txt");
    let m = random_bit_matrix(25, 40, 0.4, 6);
    fs::write(&input, io::format_bit_matrix(&m)).unwrap();
    let o = capsp(&["mst", path_str(&input), "--mst", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let tree = io::parse_tree::<usize>(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(tree.cost(), clustered_apsp::exact_mst(&m).unwrap().cost());
}

#[test]
fn bench_emits_one_report_per_instance() {
    let o = capsp(&["bench", "--suite", "clustered", "--n", "64,96", "--oracle", "--apsp"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    for (line, n) in lines.iter().zip([64, 96]) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["n"], n);
        assert_eq!(v["oracle_agrees"], true);
        assert!(v["instance"].as_str().unwrap().starts_with("clustered"));
        assert!(v["times"]["mixed"].is_number());
    }
    let o = capsp(&["bench", "--suite", "both", "--n", "32"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 2);
}
