mod common;

use std::fs;
use std::process::{Command, Output};

use common::fixture_path;

fn centrality(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_centrality"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn argmax_line(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr)
        .lines()
        .find(|l| l.contains("argmax"))
        .unwrap()
        .to_string()
}

#[test]
fn generated_modular_run_writes_one_row_per_node() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gc.csv");
    let o = centrality(&[
        "--generate",
        "1000",
        "--modules",
        "sqrt",
        "--seed",
        "7",
        "--algo",
        "modular",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("node,module,lc,ec,gc"));
    assert_eq!(lines.count(), 1000);
}

#[test]
fn halve_divides_every_score_by_two() {
    let g = fixture_path("two_triangles.txt");
    let g = g.to_str().unwrap();
    let full = stdout(&centrality(&["--input", g, "--algo", "exact"]));
    let half = stdout(&centrality(&["--input", g, "--algo", "exact", "--halve"]));
    assert_eq!(full.lines().nth(3), Some("2,0,12"));
    assert_eq!(half.lines().nth(3), Some("2,0,6"));
    assert_eq!(full.lines().count(), half.lines().count());
}

#[test]
fn validated_modular_run_agrees_with_exact() {
    let base = ["--generate", "100", "--seed", "7", "--enforce-p"];
    let m = centrality(&[&base[..], &["--algo", "modular", "--validate"]].concat());
    let e = centrality(&[&base[..], &["--algo", "exact"]].concat());
    assert!(m.status.success() && e.status.success());
    let node = |l: String| l.split_whitespace().nth(3).unwrap().to_string();
    assert_eq!(node(argmax_line(&m)), node(argmax_line(&e)));
}

#[test]
fn exit_codes() {
    assert_eq!(centrality(&[]).status.code(), Some(2));
    assert_eq!(
        centrality(&["--generate", "50", "--algo", "fastest"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        centrality(&["--input", "/nonexistent/graph.txt"])
            .status
            .code(),
        Some(1)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "n 0 0\ne 0 0 1\n").unwrap();
    assert_eq!(
        centrality(&["--input", bad.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    let big = centrality(&["--generate", "100", "--algo", "oracle"]);
    assert_eq!(big.status.code(), Some(3));
    let open = centrality(&[
        "--generate",
        "100",
        "--seed",
        "7",
        "--algo",
        "modular",
        "--validate",
    ]);
    assert_eq!(open.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&open.stderr).contains("leaving the module"));
}

#[test]
fn module_csv_and_bench_rows() {
    let dir = tempfile::tempdir().unwrap();
    let modules = dir.path().join("modules.csv");
    let bench = dir.path().join("bench.csv");
    let g = fixture_path("central_outside_top_module.txt");
    for _ in 0..2 {
        let o = centrality(&[
            "--input",
            g.to_str().unwrap(),
            "--algo",
            "modular",
            "--threads",
            "1",
            "--module-out",
            modules.to_str().unwrap(),
            "--bench",
            "--bench-out",
            bench.to_str().unwrap(),
        ]);
        stdout(&o);
    }
    assert_eq!(
        fs::read_to_string(&modules).unwrap(),
        "module,ec_module\n0,80\n1,114\n2,26\n"
    );
    let rows: Vec<String> = fs::read_to_string(&bench)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(
        rows[0],
        "algo,n,k,threads,seed,wall_seconds,argmax_node,argmax_score"
    );
    assert!(rows[1].starts_with("modular,15,3,1,0,"));
    assert!(rows[1].ends_with(",0,162"));
}

#[test]
fn emitted_graph_reproduces_generated_run() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    let generated = stdout(&centrality(&[
        "--generate",
        "60",
        "--seed",
        "3",
        "--algo",
        "coarse",
        "--emit-graph",
        file.to_str().unwrap(),
    ]));
    let loaded = stdout(&centrality(&[
        "--input",
        file.to_str().unwrap(),
        "--algo",
        "coarse",
    ]));
    assert_eq!(generated, loaded);
}

#[test]
fn repeated_runs_and_thread_counts_give_identical_csv() {
    let args = ["--generate", "300", "--seed", "11", "--algo", "modular"];
    let a = stdout(&centrality(&[&args[..], &["--threads", "1"]].concat()));
    let b = stdout(&centrality(&[&args[..], &["--threads", "3"]].concat()));
    assert_eq!(a, b);
}

#[test]
fn compare_mode_emits_one_row_per_cell() {
    let o = centrality(&[
        "--compare-sizes",
        "40,80",
        "--compare-rules",
        "sqrt,hundredth",
        "--repeats",
        "3",
    ]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "algo,n,k,median_seconds");
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert_eq!(
        centrality(&["--compare-sizes", "80,40"]).status.code(),
        Some(2)
    );
    assert_eq!(
        centrality(&["--compare-sizes", "40", "--repeats", "2"])
            .status
            .code(),
        Some(2)
    );
}
