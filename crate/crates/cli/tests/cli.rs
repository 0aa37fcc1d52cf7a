use std::path::Path;
use std::process::{Command, Output};

use bicrit::format::read_instance;
use bicrit::rational::ceil_log2;
use bicrit::{evaluate_tree, steiner_metrics, TreeSolution};
use serde_json::Value;
use tempfile::TempDir;

fn bicrit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicrit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

const TRIANGLE: &str = "nodes 3 edges 3 terminals *\n0 1 1 3\n1 2 2 2\n0 2 3 1\n";

/// Six nodes, four terminals; every pair of terminals has a d-path of length
/// at most 3.
const SIX: &str = "\
# small Steiner instance
nodes 6 edges 9 terminals 0,2,3,5
0 1 4 1
1 2 3 1
2 3 6 2
3 4 1 1
4 5 2 1
5 0 7 2
1 4 2 1
0 3 9 3
2 5 5 2
";

#[test]
fn random_generation_is_byte_identical() {
    let args = [
        "gen", "random", "--nodes", "6", "--edges", "10", "--seed", "1",
    ];
    let a = stdout(&bicrit(&args));
    assert_eq!(a, stdout(&bicrit(&args)));
    let inst = read_instance(&a).unwrap();
    assert_eq!(inst.graph.edge_count(), 10);
    assert!(inst.graph.is_connected());
    let other = stdout(&bicrit(&[
        "gen", "random", "--nodes", "6", "--edges", "10", "--seed", "2",
    ]));
    assert_ne!(a, other);
    let tree = stdout(&bicrit(&[
        "gen", "random", "--nodes", "6", "--edges", "5", "--seed", "1",
    ]));
    assert_eq!(read_instance(&tree).unwrap().graph.edge_count(), 5);
    let zero = stdout(&bicrit(&[
        "gen",
        "random",
        "--nodes",
        "4",
        "--edges",
        "5",
        "--c-range",
        "0..0",
        "--d-range",
        "0..0",
    ]));
    let zero = read_instance(&zero).unwrap();
    assert!(zero.graph.edges().iter().all(|e| e.c == 0 && e.d == 0));
}

#[test]
fn dcst_report_meets_the_diameter_bound_and_witness_reproduces_it() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "six.txt", SIX);
    let witness = dir.path().join("w.txt");
    let out = bicrit(&[
        "dcst",
        &input,
        "--D",
        "3",
        "--eps",
        "1",
        "--check",
        "--witness",
        witness.to_str().unwrap(),
    ]);
    let report = json(&out);
    let diameter = report["diameter_d"].as_u64().unwrap();
    assert!(diameter <= 2 * ceil_log2(4) as u64 * 3);
    assert!(report["guarantees"]
        .as_array()
        .unwrap()
        .iter()
        .all(|b| b["holds"] == true));
    assert_eq!(report["guarantees"].as_array().unwrap().len(), 2);
    check_witness(&witness, &report);

    // the same witness ids evaluated on the original graph
    let original = read_instance(SIX).unwrap();
    let ids: Vec<usize> = report["edge_ids"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as usize)
        .collect();
    let tree = evaluate_tree(&original.graph, ids).unwrap();
    let (c, d) = steiner_metrics(&original.graph, &tree, &original.terminals).unwrap();
    assert_eq!((c, d), (report["total_c"].as_u64().unwrap(), diameter));
}

fn check_witness(path: &Path, report: &Value) {
    let w = read_instance(&std::fs::read_to_string(path).unwrap()).unwrap();
    let tree = if w.graph.edge_count() == 0 {
        TreeSolution::single_node(w.terminals.iter().next().unwrap())
    } else {
        evaluate_tree(&w.graph, 0..w.graph.edge_count()).unwrap()
    };
    let (c, d) = steiner_metrics(&w.graph, &tree, &w.terminals).unwrap();
    assert_eq!(c, report["total_c"].as_u64().unwrap());
    assert_eq!(d, report["diameter_d"].as_u64().unwrap());
}

#[test]
fn every_solver_emits_a_reproducible_witness() {
    let dir = TempDir::new().unwrap();
    let six = write(&dir, "six.txt", SIX);
    let tri = write(&dir, "tri.txt", TRIANGLE);
    let sp = stdout(&bicrit(&["gen", "partition", "--items", "1,2,3"]));
    let sp = write(&dir, "gadget.sp", &sp);
    let runs: Vec<Vec<&str>> = vec![
        vec!["dcst", &six, "--D", "4", "--path-mode", "fptas"],
        vec!["equivalence", &six, "--C", "20"],
        vec!["equivalence", &six, "--C", "20", "--solver", "oracle"],
        vec!["convert", &six, "--eps", "1"],
        vec!["parametric", &tri, "--C", "4", "--gamma", "1/2"],
        vec!["parametric", &tri, "--C", "3", "--solver", "mdst"],
        vec!["spdp-exact", &sp, "--C", "2"],
        vec!["spdp-fpas", &sp, "--D", "3", "--eps", "1/10"],
        vec!["rsp", &six, "--source", "0", "--target", "3", "--D", "3"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let witness = dir.path().join(format!("w{i}.txt"));
        let mut args = args.clone();
        let wpath = witness.to_string_lossy().into_owned();
        args.extend(["--check", "--witness", &wpath]);
        let first = bicrit(&args);
        let report = json(&first);
        assert!(
            report["guarantees"]
                .as_array()
                .unwrap()
                .iter()
                .all(|b| b["holds"] == true),
            "{args:?}: {report}"
        );
        check_witness(&witness, &report);
        // same flags, same bytes
        assert_eq!(first.stdout, bicrit(&args).stdout, "{args:?}");
    }
}

#[test]
fn oracle_on_triangle_prints_three_rows() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", TRIANGLE);
    let csv = stdout(&bicrit(&["oracle", &tri, "--format", "csv"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "diameter_d,total_c,edge_ids");
    assert_eq!(&lines[1..], ["3,5,1 2", "4,4,0 2", "5,3,0 1"]);
}

#[test]
fn spdp_exact_on_partition_gadget() {
    let dir = TempDir::new().unwrap();
    let text = stdout(&bicrit(&["gen", "partition", "--items", "1,2,3"]));
    assert!(text.starts_with("# H = 3\n"));
    let sp = write(&dir, "gadget.sp", &text);
    let report = json(&bicrit(&["spdp-exact", &sp, "--D", "3", "--check"]));
    assert_eq!(report["total_c"], 3);
    assert_eq!(report["oracle"]["value"], 3);

    let edges = stdout(&bicrit(&[
        "gen",
        "partition",
        "--items",
        "1,2,3",
        "--edge-list",
    ]));
    let inst = read_instance(&edges).unwrap();
    assert_eq!((inst.graph.node_count(), inst.graph.edge_count()), (4, 6));
    assert!(stdout(&bicrit(&["gen", "partition", "--items", "1"])).starts_with("# H = 1/2\n"));
}

#[test]
fn setcover_gadget_round_trips() {
    let dir = TempDir::new().unwrap();
    let text = stdout(&bicrit(&[
        "gen",
        "setcover",
        "--elements",
        "3",
        "--set",
        "0,1,2:5",
    ]));
    let path = write(&dir, "sc.txt", &text);
    let report = json(&bicrit(&["dcst", &path, "--D", "4", "--check"]));
    assert_eq!(report["oracle"]["value"], 5);
    let missing = bicrit(&["gen", "setcover", "--elements", "3", "--set", "0,1:1"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn csv_report_has_one_row() {
    let dir = TempDir::new().unwrap();
    let six = write(&dir, "six.txt", SIX);
    let csv = stdout(&bicrit(&["dcst", &six, "--D", "3", "--format", "csv"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("instance,algorithm,D,C,eps,gamma,total_c,diameter_d"));
    assert!(lines[1].starts_with("six.txt,dcst,3,,1/2,,"));
}

#[test]
fn timing_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", TRIANGLE);
    let plain = json(&bicrit(&["parametric", &tri, "--C", "4"]));
    assert!(plain.get("wall_time_ms").is_none());
    let timed = json(&bicrit(&["parametric", &tri, "--C", "4", "--timing"]));
    assert!(timed["wall_time_ms"].as_f64().is_some());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let six = write(&dir, "six.txt", SIX);
    // D = 0 cannot join any two terminals
    assert_eq!(bicrit(&["dcst", &six, "--D", "0"]).status.code(), Some(2));
    assert_eq!(
        bicrit(&["rsp", &six, "--source", "0", "--target", "3", "--D", "0"])
            .status
            .code(),
        Some(2)
    );

    let big = stdout(&bicrit(&[
        "gen", "random", "--nodes", "14", "--edges", "20", "--seed", "3",
    ]));
    let big = write(&dir, "big.txt", &big);
    assert_eq!(bicrit(&["oracle", &big]).status.code(), Some(3));
    // --check degrades to a note instead of failing
    let report = json(&bicrit(&["dcst", &big, "--D", "100", "--check"]));
    assert!(report["oracle_note"].as_str().unwrap().contains("cap"));

    let bad = write(&dir, "bad.txt", "nodes 2 edges 1 terminals *\n0 1 x 1\n");
    assert_eq!(bicrit(&["dcst", &bad, "--D", "3"]).status.code(), Some(1));
    assert_eq!(
        bicrit(&["dcst", "/nonexistent/file", "--D", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bicrit(&["dcst", &six, "--D", "3", "--eps", "zero"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bicrit(&["spdp-exact", &six, "--D", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(bicrit(&["--help"]).status.code(), Some(0));
}
