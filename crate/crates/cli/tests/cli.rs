use std::fs;
use std::process::{Command, Output};

use tempfile::tempdir;

const TWO_DYCK: &str = "UUUUDUUUUDUUDUDDUUUDDUUUUDD";
const THREE_DYCK: &str = "UUUUUUDUUUUUDDUDUUUUUDUUUUDUDUUUUUUUUDDD";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdyck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_kdyck"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_all_signatures() {
    let o = run(&[
        "count",
        "--k",
        "2",
        "--m",
        "2",
        "--t",
        "0",
        "--all-signatures",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "(0,2): 2\n(1,1): 1\n(2,0): 0\nsum: 3\ntotal: 3\nfuss-catalan: 3\n"
    );
}

#[test]
fn count_single_row_k3() {
    let o = run(&["count", "--k", "3", "--m", "1", "--all-signatures"]);
    let text = stdout(&o);
    assert!(
        text.starts_with("(0,0,1): 1\n(0,1,0): 0\n(1,0,0): 0\n"),
        "{text}"
    );
}

#[test]
fn count_bivariate() {
    let o = run(&["count", "--k", "2", "--n", "3", "--bivariate"]);
    assert_eq!(stdout(&o), "j=0: 2\nj=1: 1\n");
}

#[test]
fn count_bounded_csv() {
    let o = run(&[
        "count",
        "--k",
        "2",
        "--t",
        "1",
        "--m",
        "2",
        "--all-signatures",
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&o),
        "k,t,m,a_1,a_2,count\n2,1,2,0,2,2\n2,1,2,1,1,3\n2,1,2,2,0,2\n"
    );
}

#[test]
fn count_signature_json_uses_decimal_strings() {
    let o = run(&[
        "count",
        "--k",
        "3",
        "--signature",
        "1,3,6",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][0]["count"], "960960");
    assert_eq!(v["rows"][0]["signature"], serde_json::json!([1, 3, 6]));
}

#[test]
fn count_by_node_count() {
    let by_n = run(&["count", "--k", "3", "--t", "2", "--n", "7"]);
    let by_m = run(&["count", "--k", "3", "--t", "2", "--m", "4"]);
    assert_eq!(stdout(&by_n), stdout(&by_m));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["count", "--k", "1", "--m", "2"][..],
        &["count", "--k", "2", "--t", "2", "--m", "1"],
        &["count", "--k", "2"],
        &["enumerate", "trees", "--k", "2", "--m", "2", "--t", "1"],
        &["series", "--k", "2", "--order", "3", "--z", "4"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn enumerate_with_trailer() {
    assert_eq!(
        stdout(&run(&["enumerate", "paths", "--k", "2", "--m", "1"])),
        "UUD\n1\n"
    );
    let text = stdout(&run(&["enumerate", "paths", "--k", "2", "--m", "3"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[12], "12");
    let text = stdout(&run(&["enumerate", "trees", "--k", "2", "--m", "2"]));
    assert_eq!(text.lines().count(), 4);
    assert!(text.ends_with("3\n"));
}

#[test]
fn enumerate_is_deterministic_and_writes_files() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("paths.txt");
    let o = run(&[
        "enumerate",
        "paths",
        "--k",
        "3",
        "--m",
        "4",
        "--t",
        "2",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let first = fs::read_to_string(&out).unwrap();
    let again = stdout(&run(&[
        "enumerate",
        "paths",
        "--k",
        "3",
        "--m",
        "4",
        "--t",
        "2",
    ]));
    assert_eq!(first, again);
}

#[test]
fn biject_single_edge() {
    let o = run_stdin(&["biject", "--k", "2", "--from", "path"], "UUD\n");
    assert_eq!(stdout(&o), "(|)\n");
}

#[test]
fn biject_worked_path_with_stats() {
    let o = run_stdin(
        &["biject", "--k", "2", "--from", "path", "--stats"],
        &format!("{TWO_DYCK}\n"),
    );
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("\tedges (2,7) residues (2,7)\n"));
}

#[test]
fn biject_json_shape() {
    let o = run_stdin(
        &["biject", "--k", "2", "--from", "path", "--format", "json"],
        "UUD\n",
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"tree": "(|)", "path": "UUD", "stats": [0, 1]})
    );
}

#[test]
fn biject_round_trips_files() {
    let dir = tempdir().unwrap();
    for (k, t) in [(2, 0), (3, 0), (2, 1), (3, 1), (3, 2)] {
        let paths = dir.path().join(format!("p{k}{t}.txt"));
        let trees = dir.path().join(format!("t{k}{t}.txt"));
        let listing = stdout(&run(&[
            "enumerate",
            "paths",
            "--k",
            &k.to_string(),
            "--m",
            "3",
            "--t",
            &t.to_string(),
        ]));
        let mut lines: Vec<&str> = listing.lines().collect();
        lines.pop();
        let original = lines.join("\n") + "\n";
        fs::write(&paths, &original).unwrap();
        let (ks, ts) = (k.to_string(), t.to_string());
        let forward = run(&[
            "biject",
            "--k",
            &ks,
            "--t",
            &ts,
            "--from",
            "path",
            "--input",
            paths.to_str().unwrap(),
        ]);
        assert!(forward.status.success());
        fs::write(&trees, &forward.stdout).unwrap();
        let back = run(&[
            "biject",
            "--k",
            &ks,
            "--t",
            &ts,
            "--from",
            "tree",
            "--input",
            trees.to_str().unwrap(),
        ]);
        assert_eq!(stdout(&back), original, "k={k} t={t}");
        let stats = run(&[
            "biject",
            "--k",
            &ks,
            "--t",
            &ts,
            "--from",
            "tree",
            "--stats",
            "--input",
            trees.to_str().unwrap(),
        ]);
        assert!(stats.status.success(), "k={k} t={t}");
    }
}

#[test]
fn biject_reports_line_numbers() {
    let o = run_stdin(&["biject", "--k", "2", "--from", "path"], "UUD\nUUDD\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = run_stdin(&["biject", "--k", "2", "--from", "tree"], "(|)\n(|\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn verify_default_ranges_pass() {
    let o = run(&["verify"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("k=3 t=2 m=5: pass"));
    assert!(text.contains("all identities hold"));
}

#[test]
fn verify_trivial_range() {
    let o = run(&["verify", "--k", "2", "--m", "0"]);
    assert!(o.status.success());
}

#[test]
fn verify_printed_bivariate_fails_at_three() {
    let o = run(&["verify", "--m", "0", "--use-printed-bivariate"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("bivariate n=2: pass"));
    assert!(text.contains("bivariate n=3: FAIL\n    mismatch j=1: formula 0, oracle 1"));
    assert!(text.contains("printed bivariate formula first disagrees at n=3"));
}

#[test]
fn verify_respects_thread_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_kdyck"))
        .args(["verify", "--m", "3"])
        .env("KDYCK_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_kdyck"))
        .args(["verify"])
        .env("KDYCK_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn render_worked_path_svg() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("path.txt");
    let out = dir.path().join("path.svg");
    fs::write(&input, THREE_DYCK).unwrap();
    let o = run(&[
        "render",
        "path",
        "--k",
        "3",
        "--input",
        input.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let svg = fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    for (class, n) in [(1, 1), (2, 3), (3, 6)] {
        assert_eq!(
            svg.matches(&format!("down-r{class}\"")).count(),
            n,
            "class {class}"
        );
    }
}

#[test]
fn render_other_figures() {
    let o = run_stdin(&["render", "path", "--format", "tikz"], "\n");
    assert!(o.status.success());
    let o = run_stdin(
        &["render", "tree", "--k", "3", "--format", "tikz"],
        "(||(||))(||)\n",
    );
    assert!(stdout(&o).contains("\\begin{tikzpicture}"));
    let o = run_stdin(
        &["render", "geometric"],
        "1-5,1-9,3-2,3-4,5-3,5-6,5-7,5-8,9-10\n",
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("lime"));
    let o = run_stdin(&["render", "geometric"], "1-3,2-4\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn series_lines() {
    let o = run(&["series", "--k", "2", "--order", "3"]);
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(
        lines[3],
        serde_json::json!({"z": 3, "terms": [
            {"exponents": [0, 2], "count": "2"},
            {"exponents": [1, 1], "count": "1"}
        ]})
    );
    let o = run(&[
        "series", "--k", "3", "--t", "0", "--order", "11", "--z", "11",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let term = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["exponents"] == serde_json::json!([1, 3, 6]))
        .unwrap();
    assert_eq!(term["count"], "960960");
}
