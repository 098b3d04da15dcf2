use std::path::Path;
use std::process::{Command, Output};

fn hlvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlvar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const DELTA_1D: &str = r#"{"dim":1,"support":[{"point":[0],"value":"1"}]}"#;

#[test]
fn count_prints_ball_sizes() {
    for (d, k, n) in [("1", "5", "11"), ("2", "0", "1"), ("2", "3", "25"), ("3", "2", "25")] {
        let o = hlvar(&["count", "--dim", d, "--radius", k]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), format!("{n}\n"));
    }
    let o = hlvar(&["count", "--dim", "2", "--radius", "1", "--enumerate"]);
    assert_eq!(stdout(&o), "5\n(-1,0)\n(0,-1)\n(0,0)\n(0,1)\n(1,0)\n");
}

#[test]
fn count_exit_codes() {
    assert_eq!(hlvar(&["count", "--dim", "0", "--radius", "3"]).status.code(), Some(2));
    assert_eq!(hlvar(&["count", "--dim", "two", "--radius", "3"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_hlvar"))
        .args(["count", "--dim", "3", "--radius", "10", "--enumerate"])
        .env("HLVAR_ENUM_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn maxfn_writes_exact_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "delta.json", DELTA_1D);
    let out = dir.path().join("m.csv");
    let o = hlvar(&["maxfn", "--input", &input, "--geometry", "centered1d", "--box", "2", "--output", out.to_str().unwrap(), "--digits", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out).unwrap();
    assert_eq!(
        csv,
        "point,value,decimal\n(-2),1/5,0.2000\n(-1),1/3,0.3333\n(0),1,1.0000\n(1),1/3,0.3333\n(2),1/5,0.2000\n"
    );
}

#[test]
fn maxfn_cube_in_one_dimension_is_the_interval_operator() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "f.json", r#"{"dim":1,"support":[{"point":[-2],"value":"3/2"},{"point":[3],"value":"1/7"}]}"#);
    let a = hlvar(&["maxfn", "--input", &input, "--geometry", "cube", "--box", "9"]);
    let b = hlvar(&["maxfn", "--input", &input, "--geometry", "uncentered1d", "--box", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn maxfn_empty_support_gives_zero_rows() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "z.json", r#"{"dim":2,"support":[]}"#);
    let o = hlvar(&["maxfn", "--input", &input, "--geometry", "l1", "--box", "1"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0,0.000000000000")));
    assert!(text.contains("\"(-1,-1)\""));
}

#[test]
fn maxfn_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"dim\": 1,\n \"support\": [{\"point\": [0], \"value\": 0.5}]}");
    let o = hlvar(&["maxfn", "--input", &bad, "--geometry", "l1", "--box", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json:2:"));
    let zero = write(dir.path(), "zero.json", r#"{"dim":1,"support":[{"point":[0],"value":"0/3"}]}"#);
    assert_eq!(hlvar(&["maxfn", "--input", &zero, "--geometry", "l1", "--box", "1"]).status.code(), Some(2));
    let two = write(dir.path(), "two.json", r#"{"dim":2,"support":[{"point":[0,0],"value":"1"}]}"#);
    assert_eq!(hlvar(&["maxfn", "--input", &two, "--geometry", "centered1d", "--box", "1"]).status.code(), Some(4));
    assert_eq!(hlvar(&["maxfn", "--input", &two, "--geometry", "hexagon", "--box", "1"]).status.code(), Some(2));
}

#[test]
fn constant_reports_exact_enclosures() {
    let o = hlvar(&["constant", "--kind", "uncentered", "--dim", "1", "--terms", "10"]);
    assert_eq!(stdout(&o).lines().next(), Some("[2, 2]"));
    let o = hlvar(&["constant", "--kind", "uncentered", "--dim", "2", "--terms", "999"]);
    assert_eq!(stdout(&o).lines().next(), Some("[1499/125, 12]"));
    let o = hlvar(&["constant", "--kind", "centered", "--dim", "2", "--terms", "0"]);
    assert!(stdout(&o).starts_with("[4, "));
    assert!(stdout(&o).contains("term_k <= c/(k(k+1))"));
    assert_eq!(hlvar(&["constant", "--kind", "centered", "--dim", "1", "--terms", "3"]).status.code(), Some(2));
    assert_eq!(hlvar(&["constant", "--kind", "diagonal", "--dim", "2", "--terms", "3"]).status.code(), Some(2));
}

#[test]
fn verify_delta_passes_with_json_summary() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "delta.json", DELTA_1D);
    let o = hlvar(&["verify", "--input", &input, "--geometry", "centered1d", "--epsilon", "0.001", "--json", "-"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["bound"], "2");
    assert_eq!(v["epsilon"], "1/1000");
    assert_eq!(v["instance"]["support"][0]["value"], "1");
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace[0]["variation"], "4/3");
    // the human report went to stderr
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
}

#[test]
fn verify_argument_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "delta.json", DELTA_1D);
    assert_eq!(hlvar(&["verify", "--input", &input, "--geometry", "l1", "--epsilon", "-1"]).status.code(), Some(2));
    assert_eq!(hlvar(&["verify", "--input", &input]).status.code(), Some(2));
    assert_eq!(hlvar(&["verify"]).status.code(), Some(2));
    let empty = write(dir.path(), "empty.json", r#"{"dim":1,"support":[]}"#);
    assert_eq!(hlvar(&["verify", "--input", &empty, "--geometry", "l1"]).status.code(), Some(2));
}

#[test]
fn verify_lemma_suite_passes() {
    let o = hlvar(&["verify", "--suite", "lemmas"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("PASS log-concavity d=6 k<=2000"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn scan_rows_sorted_by_gap() {
    let o = hlvar(&["scan", "--geometry", "centered1d", "--family", "two-point", "--radius", "2", "--box", "40"]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_reader(&o.stdout[..]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1 + 2 * 9);
    let gaps: Vec<f64> = rows.iter().map(|r| r[11].parse().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(&rows[0][12], "true");
    assert!(rows.iter().skip(1).all(|r| &r[12] == "false" && r[11].parse::<f64>().unwrap() > 0.0));
    assert_eq!(
        hlvar(&["scan", "--geometry", "l1", "--family", "three-point", "--radius", "2", "--box", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn scan_delta_family_has_tail_only_gap() {
    let o = hlvar(&["scan", "--geometry", "centered1d", "--family", "delta", "--radius", "0", "--box", "50"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().contains(",200/101,"));
}
