use std::path::Path;
use std::process::{Command, Output};

fn udcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udcert"))
        .args(args)
        .env_remove("UDCERT_BUDGET_SECS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

#[test]
fn radii_table() {
    let o = udcert(&["radii", "--min", "0.94", "--max", "0.97", "--max-denom", "23"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("3/17") && s.contains("4/23"), "{s}");

    let o = udcert(&["radii", "--min", "2", "--max", "2.1", "--max-denom", "101"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("\n0 radii"));

    let o = udcert(&["radii", "--min", "0.4", "--max", "0.45"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(udcert(&["radii", "--min"]).status.code(), Some(64));
    assert_eq!(udcert(&["witness", "pentagram", "--out", "x"]).status.code(), Some(64));
    assert_eq!(udcert(&["--version"]).status.code(), Some(0));
}

#[test]
fn slab5_solve_exit_codes_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "w.json");
    let o = udcert(&["witness", "slab5", "--eps", "0.65", "--out", &w]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("145 vertices, 409 edges") && s.contains("validation: PASS"), "{s}");

    let o = udcert(&["solve", &w, "--k", "4", "--threads", "1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("UNSAT"));

    let col = path(dir.path(), "c.json");
    let o = udcert(&["solve", &w, "--k", "5", "--coloring-out", &col]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&col).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let colors: Vec<usize> = serde_json::from_value(doc["colors"].clone()).unwrap();
    assert_eq!(colors.len(), 145);

    let svg = path(dir.path(), "w.svg");
    let o = udcert(&["plot", &w, "--coloring", &col, "--out", &svg]);
    assert_eq!(o.status.code(), Some(0));
    let drawing = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(drawing.matches("<circle").count(), 145);
    let mut fills: Vec<&str> = drawing
        .split("fill=\"")
        .skip(1)
        .filter_map(|s| s.split('"').next())
        .filter(|f| *f != "#ffffff")
        .collect();
    fills.sort_unstable();
    fills.dedup();
    assert_eq!(fills.len(), 5);
}

#[test]
fn timeout_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "w.json");
    udcert(&["witness", "strip3", "--out", &w]);
    // A one-decision budget cannot finish a 3-coloring of 49 vertices.
    let o = udcert(&["solve", &w, "--k", "3", "--max-decisions", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_udcert"))
        .args(["solve", &w, "--k", "2"])
        .env("UDCERT_BUDGET_SECS", "30")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn chromatic_on_cycle_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "c7.json");
    let mut doc = String::from("{\"slab\": {\"n\": 1, \"k\": 0, \"epsilon\": \"1\"}, \"points\": [");
    doc += &(0..7).map(|i| format!("[\"{i}\"]")).collect::<Vec<_>>().join(", ");
    doc += "], \"edges\": [";
    doc += &(0..7).map(|i| format!("[{i}, {}]", (i + 1) % 7)).collect::<Vec<_>>().join(", ");
    doc += "]}";
    std::fs::write(&g, doc).unwrap();
    let o = udcert(&["solve", &g, "--chromatic"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("chromatic number 3"), "{}", stdout(&o));
}

#[test]
fn witness_rational_is_exact_and_strip4_rejects_tall_strip() {
    let dir = tempfile::tempdir().unwrap();
    let r = path(dir.path(), "r.json");
    let o = udcert(&["witness", "rational", "--l", "1", "--eps", "2/5", "--out", &r]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max edge residual: 0 (exact)"));
    let text = std::fs::read_to_string(&r).unwrap();
    assert!(text.contains("\"13/14\""));

    let o = udcert(&["witness", "strip4", "--h", "1.2", "--out", &path(dir.path(), "s.json")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn artifacts_are_reproducible_and_carry_config() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.json");
    let run = |out: &str| udcert(&["witness", "curve", "--length", "2.5", "--eps", "0.2", "--out", out]);
    assert_eq!(run(&a).status.code(), Some(0));
    let first = std::fs::read(&a).unwrap();
    assert_eq!(run(&a).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&a).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.contains("tool_version") && text.contains("run_config"));

    let d1 = path(dir.path(), "a1.dimacs");
    let d2 = path(dir.path(), "a2.dimacs");
    udcert(&["export", &a, "--out", &d1]);
    udcert(&["export", &a, "--out", &d1]);
    udcert(&["export", &a, "--out", &d2]);
    let t1 = std::fs::read_to_string(&d1).unwrap();
    let t2 = std::fs::read_to_string(&d2).unwrap();
    let body = |t: &str| t.lines().filter(|l| !l.starts_with('c')).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&t1), body(&t2));
    assert!(t1.lines().any(|l| l.starts_with("p edge ")));

    let o = udcert(&["plot", &path(dir.path(), "missing.json"), "--out", &path(dir.path(), "m.svg")]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn coloring_verify_exit_codes() {
    let o = udcert(&["coloring", "verify", "--scheme", "hex7", "--samples", "20000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("monochromatic unit pairs: 0"));

    let o = udcert(&["coloring", "verify", "--scheme", "slab7", "--k", "2", "--eps", "0.5"]);
    assert_eq!(o.status.code(), Some(3));

    let o = udcert(&["coloring", "verify", "--scheme", "stripe3", "--h-max", "--samples", "5000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mode=exact"));

    let o = udcert(&[
        "coloring", "verify", "--scheme", "slab7", "--k", "2", "--eps", "0.46", "--side", "0.5", "--samples", "100000",
    ]);
    assert_eq!(o.status.code(), Some(3));
}
