use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn mabody(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mabody")).args(args).env_remove("MABODY_CONFIG").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value_after(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no {key} in {text}"));
    line[key.len()..].trim().parse().unwrap()
}

#[test]
fn bstar_on_disk() {
    let disk = data("disk.json");
    let o = mabody(&["bstar", "--body", disk.to_str().unwrap(), "--x", "0.5,0", "--y", "1,0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!((value_after(&out, "b* =") - 0.75f64.sqrt()).abs() < 1e-9);
    assert!((value_after(&out, "delta_B =") - 1.0 / 0.75f64.sqrt()).abs() < 1e-9);
    assert!(out.contains("witness a ="));
}

#[test]
fn bisection_solver_agrees() {
    let tri = data("triangle.json");
    let run = |solver: &str| {
        let o = mabody(&["bstar", "--body", tri.to_str().unwrap(), "--x", "0.2,0.3", "--y", "1,1", "--solver", solver]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        value_after(&stdout(&o), "b* =")
    };
    let (exact, bisection) = (run("exact"), run("bisection"));
    assert!((exact - bisection).abs() / exact < 2e-4, "{exact} vs {bisection}");
}

#[test]
fn exit_codes() {
    let disk = data("disk.json");
    let disk = disk.to_str().unwrap();
    let code = |args: &[&str]| mabody(args).status.code();

    let zero = mabody(&["bstar", "--body", disk, "--x", "0,0", "--y", "0,0"]);
    assert_eq!(zero.status.code(), Some(3));
    assert!(stderr(&zero).contains("direction"), "{}", stderr(&zero));
    let outside = mabody(&["bstar", "--body", disk, "--x", "2,0", "--y", "1,0"]);
    assert_eq!(outside.status.code(), Some(3));
    assert!(stderr(&outside).contains("interior"), "{}", stderr(&outside));

    assert_eq!(code(&["bstar", "--body", disk, "--x", "a,b", "--y", "1,0"]), Some(2));
    assert_eq!(code(&["bstar", "--body", disk, "--x", "0,0"]), Some(2));
    assert_eq!(code(&["bstar", "--body", "/nonexistent/body.json", "--x", "0,0", "--y", "1,0"]), Some(2));
    assert_eq!(code(&["verify", "everything"]), Some(2));
    assert_eq!(code(&["bstar", "--body", disk, "--x", "0,0", "--y", "1,0", "--solver", "magic"]), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"kind":"ball","center":[0,0],"radius":1,"colour":"red"}"#).unwrap();
    assert_eq!(code(&["bstar", "--body", bad.to_str().unwrap(), "--x", "0,0", "--y", "1,0"]), Some(2));

    let unwritable = dir.path().join("missing").join("out.csv");
    let o = mabody(&["density", "--body", disk, "--grid", "5", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn density_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let square = data("square.json");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = mabody(&["density", "--body", square.to_str().unwrap(), "--grid", "11", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        std::fs::read(out).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next(), Some("x1,x2,lambda"));
    let center = text.lines().find(|l| l.starts_with("0,0,")).unwrap();
    let lambda: f64 = center.rsplit(',').next().unwrap().parse().unwrap();
    assert!((lambda - 4.0).abs() < 1e-6, "{center}");
}

#[test]
fn density_interval_and_disk_centers() {
    let o = mabody(&["density", "--body", data("interval.json").to_str().unwrap(), "--grid", "1001"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("x1,lambda"));
    let row = out.lines().find(|l| l.starts_with("0,")).unwrap();
    assert!((row[2..].parse::<f64>().unwrap() - 2.0).abs() < 1e-12, "{row}");

    let o = mabody(&["density", "--body", data("disk.json").to_str().unwrap(), "--grid", "101", "--fast"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("0,0,")).unwrap();
    let lambda: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((lambda - 2.0 * std::f64::consts::PI).abs() < 1e-3, "{row}");
}

#[test]
fn svg_heatmap() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("square.svg");
    let o = mabody(&[
        "density",
        "--body",
        data("square.json").to_str().unwrap(),
        "--grid",
        "9",
        "--out",
        dir.path().join("square.csv").to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    // Boundary nodes are dropped: 7 x 7 interior samples, one rect each.
    let rows = std::fs::read_to_string(dir.path().join("square.csv")).unwrap().lines().count() - 1;
    assert_eq!(rows, 49);
    assert_eq!(text.matches("<rect").count(), rows);

    let o = mabody(&["density", "--body", data("interval.json").to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mass_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mass.json");
    let o = mabody(&["mass", "--body", data("interval.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    for key in ["body", "n", "resolution", "margin", "mass", "target", "rel_error"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(report["body"], "interval");
    assert!(report["rel_error"].as_f64().unwrap() < 1e-3);
    assert_eq!(mabody(&["mass", "--body", data("interval.json").to_str().unwrap(), "--margin", "0.01,x"]).status.code(), Some(2));
}

#[test]
fn config_file_sets_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    std::fs::write(&cfg, r#"{"grid": 5}"#).unwrap();
    let square = data("square.json");
    let run = |extra: &[&str]| {
        let mut args = vec!["density", "--body", square.to_str().unwrap()];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_mabody")).args(&args).env("MABODY_CONFIG", &cfg).output().unwrap()
    };
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // Interior nodes of a 5 x 5 grid, then of a 7 x 7 grid.
    assert_eq!(stdout(&o).lines().count(), 1 + 9);
    let o = run(&["--grid", "7"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 25);

    std::fs::write(&cfg, r#"{"grid": "many"}"#).unwrap();
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn verify_foliation_fast() {
    let o = mabody(&["verify", "foliation", "--fast"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("1.."));
    assert!(!out.contains("not ok"));
}
