use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_billiard-lab")).current_dir(dir).args(args).output().unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn unfold_square() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("c.toml"), "command = \"unfold\"\n[input]\nbuiltin_polygon = \"square\"\n").unwrap();
    let out = run(tmp.path(), &["unfold", "--config", "c.toml", "--out", "run"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&tmp.path().join("run"));
    assert_eq!(r["report"]["cells"], 4);
    assert_eq!(r["report"]["genus"], 1);
    let surface: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("run/surface.json")).unwrap()).unwrap();
    assert_eq!(surface["surface"]["cells"].as_array().unwrap().len(), 4);
    assert_eq!(surface["config_hash"], r["config_hash"]);

    // The written surface is a valid input.
    fs::write(tmp.path().join("i.toml"), "[input]\nsurface = \"run/surface.json\"\n[iet]\ntheta = 0.7\n").unwrap();
    let out = run(tmp.path(), &["iet", "--config", "i.toml", "--out", "iet"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&tmp.path().join("iet"));
    let (a, b) = (r["report"]["swept_area"].as_f64().unwrap(), r["report"]["surface_area"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn veech_test_at_zero_frequency() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("c.toml"), "[input]\nbuiltin_surface = \"torus\"\n[veech]\ntheta = 0.3\nalphas = [0.0]\n").unwrap();
    let out = run(tmp.path(), &["veech-test", "--config", "c.toml", "--out", "run"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&tmp.path().join("run"));
    let t = &r["report"]["tests"][0];
    assert_eq!(t["verdict"], "not_excluded");
    assert!(t["values"].as_array().unwrap().iter().all(|v| v.as_f64() == Some(0.0)));
}

#[test]
fn replay_is_byte_identical_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = "seed = 11\n[input]\nbuiltin_polygon = \"square\"\n[equidist]\nsamples = 16\nhorizon = 50.0\n";
    fs::write(tmp.path().join("c.toml"), cfg).unwrap();
    assert!(run(tmp.path(), &["equidist", "--config", "c.toml", "--out", "a", "--threads", "1"]).status.success());
    assert!(run(tmp.path(), &["equidist", "--config", "c.toml", "--out", "b", "--threads", "4"]).status.success());
    for f in ["report.json", "data.csv", "config.toml"] {
        assert_eq!(fs::read(tmp.path().join("a").join(f)).unwrap(), fs::read(tmp.path().join("b").join(f)).unwrap(), "{f}");
    }
    // Replaying the written effective config reproduces the run.
    assert!(run(tmp.path(), &["equidist", "--config", "a/config.toml", "--out", "c"]).status.success());
    assert_eq!(fs::read(tmp.path().join("a/report.json")).unwrap(), fs::read(tmp.path().join("c/report.json")).unwrap());
    let csv = fs::read_to_string(tmp.path().join("a/data.csv")).unwrap();
    let hash = report(&tmp.path().join("a"))["config_hash"].as_str().unwrap().to_string();
    assert!(csv.starts_with(&format!("# billiard-lab {} config {hash}\n", env!("CARGO_PKG_VERSION"))));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path();
    fs::write(p.join("bad.toml"), "[input]\nbuiltin_polygon = \"square\"\nunknown = 1\n").unwrap();
    assert_eq!(run(p, &["unfold", "--config", "bad.toml"]).status.code(), Some(2));
    fs::write(p.join("other.toml"), "command = \"survey\"\n[input]\nbuiltin_polygon = \"square\"\n").unwrap();
    assert_eq!(run(p, &["unfold", "--config", "other.toml"]).status.code(), Some(2));
    assert_eq!(run(p, &["unfold", "--config", "missing.toml"]).status.code(), Some(2));
    fs::write(p.join("tri.toml"), "[input]\ntriangle = [0.3183098861837907, 0.5]\n").unwrap();
    assert_eq!(run(p, &["unfold", "--config", "tri.toml"]).status.code(), Some(2));
    let diag =
        "[input]\nbuiltin_polygon = \"square\"\n[simulate]\nhorizon = 3.0\n[simulate.start]\nx = \"1/4\"\ny = \"1/4\"\ndx = 1\ndy = 1\n";
    fs::write(p.join("diag.toml"), diag).unwrap();
    assert_eq!(run(p, &["simulate", "--config", "diag.toml", "--mode", "rational", "--out", "d"]).status.code(), Some(3));
    assert!(p.join("d/report.json").exists());
    fs::write(p.join("budget.toml"), "[input]\nbuiltin_polygon = \"square\"\n[simulate]\nhorizon = 1000.0\nmax_collisions = 3\n[simulate.start]\nx = \"1/3\"\ny = \"1/7\"\ndx = 2\ndy = \"3/5\"\n").unwrap();
    let out = run(p, &["simulate", "--config", "budget.toml", "--mode", "rational", "--out", "b"]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn rational_simulation_is_exact() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = "[input]\nbuiltin_polygon = \"square\"\n[simulate]\nhorizon = 5.0\n[simulate.start]\nx = \"1/3\"\ny = \"1/7\"\ndx = 2\ndy = \"3/5\"\n";
    fs::write(tmp.path().join("c.toml"), cfg).unwrap();
    assert!(run(tmp.path(), &["simulate", "--config", "c.toml", "--mode", "rational", "--out", "r"]).status.success());
    let csv = fs::read_to_string(tmp.path().join("r/data.csv")).unwrap();
    assert_eq!(csv.lines().nth(2).unwrap(), "0,1,12/35,-2,3/5,1");
}
