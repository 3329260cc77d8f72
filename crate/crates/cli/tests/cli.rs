use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ecrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecrank")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, std::path::PathBuf) {
    let path = dir.join(name);
    let mut all = args.to_vec();
    all.extend(["--out", path.to_str().unwrap()]);
    let o = ecrank(&all);
    (code(&o), path)
}

fn verify(path: &Path) -> (i32, String) {
    let o = ecrank(&["verify", path.to_str().unwrap()]);
    (code(&o), String::from_utf8(o.stdout).unwrap())
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write(path: &Path, v: &Value) {
    std::fs::write(path, serde_json::to_string_pretty(v).unwrap()).unwrap();
}

#[test]
fn points_report_verifies_and_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (c, p) = run_to(dir.path(), "a.json", &["points", "--curve", "a=0,b=2", "--count", "5"]);
    assert_eq!(c, 0);
    let (c2, p2) = run_to(dir.path(), "b.json", &["points", "--curve", "a=0,b=2", "--count", "5"]);
    assert_eq!(c2, 0);
    assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(verify(&p), (0, "pass\n".into()));
    let r = read(&p);
    assert_eq!(r["schema"], "ecrank/report/1");
    assert_eq!(r["config"]["start"], "1");
    let classes: Vec<i64> =
        r["result"]["certificate"]["classes"].as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).collect();
    assert_eq!(classes, [3, 10, 29, 66, 127]);
}

#[test]
fn stdout_and_file_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["monodromy", "--curve", "a=-2,b=3", "--f", "y"];
    let o = ecrank(&args);
    assert_eq!(code(&o), 0);
    let (_, p) = run_to(dir.path(), "m.json", &args);
    assert_eq!(o.stdout, std::fs::read(&p).unwrap());
}

#[test]
fn tampering_is_caught_by_layer() {
    let dir = tempfile::tempdir().unwrap();
    let (_, p) = run_to(dir.path(), "r.json", &["points", "--curve", "a=0,b=2", "--count", "4"]);
    let base = read(&p);
    let t = dir.path().join("t.json");

    // (x, -y) is still a point and the certificate still holds
    let mut v = base.clone();
    let y = &mut v["result"]["certificate"]["points"][1]["y"]["v"];
    *y = Value::String(format!("-{}", y.as_str().unwrap()));
    write(&t, &v);
    assert_eq!(verify(&t).0, 0);

    let mut v = base.clone();
    v["result"]["certificate"]["classes"][2] = v["result"]["certificate"]["classes"][0].clone();
    write(&t, &v);
    let (c, out) = verify(&t);
    assert_eq!(c, 1);
    assert!(out.starts_with("fail(class-dependence)"), "{out}");

    let mut v = base.clone();
    v["result"]["certificate"]["points"][0]["x"] = "7".into();
    write(&t, &v);
    assert!(verify(&t).1.starts_with("fail(on-curve)"));

    let mut v = base.clone();
    v["result"]["certificate"]["regulator"]["value"] = "9.0e-1".into();
    write(&t, &v);
    assert!(verify(&t).1.starts_with("fail(regulator)"));

    let mut v = base.clone();
    v["result"]["records"][1]["status"] = serde_json::json!({"status": "rejected", "reason": "square"});
    write(&t, &v);
    assert!(verify(&t).1.starts_with("fail(records)"));

    let mut v = base;
    v["result"]["certificate"].as_object_mut().unwrap().remove("torsion_screen");
    write(&t, &v);
    assert!(verify(&t).1.starts_with("fail(parse)"));

    std::fs::write(&t, "{").unwrap();
    assert!(verify(&t).1.starts_with("fail(parse)"));
}

#[test]
fn every_command_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["group", "--n", "5", "--exhaustive"],
        &["group", "--n", "7"],
        &["monodromy", "--curve", "a=-1,b=1", "--f", "u=0,0,1;v=1"],
        &["symmetrize", "--curve", "a=0,b=17", "--points", "-2,3;-2,-3;2,5;2,-5"],
        &["pencil", "--curve", "a=-1,b=1", "--point", "1,1", "--n", "12", "--height-bound", "10"],
        &["points", "--curve", "a=-7,b=10", "--count", "3", "--stride", "1/2", "--regulator-points", "0"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let (c, p) = run_to(dir.path(), &format!("{i}.json"), args);
        assert_eq!(c, 0, "{args:?}");
        assert_eq!(verify(&p), (0, "pass\n".into()), "{args:?}");
    }
}

#[test]
fn group_summary_and_checks() {
    let o = ecrank(&["group", "--n", "4", "--exhaustive"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["result"]["all_passed"], true);
    let orders: Vec<u64> =
        r["result"]["groups"].as_array().unwrap().iter().map(|g| g["decomposition"]["h_order"].as_u64().unwrap()).collect();
    assert_eq!(orders, [8, 24]);
    assert!(String::from_utf8(o.stderr).unwrap().contains("all checks passed: true"));
}

#[test]
fn not_found_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let (c, p) = run_to(dir.path(), "n.json", &["pencil", "--curve", "a=0,b=17", "--point", "2,5", "--n", "8"]);
    assert_eq!(c, 2);
    let r = read(&p);
    assert_eq!(r["result"]["attempts"][0]["search"]["status"], "not_found");
    assert_eq!(r["result"]["attempts"][0]["dimension"], 3);
    assert!(r["result"]["construction"].is_null());
    assert_eq!(verify(&p).0, 0);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        &[][..],
        &["points"],
        &["points", "--curve", "a=0,b=2", "--height-bound", "3"],
        &["points", "--curve", "a=0,b=2", "--start", "-2"],
        &["points", "--curve", "a=0,b=0"],
        &["pencil", "--curve", "a=0,b=17", "--point", "2,5", "--n", "9"],
        &["group", "--n", "7", "--exhaustive"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&ecrank(args)), 1, "{args:?}");
    }
    assert_eq!(code(&ecrank(&["--help"])), 0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "command = \"points\"\ncurve = \"a=0,b=2\"\ncount = 3\n").unwrap();
    let o = ecrank(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["result"]["certificate"]["points"].as_array().unwrap().len(), 3);
    let o = ecrank(&["points", "--config", cfg.to_str().unwrap(), "--count", "2"]);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["result"]["certificate"]["points"].as_array().unwrap().len(), 2);
    // the echoed config is itself a valid config
    let echo = dir.path().join("echo.toml");
    std::fs::write(&echo, toml::to_string(&r["config"]).unwrap()).unwrap();
    let again = ecrank(&["--config", echo.to_str().unwrap()]);
    assert_eq!(again.stdout, o.stdout);
    std::fs::write(&cfg, "command = \"points\"\ncurve = \"a=0,b=2\"\ncolour = 3\n").unwrap();
    assert_eq!(code(&ecrank(&["--config", cfg.to_str().unwrap()])), 1);
}
