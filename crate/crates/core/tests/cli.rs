use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_consensus-md"));
    c.env_remove("CONSENSUS_MD_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn verify_fixtures_passes() {
    let o = run(&["verify-fixtures"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().count() > 20);
    assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
}

#[test]
fn exported_fixture_runs_through_the_dynamics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex1.json");
    let o = run(&["export-fixture", "--name", "example1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["run-md", "--profile", path.to_str().unwrap(), "--order", "ab,bc,ac"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("step 1: ab support 0/2 adopted b>a by agents [0, 1, 4]"), "{out}");
    assert!(out.contains("step 2: bc support 2/0 adopted b>c"), "{out}");
    assert!(out.contains("step 3: ac support 2/0 adopted a>c"), "{out}");
    assert_eq!(out.matches(r#"[["a","c"],["b","a"]]"#).count(), 5, "{out}");
}

#[test]
fn unknown_fixture_is_an_error() {
    let o = run(&["export-fixture", "--name", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope"));
}

#[test]
fn control_search_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    run(&["export-fixture", "--name", "prop12_two_unanud", "--out", path.to_str().unwrap()]);
    let o = run(&["control-search", "--profile", path.to_str().unwrap(), "--notion", "UnanUD", "--exhaustive"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v[0];
    assert_eq!(r["orders_examined"], 48);
    assert_eq!(r["initial"], "none");
    assert_eq!(r["negative_control_available"], true);
    assert_eq!(r["choosable"], serde_json::json!(["a", "b"]));

    let o = run(&["control-search", "--profile", path.to_str().unwrap(), "--sample", "30", "--seed", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 7);
    assert_eq!(v[0]["orders_examined"], 30);
    assert_eq!(v[0]["exhaustive"], false);
}

#[test]
fn experiments_write_exact_headers_and_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("effects", "notion,n,m,samples,effect,numerator,denominator,frequency", vec!["--agents", "3,5"]),
        ("completeness", "notion,bin_percent,samples,effect,numerator,denominator,frequency", vec![]),
        ("control", "notion,control_type,numerator,denominator,frequency", vec!["--alternatives", "3"]),
    ];
    for (cmd, expected, extra) in cases {
        let out = dir.path().join(format!("{cmd}.csv"));
        let mut args = vec![cmd, "--samples", "20", "--seed", "3", "--out", out.to_str().unwrap()];
        args.extend(extra);
        let o = run(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(header(&out), expected);
        let meta: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("{cmd}.csv.meta.json"))).unwrap()).unwrap();
        assert_eq!(meta["seed"], 3);
        assert_eq!(meta["experiment"], cmd);
    }
}

#[test]
fn seed_variable_overrides_flag_and_jobs_do_not_matter() {
    let dir = tempfile::tempdir().unwrap();
    let go = |name: &str, seed_env: Option<&str>, jobs: &str| {
        let out = dir.path().join(name);
        let mut c = bin();
        c.args(["effects", "--agents", "3,7", "--samples", "300", "--seed", "1", "--jobs", jobs]);
        c.args(["--out", out.to_str().unwrap()]);
        if let Some(s) = seed_env {
            c.env("CONSENSUS_MD_SEED", s);
        }
        assert!(c.output().unwrap().status.success());
        fs::read(out).unwrap()
    };
    let a = go("a.csv", None, "1");
    let b = go("b.csv", None, "3");
    let c = go("c.csv", Some("1"), "2");
    let d = go("d.csv", Some("2"), "1");
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_ne!(a, d);
}

#[test]
fn bad_configurations_are_rejected() {
    for args in [
        vec!["effects", "--alternatives", "2"],
        vec!["effects", "--order-policy", "exhaustive"],
        vec!["control", "--alternatives", "5"],
        vec!["effects", "--notions", "CW,Borda"],
        vec!["effects", "--samples", "0"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = bin().args(["effects"]).env("CONSENSUS_MD_SEED", "x").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
