use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_cpulse");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("run cpulse")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn sequence_dump_golden() {
    let expected = "\
# family=nb1 theta_deg=90.000000 phi1_deg=97.180756 sign=+
# angle_deg\tphase_deg
45.000000\t0.000000
180.000000\t97.180756
360.000000\t-97.180756
180.000000\t97.180756
45.000000\t0.000000
";
    assert_eq!(stdout(&["sequence", "--family", "nb1", "--theta", "90"]), expected);

    let simple = stdout(&["sequence", "--family", "simple", "--theta", "90"]);
    assert_eq!(
        simple,
        "# family=simple theta_deg=90.000000 phi1_deg=none sign=+\n# angle_deg\tphase_deg\n90.000000\t0.000000\n"
    );
}

#[test]
fn curve_csv_contract() {
    let csv = stdout(&[
        "curve",
        "--family",
        "nb1",
        "--theta",
        "90",
        "--ideal",
        "0",
        "--gmin",
        "-2",
        "--gmax",
        "0",
        "--samples",
        "801",
    ]);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "g,F");
    assert_eq!(rows.len(), 802);
    let parse = |row: &str| -> (f64, f64) {
        let (g, f) = row.split_once(',').unwrap();
        (g.parse().unwrap(), f.parse().unwrap())
    };
    let (g, f) = parse(rows[401]);
    assert_eq!(g, -1.0);
    assert_eq!(f, 1.0);
    // 17 significant digits
    assert_eq!(rows[1].split(',').next().unwrap(), "-2.0000000000000000e0");

    let csv = stdout(&["curve", "--family", "simple", "--theta", "90", "--ideal", "90"]);
    let last = parse(csv.lines().last().unwrap());
    assert_eq!(last, (0.0, 1.0));

    // PB1 against the identity at λ = 0.0648 sits right at the tolerance.
    let csv = stdout(&[
        "curve",
        "--family",
        "pb1",
        "--ideal",
        "0",
        "--gmin",
        "-0.9352",
        "--gmax",
        "0",
        "--samples",
        "2",
    ]);
    let (_, f) = parse(csv.lines().nth(1).unwrap());
    assert!((1.0 - f - 1e-6).abs() < 2e-8, "1-F = {}", 1.0 - f);
}

#[test]
fn thresholds_json_and_tolerance_monotonicity() {
    let parse = |tol: &str| -> Vec<Value> {
        serde_json::from_str(&stdout(&["thresholds", "--theta", "90", "--tol", tol])).unwrap()
    };
    let base = parse("1e-6");
    assert_eq!(base.len(), 4);
    for r in &base {
        for key in ["family", "theta_deg", "tol", "epsilon", "delta"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
    let loose = parse("1e-4");
    let tight = parse("1e-8");
    for i in 0..4 {
        for key in ["epsilon", "delta"] {
            let (l, b, t) = (
                loose[i][key].as_f64().unwrap(),
                base[i][key].as_f64().unwrap(),
                tight[i][key].as_f64().unwrap(),
            );
            assert!(l > b && b > t, "{} {key}: {l} {b} {t}", base[i]["family"]);
        }
    }
}

#[test]
fn compile_json_schema() {
    let v: Value = serde_json::from_str(&stdout(&["compile", "--family", "simple", "--theta", "90"])).unwrap();
    assert_eq!(v["total_t_units"], 2.0);
    assert_eq!(v["items"], serde_json::json!([{"type": "delay", "t_units": 2.0}]));

    let v: Value =
        serde_json::from_str(&stdout(&["compile", "--family", "pb1", "--theta", "90", "--spin", "0"])).unwrap();
    assert_eq!(v["family"], "pb1");
    assert_eq!(v["theta_deg"], 90.0);
    assert_eq!(v["total_t_units"], 34.0);
    let phi = (-1.0f64 / 16.0).acos().to_degrees();
    for item in v["items"].as_array().unwrap() {
        match item["type"].as_str().unwrap() {
            "pulse" => {
                assert_eq!(item["spin"], 0);
                assert!((item["angle_deg"].as_f64().unwrap() - phi).abs() < 1e-9);
                assert!(matches!(item["axis"].as_str().unwrap(), "+y" | "-y"));
            }
            "delay" => assert!(item["t_units"].as_f64().unwrap() > 0.0),
            other => panic!("unexpected item type {other}"),
        }
    }
}

#[test]
fn compile_verify_reports_deviation() {
    for family in ["simple", "bb1", "nb1", "pb1"] {
        let out = run(&["compile", "--family", family, "--theta", "90", "--verify"]);
        assert_eq!(out.status.code(), Some(0));
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("verify: max"), "{err}");
        assert!(err.contains("(ok)"));
    }
}

#[test]
fn expand_tables() {
    let bb1 = stdout(&["expand", "--family", "bb1", "--point", "0", "--order", "2"]);
    assert_eq!(bb1.lines().filter(|l| l.ends_with("vanishes")).count(), 2, "{bb1}");
    let simple = stdout(&["expand", "--family", "simple", "--point", "0", "--order", "1"]);
    assert!(simple.lines().last().unwrap().ends_with("nonzero"));
    let nb1 = stdout(&["expand", "--family", "nb1", "--point", "-1", "--order", "1"]);
    assert!(nb1.lines().last().unwrap().ends_with("vanishes"));
    let deep = stdout(&["expand", "--family", "simple", "--order", "4"]);
    assert!(deep.lines().last().unwrap().ends_with("infeasible"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["curve", "--family", "bb2"]).status.code(), Some(1));
    assert_eq!(run(&["curve", "--gmin", "1", "--gmax", "0"]).status.code(), Some(1));
    assert_eq!(run(&["expand", "--point", "0.3"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["curve", "--out", "/nonexistent-dir/curve.csv"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_flag_moves_summary_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = run(&[
        "curve",
        "--family",
        "pb1",
        "--samples",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.starts_with("curve family=pb1"));
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 6);
}
