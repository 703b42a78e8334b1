use std::process::{Command, Output};

use serde_json::Value;

fn stirling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stirling"))
        .args(args)
        .env_remove("STIRLING_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

/// Drops wall-clock fields so reports can be compared.
fn strip_times(mut v: Value) -> Value {
    v["total_ms"] = Value::Null;
    for r in v["results"].as_array_mut().unwrap() {
        r["ms"] = Value::Null;
    }
    v
}

#[test]
fn approx_table_golden() {
    let out = stirling(&["approx", "10"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "\
quantity              value
n                     10
sqrt(2 pi n) (n/e)^n  [3598695.618741035810, 3598695.618741035928]
lower bound           3598695.618741035810
upper bound           3689797.032060199301
e^(1/(4n)) - 1        [0.02531512052442884061, 0.02531512052442884149]
"
    );
}

#[test]
fn approx_brackets_factorial() {
    for (n, fact) in [("1", 1.0), ("10", 3628800.0)] {
        let v = json(&stirling(&["approx", n, "--format", "json"]));
        let lower: f64 = v["lower"]["value"].as_str().unwrap().parse().unwrap();
        let upper: f64 = v["upper"]["value"].as_str().unwrap().parse().unwrap();
        assert!(lower < fact && fact < upper, "n = {n}");
        assert!(v["lower"]["exact"]["mantissa"].is_string());
        assert!(v["lower"]["exact"]["exponent"].is_i64());
    }
    let v = json(&stirling(&["approx", "10", "--format", "json"]));
    assert!(v["upper"]["value"].as_str().unwrap().parse::<f64>().unwrap() <= 3690903.0);
}

#[test]
fn approx_csv_golden() {
    let out = stirling(&["approx", "1", "--format", "csv"]);
    assert_eq!(
        stdout(&out),
        "\
n,approx_lo,approx_hi,lower,upper,rel_err_bound
1,0.922137008895789089,0.922137008895789118,0.922137008895789089,1.18404735709060322,0.2840254166877414916
"
    );
}

#[test]
fn approx_zero_is_usage_error() {
    let out = stirling(&["approx", "0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 1"));
}

#[test]
fn exact_and_cap() {
    assert_eq!(stdout(&stirling(&["exact", "5"])), "120\n");
    assert_eq!(stdout(&stirling(&["exact", "12"])), "479001600\n");
    assert_eq!(code(&stirling(&["exact", "2000000"])), 2);
    assert_eq!(code(&stirling(&["exact", "30", "--cap", "20"])), 2);
}

#[test]
fn digits_examples() {
    assert_eq!(stdout(&stirling(&["digits", "5"])), "3\n");
    assert_eq!(stdout(&stirling(&["digits", "100"])), "158\n");
    assert_eq!(stdout(&stirling(&["digits", "1000"])), "2568\n");
}

#[test]
fn wallis_sequence_golden() {
    let out = stirling(&["sequence", "--seq", "W", "--from", "1", "--to", "3", "--format", "csv"]);
    assert_eq!(
        stdout(&out),
        "\
n,lo,hi,num,den
1,1.3333333333333333148,1.3333333333333333704,4,3
2,1.4222222222222222209,1.4222222222222222765,64,45
3,1.462857142857142855,1.462857142857142912,256,175
"
    );
}

#[test]
fn sequence_rows_enclose_known_values() {
    let v = json(&stirling(&["sequence", "--seq", "a", "--from", "1", "--to", "1", "--format", "json"]));
    let row = &v["rows"][0];
    let lo: f64 = row["lo"].as_str().unwrap().parse().unwrap();
    let hi: f64 = row["hi"].as_str().unwrap().parse().unwrap();
    assert!(lo <= std::f64::consts::E && std::f64::consts::E <= hi);
    assert!(row.get("num").is_none());

    let v = json(&stirling(&["sequence", "--seq", "bdiff", "--from", "1", "--to", "1", "--format", "json"]));
    let lo = v["rows"][0]["lo"].as_str().unwrap();
    assert!(lo.starts_with("0.0397207"), "{lo}");

    let v = json(&stirling(&["sequence", "--seq", "W", "--from", "2", "--to", "2", "--format", "json"]));
    assert_eq!(v["rows"][0]["num"], "64");
    assert_eq!(v["rows"][0]["den"], "45");
}

#[test]
fn every_sequence_prints_one_row_per_n() {
    for seq in ["a", "b", "ratio", "bdiff", "W", "L"] {
        let out = stirling(&["sequence", "--seq", seq, "--from", "5", "--to", "9", "--format", "csv"]);
        assert_eq!(code(&out), 0, "{seq}");
        let text = stdout(&out);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6, "{seq}");
        assert!(lines[0].starts_with("n,lo,hi"));
        assert!(lines[1].starts_with("5,"));
    }
}

#[test]
fn bad_sequence_range_is_usage_error() {
    assert_eq!(code(&stirling(&["sequence", "--seq", "a", "--from", "0", "--to", "3"])), 2);
    assert_eq!(code(&stirling(&["sequence", "--seq", "a", "--from", "5", "--to", "3"])), 2);
    assert_eq!(code(&stirling(&["sequence", "--seq", "x", "--from", "1", "--to", "3"])), 2);
}

#[test]
fn constants_golden() {
    let out = stirling(&["constants", "--format", "csv"]);
    assert_eq!(
        stdout(&out),
        "\
name,lo,hi
e,2.718281828459045201,2.718281828459045313
pi,3.141592653589793227,3.141592653589793339
sqrt(pi),1.77245385090551599,1.77245385090551605
sqrt(2 pi),2.506628274631000463,2.506628274631000575
pi/2,1.5707963267948966135,1.5707963267948966691
e^(3/4),2.117000016612674562,2.117000016612674674
"
    );
}

fn constant_bounds(out: &Output) -> Vec<(String, f64, f64)> {
    json(out)
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["name"].as_str().unwrap().to_string(),
                r["lo"].as_str().unwrap().parse().unwrap(),
                r["hi"].as_str().unwrap().parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn precision_flag_env_and_refinement() {
    let coarse = stirling(&["constants", "--format", "json"]);
    let fine = Command::new(env!("CARGO_BIN_EXE_stirling"))
        .args(["constants", "--format", "json"])
        .env("STIRLING_PREC", "128")
        .output()
        .unwrap();
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_stirling"))
        .args(["--prec", "53", "constants", "--format", "json"])
        .env("STIRLING_PREC", "128")
        .output()
        .unwrap();
    assert_eq!(coarse.stdout, flag_wins.stdout);
    let (c, f) = (constant_bounds(&coarse), constant_bounds(&fine));
    for ((name, clo, chi), (_, flo, fhi)) in c.iter().zip(&f) {
        assert!(clo <= flo && fhi <= chi, "{name}");
    }
    let sqrt_two_pi = &json(&coarse)[3];
    assert!(sqrt_two_pi["lo"].as_str().unwrap().starts_with("2.5066282746"));
    assert!(sqrt_two_pi["hi"].as_str().unwrap().starts_with("2.5066282746"));
    assert_eq!(code(&stirling(&["--prec", "4", "constants"])), 2);
}

#[test]
fn verify_exact_only() {
    let out = stirling(&["verify", "--max-n", "100", "--checks", "exact"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0]["name"], "exact-identities");
    assert_eq!(results[0]["status"], "pass");
}

#[test]
fn verify_report_schema_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = stirling(&["verify", "--max-n", "300", "--report", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("check"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["version", "config", "results", "total_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let names: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(
        names,
        [
            "exact-identities",
            "a-decreasing",
            "bdiff-window",
            "shifted-increasing",
            "paper-floor",
            "derived-floor",
            "derived-limits"
        ]
    );
    for r in v["results"].as_array().unwrap() {
        for key in ["name", "n_min", "n_max", "status", "max_bits", "failures", "ms"] {
            assert!(r.get(key).is_some(), "{key}");
        }
        assert_eq!(r["status"], "pass");
    }
}

#[test]
fn verify_is_deterministic_across_workers() {
    let one = stirling(&["verify", "--max-n", "1500", "--workers", "1"]);
    let four = stirling(&["verify", "--max-n", "1500", "--workers", "4"]);
    assert_eq!(strip_times(json(&one)), strip_times(json(&four)));
}

#[test]
fn verify_tiny_precision_is_undecided() {
    let out = stirling(&[
        "verify",
        "--prec-max",
        "8",
        "--min-n",
        "999990",
        "--max-n",
        "1000000",
        "--checks",
        "a-decreasing",
    ]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["config"]["p_start"], 8);
    assert_eq!(v["results"][0]["status"], "undecided");
    assert!(v["results"][0]["failures"][0]["detail"].as_str().unwrap().starts_with("undecided"));
}

#[test]
fn verify_usage_errors() {
    assert_eq!(code(&stirling(&["verify", "--checks", "nonsense"])), 2);
    assert_eq!(code(&stirling(&["verify", "--min-n", "0"])), 2);
    assert_eq!(code(&stirling(&["verify", "--min-n", "10", "--max-n", "5"])), 2);
    assert_eq!(code(&stirling(&["verify", "--prec-start", "128", "--prec-max", "64"])), 2);
}

#[test]
fn degenerate_range_passes() {
    let out = stirling(&["verify", "--min-n", "7", "--max-n", "7", "--checks", "a-decreasing"]);
    assert_eq!(code(&out), 0);
}
