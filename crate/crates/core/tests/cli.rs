use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockdelta"))
        .args(args)
        .env_remove("BLOCKDELTA_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn dist_of_zero_is_a_point_mass() {
    let out = run(&["dist", "-w", "11", "-t", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["support"], serde_json::json!([[0, "1/1"]]));
}

#[test]
fn invalid_patterns_exit_2() {
    for w in ["0", "", "012", "1".repeat(40).as_str()] {
        assert_eq!(run(&["dist", "-w", w, "-t", "3"]).status.code(), Some(2), "w = {w:?}");
    }
    assert_eq!(run(&["dist", "-w", "0"]).status.code(), Some(2));
    assert_eq!(run(&["dist", "-w", "01", "-t", "3", "--eps", "2"]).status.code(), Some(2));
}

#[test]
fn resource_limits_exit_3() {
    let out = run(&["var", "-w", "01", "--family", "(10)^N", "--n", "60..=70"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn dist_matches_oracle() {
    for (w, t) in [("10", "5"), ("011", "37"), ("0110", "0b11001")] {
        let d = run(&["dist", "-w", w, "-t", t, "--no-meta"]);
        let o = run(&["oracle", "-w", w, "-t", t, "--no-meta"]);
        assert_eq!(d.status.code(), Some(0));
        assert_eq!(o.status.code(), Some(0));
        let (d, o) = (json(&d), json(&o));
        assert_eq!(d["support"].to_string(), o["support"].to_string());
        assert_eq!(o["matches_cf"], true);
    }
}

#[test]
fn oracle_window_for_constant_patterns() {
    let o = run(&["oracle", "-w", "111", "-t", "6", "--kmax", "4", "--no-meta"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["kmax"], 4);
    assert!(v["support"].as_array().unwrap().iter().all(|p| p[0].as_i64().unwrap().abs() <= 4));
}

#[test]
fn scan_csv_header_and_order() {
    let out = run(&["scan", "-w", "11", "--tmax", "64", "--field", "cusick", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,value"));
    let ts: Vec<u64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ts, (0..64).collect::<Vec<_>>());
    assert!(text.contains("\n0,1/1\n"));
}

#[test]
fn output_is_deterministic_without_meta() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "var", "-w", "011", "--tmax", "300", "--no-meta", "-o", path.to_str().unwrap(), "--threads", "3",
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let with_meta = json(&run(&["dist", "-w", "01", "-t", "9"]));
    assert!(with_meta["meta"]["timestamp"].is_u64());
}

#[test]
fn verify_passes_for_011() {
    let out = run(&["verify", "-w", "011", "--tmax", "4096", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check,checked,failures,status\n"));
    assert!(text.contains("verified on grid"));
}

#[test]
fn gauss_reports() {
    let out = run(&["gauss", "-w", "011", "-t", "(10)^8", "--no-meta"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["n"], 8);
    for field in ["gaussian_tail", "approximation", "cf_tail", "total"] {
        assert!(v["budget"][field].is_f64(), "{field}");
    }
    let csv = run(&["gauss", "-w", "011", "-t", "21", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("k,delta_exact,delta_float,gaussian,abs_error\n"));
    let fam = run(&["gauss", "-w", "11", "--family", "(10)^N", "--n", "4,8", "--format", "csv"]);
    let text = String::from_utf8(fam.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn var_csv_columns() {
    let out = run(&["var", "-w", "01", "-t", "(10)^3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,v,v_float,q,q_case,occ01,lower_bound,upper_bound"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "42");
    assert_eq!(row[5], "3");
}

#[test]
fn cache_directory_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let go = || {
        Command::new(env!("CARGO_BIN_EXE_blockdelta"))
            .args(["dist", "-w", "011", "-t", "123456789", "--no-meta"])
            .env("BLOCKDELTA_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = go();
    assert_eq!(first.status.code(), Some(0));
    let file = dir.path().join("gamma-011.bdlt");
    assert!(std::fs::read(&file).unwrap().starts_with(b"BDLT1"));
    let second = go();
    assert_eq!(first.stdout, second.stdout);
}
