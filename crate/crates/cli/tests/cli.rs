use std::process::{Command, Output};

use grove_core::aztec::AztecTiling;
use grove_core::grove::validate;
use grove_core::Grove;

fn groves(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groves"))
        .args(args)
        .env_remove("GROVE_COST_GUARD")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = groves(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn rho_prints_six_decimals() {
    assert_eq!(stdout(&["rho", "--alpha", "1/3", "--beta", "1/3"]), "0.604600\n");
    assert_eq!(stdout(&["rho"]), "0.604600\n");
}

#[test]
fn enumeration_counts() {
    assert_eq!(stdout(&["grove", "enumerate", "--order", "4"]), "81\n");
    assert_eq!(stdout(&["aztec", "enumerate", "--order", "3"]), "64\n");
    let listed = stdout(&["grove", "enumerate", "--order", "3", "--list"]);
    assert_eq!(listed.lines().count(), 9);
    for line in listed.lines() {
        assert!(validate(&Grove::from_json(line).unwrap()).is_ok());
    }
}

#[test]
fn sample_roundtrips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let p = path.to_str().unwrap();
    let args = ["grove", "sample", "--order", "25", "--seed", "7", "--alpha", "1/2", "--beta", "0.25", "--out", p];
    assert!(groves(&args).status.success());
    let first = std::fs::read_to_string(&path).unwrap();
    let g = Grove::from_json(&first).unwrap();
    assert!(validate(&g).is_ok());
    assert!(groves(&args).status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);

    let svg = stdout(&["grove", "render", "--input", p, "--highlight-frozen", "--overlay"]);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<line").count(), 25 * 25 / 2);
    // Biased overlay is an outline, not a circle.
    let biased = stdout(&["grove", "render", "--input", p, "--overlay", "--alpha", "1/2", "--beta", "1/4"]);
    assert!(biased.contains("<polygon class=\"overlay\""));
}

#[test]
fn tiling_sample_and_render() {
    let json = stdout(&["aztec", "sample", "--order", "10", "--seed", "3"]);
    let t = AztecTiling::from_json(json.trim()).unwrap();
    assert_eq!(t.dominoes().len(), 110);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(&path, &json).unwrap();
    let svg = stdout(&["aztec", "render", "--input", path.to_str().unwrap(), "--overlay"]);
    assert_eq!(svg.matches("<rect class=\"domino").count(), 110);
    assert_eq!(svg, stdout(&["aztec", "sample", "--order", "10", "--seed", "3", "--format", "svg", "--overlay"]));
}

#[test]
fn probability_tables() {
    let csv = stdout(&["grove", "probs", "--order", "2"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,i,j,p_num,p_den,p_float,E_num,E_den"));
    assert_eq!(lines.next(), Some("2,0,0,2,3,0.666666666667,1,3"));
    let aztec = stdout(&["aztec", "probs", "--order", "1", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&aztec).unwrap();
    let center = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["i"] == 0 && r["j"] == 0)
        .unwrap();
    assert_eq!(center["p_num"], "1");
    assert_eq!(center["p_den"], "2");
}

#[test]
fn experiments_and_structures() {
    let csv = stdout(&["verify", "arctic", "--orders", "20,30", "--samples", "3", "--epsilon", "0.1"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "order,samples,epsilon,mean_misfit,std_misfit,seed");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("20,3,0.1,"));

    let trace = stdout(&["nexus", "trace", "--order", "8", "--seed", "5"]);
    assert!(trace.starts_with("step,order,i,j,k\n"));
    assert_eq!(trace.lines().count(), 8);

    let d = stdout(&["young", "project", "--order", "30", "--family", "b"]);
    let v: serde_json::Value = serde_json::from_str(&d).unwrap();
    assert!(v["rows"].is_array());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["grove", "sample", "--bogus"],
        vec!["rho", "--alpha", "3/2", "--beta", "0"],
        vec!["rho", "--alpha", "1/2", "--beta", "1/4", "--gamma", "1/2"],
        vec!["rho", "--alpha", "1/2"],
        vec!["grove", "enumerate", "--order", "9"],
        vec!["aztec", "enumerate", "--order", "6"],
        vec!["grove", "sample", "--order", "0"],
        vec!["grove", "render", "--input", "/nonexistent/g.json"],
        vec!["verify", "arctic", "--epsilon", "0"],
    ] {
        let out = groves(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn invalid_grove_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"order":3,"a":[[0,0]],"b":[],"c":[]}"#).unwrap();
    let out = groves(&["grove", "render", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
