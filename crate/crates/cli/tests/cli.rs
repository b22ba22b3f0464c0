use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn phomeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phomeo")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_record(out: &Output) -> Value {
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    serde_json::from_str(err.trim_end()).expect("stderr is a JSON record")
}

#[test]
fn dist_reports_value_and_bound() {
    let out = phomeo(&["dist", "-f", "id", "-g", "translate(1)", "--N", "40"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["dist"].as_f64().unwrap() - 1.0).abs() <= 2f64.powi(-39));
    assert_eq!(v["truncation_bound"].as_f64().unwrap(), 2f64.powi(-39));
    assert_eq!(v["sup_estimates"], "lower_bound");
}

#[test]
fn rigorous_dist_is_an_upper_estimate() {
    let args = ["dist", "-f", "scale(2)", "-g", "rotate(0.3)", "--N", "8", "--grid", "32"];
    let loose = json(&phomeo(&args))["dist"].as_f64().unwrap();
    let mut strict = args.to_vec();
    strict.push("--rigorous");
    let v = json(&phomeo(&strict));
    assert_eq!(v["sup_estimates"], "upper_bound");
    assert!(v["dist"].as_f64().unwrap() >= loose);
}

#[test]
fn winding_indices() {
    for (f, index) in [("scale(2)", 1), ("rotate(3.141592653589793)", 1), ("translate(1)", 0), ("scale(2) . conj", -1)] {
        let out = phomeo(&["winding", "-f", f, "--disk", "0,0,1"]);
        assert!(out.status.success(), "{f}");
        assert_eq!(json(&out)["index"], index, "{f}");
    }
}

#[test]
fn inconclusive_winding_and_certificate_exit_two_under_strict() {
    let out = phomeo(&["winding", "-f", "conj", "--disk", "0,0,1"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["verdict"], "inconclusive");

    let out = phomeo(&["winding", "-f", "conj", "--disk", "0,0,1", "--strict"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], "inconclusive");

    let out = phomeo(&["certify", "-f", "id", "--disk", "0,0,1", "--strict"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "inconclusive");
}

#[test]
fn certificate_document() {
    let out = phomeo(&["certify", "-f", "translate(1)", "--disk", "0,0,10", "--spacing", "0.1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["verdict"], "fixed_point_free");
    assert_eq!(v["region"]["radius"], 10.0);
    assert!(v["margin"].as_f64().unwrap() > 0.79);
    assert!(v["witness"]["re"].is_f64() && v["witness"]["im"].is_f64());
}

#[test]
fn bad_input_exits_one_with_a_record() {
    let cases: [&[&str]; 6] = [
        &["dist", "-f", "translate(", "-g", "id"],
        &["dist", "-f", "scale(-1)", "-g", "id"],
        &["certify", "-f", "id", "--disk", "0,0"],
        &["certify", "-f", "id", "--spacing", "0"],
        &["perturb", "-f", "id", "--eps", "0.1", "--grid-file", "/nonexistent/grid.txt"],
        &["frobnicate"],
    ];
    let expected = ["syntax", "domain", "input", "input", "io", "usage"];
    for (args, kind) in cases.iter().zip(expected) {
        let out = phomeo(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert_eq!(error_record(&out)["error"], kind, "{args:?}");
    }
    let rec = error_record(&phomeo(&["dist", "-f", "id . rotate(x)", "-g", "id"]));
    assert_eq!(rec["flag"], "-f");
    assert_eq!(rec["offset"], 12);
}

#[test]
fn perturb_from_grid_file() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("g.txt");
    let text: String = (0..21).map(|k| format!("{} 0\n", -5.0 + 0.5 * k as f64)).collect();
    fs::write(&grid, text).unwrap();
    let out = phomeo(&["perturb", "-f", "conj", "--eps", "0.001", "--grid-file", grid.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["dist_achieved"].as_f64().unwrap() < 1e-3);
    assert!(v["grid_min_displacement"].as_f64().unwrap() > 0.0);
    assert_eq!(v["grid"]["points"], 21);
    assert!(v["translation"]["re"].as_f64().unwrap() != 0.0);
}

#[test]
fn escape_report() {
    let out = phomeo(&["escape", "--cell", "0,0.25,0.1", "--eps", "0.01", "--grid", "64"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["dist_to_original"].as_f64().unwrap() < 0.01);
    assert!(v["witness_displacement"].as_f64().unwrap() > 0.0);
    assert_eq!(v["cell"]["rho"], 0.25);

    let out = phomeo(&["escape", "--cell", "0,0.25", "--eps", "0.01"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn converge_tables() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = phomeo(&[
        "converge", "lemma3", "--family", "translate", "--nmax", "4", "--grid", "32", "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,dist,hausdorff");
    assert_eq!(lines.len(), 5);
    let last: Vec<f64> = lines[4].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 4.0);
    assert_eq!(last[2], 0.25);

    let out = phomeo(&["converge", "lemma4", "--family", "translate-pair", "--nmax", "3", "--grid", "32"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,dist_g,dist_h,dist_composite\n"));
    assert_eq!(text.lines().count(), 4);

    let out = phomeo(&["converge", "lemma4", "--family", "nope", "--nmax", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn support_cloud_file() {
    let dir = tempfile::tempdir().unwrap();
    let cloud = dir.path().join("s.txt");
    let out = phomeo(&[
        "support", "-f", "bump(center=0,rho=0.25,delta=0.05,eta=0.1)", "--disk", "0,0,1", "--resolution", "0.02",
        "--out", cloud.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["empty"], false);
    let text = fs::read_to_string(&cloud).unwrap();
    assert_eq!(text.lines().count() as u64, v["points"].as_u64().unwrap());
    for line in text.lines() {
        let xy: Vec<f64> = line.split_whitespace().map(|t| t.parse().unwrap()).collect();
        assert!(xy[0].hypot(xy[1]) < 0.25 + 0.1 + 1e-9);
    }

    let out = phomeo(&["support", "-f", "id", "--disk", "0,0,1"]);
    assert!(out.status.success() && out.stdout.is_empty());
}
