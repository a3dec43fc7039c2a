use std::path::PathBuf;
use std::process::{Command, Output};

fn hermite(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermite")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hermite-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn gauss(t: f64) -> f64 {
    (-t * t / 2.0).exp()
}

fn write_samples(path: &PathBuf, spacing: f64, with_derivative: bool) {
    let mut text = String::from(if with_derivative { "t,f,fprime\n" } else { "t,f\n" });
    for i in 0..=160 {
        let t = -8.0 + i as f64 * spacing;
        if with_derivative {
            text.push_str(&format!("{t},{},{}\n", gauss(t), -t * gauss(t)));
        } else {
            text.push_str(&format!("{t},{}\n", gauss(t)));
        }
    }
    std::fs::write(path, text).unwrap();
}

fn read_csv(path: &PathBuf) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader.records().map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn interpolate_reconstructs_a_gaussian() {
    let input = scratch("samples.csv");
    write_samples(&input, 0.1, true);
    for scheme in ["hermite", "bspline", "interlaced"] {
        let output = scratch(&format!("recon-{scheme}.csv"));
        let out = hermite(&[
            "interpolate",
            "--input",
            input.to_str().unwrap(),
            "--scheme",
            scheme,
            "--output",
            output.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{scheme}: {}", String::from_utf8_lossy(&out.stderr));
        let (header, rows) = read_csv(&output);
        assert_eq!(header, ["t", "f", "fprime"]);
        assert_eq!(rows.len(), 1601);
        for r in rows.iter().filter(|r| r[0].abs() <= 4.0) {
            assert!((r[1] - gauss(r[0])).abs() < 1e-4, "{scheme} at {}", r[0]);
            assert!((r[2] + r[0] * gauss(r[0])).abs() < 1e-3, "{scheme} at {}", r[0]);
        }
    }
}

#[test]
fn interpolate_without_derivatives() {
    let input = scratch("values.csv");
    write_samples(&input, 0.1, false);
    let output = scratch("recon-values.csv");
    let ok = hermite(&[
        "interpolate",
        "--input",
        input.to_str().unwrap(),
        "--scheme",
        "bspline",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(ok.status.success());
    let fail = hermite(&[
        "interpolate",
        "--input",
        input.to_str().unwrap(),
        "--scheme",
        "hermite",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(!fail.status.success());
    assert!(String::from_utf8_lossy(&fail.stderr).contains("derivative"));
}

#[test]
fn kernel_table_has_expected_shape() {
    let output = scratch("kernel.csv");
    let out = hermite(&[
        "kernel",
        "--scheme",
        "hermite",
        "--mode",
        "fprime",
        "--omega-max",
        "6.28",
        "--points",
        "64",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&output);
    assert_eq!(header, ["omega", "E_min", "E_res", "E"]);
    assert_eq!(rows.len(), 64);
    assert_eq!(rows[0][3], 0.0);
    for r in &rows {
        assert!(r[3] >= 0.0 && (r[3] - r[1] - r[2]).abs() < 1e-8 * r[3].max(1e-12));
    }
}

#[test]
fn constants_emit_json() {
    let out = hermite(&["constants", "--scheme", "bspline", "--mode", "f"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["scheme"], "bspline");
    assert_eq!(v["L"], 4);
    assert!(v["rel_error"].as_f64().unwrap() < 1e-3);
    assert!((v["ratio_to_optimal"].as_f64().unwrap() - (10.0f64 / 3.0).sqrt()).abs() < 1e-3);
}

#[test]
fn decay_writes_csv_and_summary() {
    let csv_path = scratch("decay.csv");
    let out = hermite(&[
        "decay",
        "--scheme",
        "hermite",
        "--function",
        "gaussian",
        "--steps",
        "0.2:5:geometric",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["slope"].as_f64().unwrap() - 4.0).abs() < 0.1);
    let (header, rows) = read_csv(&csv_path);
    assert_eq!(header, ["step", "error"]);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[4][0], 0.0125);
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(!hermite(&["decay", "--scheme", "hermite", "--steps", "0.2:5:linear"]).status.success());
    assert!(!hermite(&["constants", "--scheme", "quintic"]).status.success());
    assert!(!hermite(&["constants", "--scheme", "hermite", "--mode", "g"]).status.success());
}

#[test]
fn verify_passes() {
    let out = hermite(&["verify"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.lines().count() >= 12);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}
