use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn h2v(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_h2v"))
        .args(args)
        .env_remove("H2V_SEED")
        .output()
        .expect("h2v runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn value(out: &Output) -> (f64, f64) {
    let v = json(out);
    (v["value_re"].as_f64().unwrap(), v["value_im"].as_f64().unwrap())
}

#[test]
fn eval_examples() {
    let out = h2v(&["eval", "--m", "1", "--n", "1", "--z1", "2", "--z2", "3"]);
    assert!(out.status.success());
    assert_eq!(value(&out), (5.0, 0.0));

    let out = h2v(&["eval", "--m", "0", "--n", "0", "--z1", "0.3-2i", "--z2", "7"]);
    assert_eq!(value(&out), (1.0, 0.0));

    for method in ["direct", "recurrence", "hermite1d"] {
        let out = h2v(&["eval", "--m", "2", "--n", "1", "--z1", "i", "--z2", "1", "--method", method]);
        assert_eq!(value(&out), (-1.0, -2.0), "{method}");
    }
}

#[test]
fn eval_on_the_diagonal_with_laguerre() {
    let out = h2v(&["eval", "--m", "3", "--n", "1", "--z1", "1+i", "--z2", "1-i", "--method", "laguerre_diagonal"]);
    assert!(out.status.success());
    let (re, im) = value(&out);
    // z1^2 (z1 z2 - 3) = 2i (2 - 3)
    assert!(re.abs() < 1e-12 && (im + 2.0).abs() < 1e-12);
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        &["eval", "--m", "1", "--n", "1", "--z1", "two", "--z2", "1"][..],
        &["eval", "--m", "-1", "--n", "1", "--z1", "1", "--z2", "1"],
        &["eval", "--m", "1", "--n", "1", "--z1", "1", "--z2", "1", "--method", "magic"],
        &["verify", "everything"],
        &["frobnicate"],
    ] {
        assert_eq!(h2v(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_3() {
    let out = h2v(&["verify", "orthogonality", "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = h2v(&["eval", "--m", "1", "--n", "1", "--z1", "1", "--z2", "2", "--method", "laguerre_diagonal"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn export_polynomial() {
    let out = h2v(&["export", "polynomial", "--m", "1", "--n", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["m"], 1);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    let find = |e1: u64, e2: u64| {
        terms
            .iter()
            .find(|t| t["e1"] == e1 && t["e2"] == e2)
            .map(|t| (t["re"].as_str().unwrap().to_string(), t["im"].as_str().unwrap().to_string()))
    };
    assert_eq!(find(1, 1), Some(("1/1".into(), "0/1".into())));
    assert_eq!(find(0, 0), Some(("-1/1".into(), "0/1".into())));
}

#[test]
fn export_quadrature_rule() {
    let out = h2v(&["export", "quadrature-rule", "--n", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows, ["node,weight", "-0.7071067811865476,0.886226925452758", "0.7071067811865476,0.886226925452758"]);
}

#[test]
fn export_kernel_grid_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.csv");
    let out = h2v(&[
        "export", "kernel-grid", "--alpha", "0.5", "--grid", "3x3", "--extent", "1",
        "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["row", "col", "z1_re", "z2_re", "k_re", "k_im", "k_abs"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 9);
    let centre = &rows[4];
    assert_eq!(&centre[2], "0.0");
    assert_eq!(&centre[3], "0.0");
    assert_eq!(centre[4].parse::<f64>().unwrap(), 0.140625);
}

#[test]
fn verify_orthogonality_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = h2v(&["verify", "orthogonality", "--alpha", "0.5", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    assert!(v["checks"].as_u64().unwrap() > 0);
    for f in ["reports.jsonl", "summary.csv", "timings.csv"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
}

#[test]
fn verify_identities_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = h2v(&["verify", "identities", "--max-degree", "8", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_bounds_fails_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = h2v(&["verify", "bounds", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["failed_checks"].as_array().unwrap().iter().any(|c| c.as_str().unwrap().starts_with("eval.bound")));
}

fn reports(dir: &Path) -> Vec<u8> {
    fs::read(dir.join("reports.jsonl")).unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = h2v(&["verify", "kernels", "--alpha", "0.5", "--seed", "11", "--out-dir", d.path().to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(reports(a.path()), reports(b.path()));
    assert_eq!(
        fs::read(a.path().join("summary.csv")).unwrap(),
        fs::read(b.path().join("summary.csv")).unwrap()
    );
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: Option<&str>, flag: Option<&str>| {
        let dir = tempfile::tempdir().unwrap();
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_h2v"));
        cmd.args(["verify", "kernels", "--alpha", "0.5", "--out-dir", dir.path().to_str().unwrap()]);
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        match seed {
            Some(s) => cmd.env("H2V_SEED", s),
            None => cmd.env_remove("H2V_SEED"),
        };
        assert!(cmd.output().unwrap().status.success());
        reports(dir.path())
    };
    assert_eq!(run(Some("11"), None), run(None, Some("11")));
    assert_ne!(run(Some("11"), None), run(None, Some("12")));
}

#[test]
fn config_file_supplies_options() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("h2v.conf");
    fs::write(&cfg, "# evaluation point\nm = 2\nn = 1\nz1 = i\nz2 = 1\nmethod = direct\n").unwrap();
    let out = h2v(&["eval", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(value(&out), (-1.0, -2.0));

    // flags win over the file
    let out = h2v(&["eval", "--config", cfg.to_str().unwrap(), "--z1", "2", "--m", "1", "--z2", "3"]);
    assert_eq!(value(&out), (5.0, 0.0));

    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(h2v(&["eval", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let out = h2v(&["eval", "--config", "/nonexistent/h2v.conf"]);
    assert_eq!(out.status.code(), Some(4));
}
