use std::path::Path;
use std::process::{Command, Output};

use divcurl_cli::{parse_config_str, resolve, Cli, CliError, Command as Cmd};
use hilbert_complex::mtx;
use hilbert_complex::sparse::CsrMatrix;
use serde_json::Value;

fn divcurl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divcurl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn cli(args: &[&str]) -> Cli {
    use clap::Parser;
    Cli::try_parse_from(std::iter::once("divcurl").chain(args.iter().copied())).unwrap()
}

#[test]
fn minimal_config_is_valid() {
    let raw = parse_config_str(r#"{"command":"betti","grid":{"d":2,"N":8,"L":6.5,"bc":"periodic"}}"#).unwrap();
    let c = resolve(raw, &Cli::default()).unwrap();
    assert_eq!(c.command, Cmd::Betti);
    assert_eq!(c.grid.unwrap().l, 6.5);
}

#[test]
fn missing_grid_is_named() {
    let raw = parse_config_str(r#"{"command":"betti"}"#).unwrap();
    match resolve(raw, &Cli::default()).unwrap_err() {
        CliError::Invalid(v) => assert!(v.iter().any(|m| m.contains("grid")), "{v:?}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn flags_override_file_values() {
    let raw = parse_config_str(r#"{"command":"betti","grid":{"d":2,"N":8,"bc":"periodic"}}"#).unwrap();
    let c = resolve(raw, &cli(&["--N", "16", "--tol", "1e-8"])).unwrap();
    assert_eq!(c.grid.unwrap().n, 16);
    assert_eq!(c.tol, Some(1e-8));
}

#[test]
fn every_violation_is_listed() {
    let raw = parse_config_str(r#"{"command":"divcurl","grid":{"d":4,"N":8,"bc":"periodic"},"tol":-1}"#).unwrap();
    match resolve(raw, &Cli::default()).unwrap_err() {
        CliError::Invalid(v) => {
            assert!(v.iter().any(|m| m.starts_with("grid:")), "{v:?}");
            assert!(v.iter().any(|m| m.contains("tol")), "{v:?}");
            assert!(v.iter().any(|m| m.contains("frequencies")), "{v:?}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unknown_keys_are_rejected_with_position() {
    let err = parse_config_str("{\n  \"command\": \"betti\",\n  \"gird\": {}\n}").unwrap_err();
    match &err {
        CliError::Parse { message, line, .. } => {
            assert_eq!(*line, 3);
            assert!(message.contains("gird"));
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn betti_on_periodic_plane() {
    let o = divcurl(&["--command", "betti", "--d", "2", "--N", "8", "--L", "6.2832", "--bc", "periodic"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "harmonic_dim=2\n");
}

#[test]
fn betti_with_hole_from_flags() {
    let o = divcurl(&["--command", "betti", "--d", "2", "--N", "8", "--bc", "dirichlet", "--hole", "3,3,5,5"]);
    assert_eq!(stdout(&o), "harmonic_dim=1\n");
    let two = divcurl(&[
        "--command", "betti", "--d", "2", "--N", "10", "--bc", "dirichlet", "--hole", "2,2,4,4", "--hole", "6,6,8,8",
    ]);
    assert_eq!(stdout(&two), "harmonic_dim=2\n");
}

#[test]
fn imported_non_sequence_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let a0 = CsrMatrix::<f64>::from_triplets(3, 2, (0..6).map(|i| (i % 3, i / 3, 1.0 + i as f64 * 0.37)));
    let a1 = CsrMatrix::<f64>::from_triplets(2, 3, (0..6).map(|i| (i % 2, i / 2, (i as f64 * 0.91).cos())));
    mtx::write_file(&a0, &dir.path().join("A0.mtx")).unwrap();
    mtx::write_file(&a1, &dir.path().join("A1.mtx")).unwrap();
    let o = divcurl(&["--command", "check-complex", "--import", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "NotASequence");
    assert!(e["residual"].as_f64().unwrap() > e["bound"].as_f64().unwrap());
}

#[test]
fn friedrichs_on_dirichlet_grid_exits_one() {
    let o = divcurl(&["--command", "friedrichs", "--d", "2", "--N", "8", "--bc", "dirichlet"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "UnsupportedBC");
}

#[test]
fn usage_and_config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["--bogus"],
        vec!["--command", "betti"],
        vec!["--command", "nope", "--d", "2", "--N", "8"],
        vec!["--config", "/nonexistent/run.json"],
    ] {
        let o = divcurl(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(stderr_json(&o)["error"].is_string());
    }
    let bad = write_config(dir.path(), "bad.json", "{\"command\": \"betti\",\n \"x\": 1}");
    let o = divcurl(&["--config", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "ConfigParse");
    assert_eq!(e["line"], 2);
}

#[test]
fn export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ops");
    let o = divcurl(&["--command", "export", "--d", "2", "--N", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["A0.mtx", "A1.mtx", "gram0.mtx", "gram1.mtx", "gram2.mtx"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let o = divcurl(&["--command", "check-complex", "--import", out.to_str().unwrap()]);
    assert_eq!(stdout(&o), "residual=0\n");
    let o = divcurl(&["--command", "betti", "--import", out.to_str().unwrap()]);
    assert_eq!(stdout(&o), "harmonic_dim=2\n");
}

#[test]
fn one_dimensional_export_has_empty_curl() {
    let dir = tempfile::tempdir().unwrap();
    let o = divcurl(&["--command", "export", "--d", "1", "--N", "4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let a1 = mtx::read_file::<f64>(&dir.path().join("A1.mtx")).unwrap();
    assert_eq!(a1.shape(), (0, 4));
    let text = std::fs::read_to_string(dir.path().join("A1.mtx")).unwrap();
    assert!(text.starts_with("%%MatrixMarket matrix coordinate real general\n"));
}

#[test]
fn export_to_unwritable_path_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let target = file.join("ops");
    let o = divcurl(&["--command", "export", "--d", "2", "--N", "4", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "Io");
}

#[test]
fn identical_configs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        r#"{"experiment":"positive","grid":{"d":2,"N":64,"bc":"periodic"},"frequencies":[2,4,6],"preset":"sawtooth","out":"OUT"}"#,
        r#"{"command":"counterexample","grid":{"d":2,"N":32,"bc":"periodic"},"frequencies":[2,4,8],"out":"OUT"}"#,
        r#"{"command":"projection","grid":{"d":2,"N":8,"bc":"periodic"},"frequencies":[1,2],"out":"OUT"}"#,
        r#"{"command":"friedrichs","grid":{"d":2,"N":4,"bc":"periodic"},"trials":5,"seed":7,"out":"OUT"}"#,
    ];
    for (i, text) in configs.iter().enumerate() {
        let mut bytes = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("c{i}r{run}"));
            let text = text.replace("OUT", out.to_str().unwrap());
            let cfg = write_config(dir.path(), &format!("c{i}r{run}.json"), &text);
            let o = divcurl(&["--config", &cfg]);
            assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
            let csv = std::fs::read_dir(&out).unwrap().next().unwrap().unwrap().path();
            bytes.push(std::fs::read(csv).unwrap());
        }
        assert!(!bytes[0].is_empty());
        assert_eq!(bytes[0], bytes[1], "config {i}");
    }
}

#[test]
fn divcurl_csv_header_and_custom_family() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        r#"{{"command":"divcurl","grid":{{"d":2,"N":32,"bc":"periodic"}},"frequencies":[2,4],
           "family":{{"u":{{"macro":["1","0"],"micro":["sin(x2)","0"]}},"v":{{"macro":["1","0"],"micro":["cos(x1)","0"]}}}},
           "out":{:?}}}"#,
        dir.path().to_str().unwrap()
    );
    let cfg = write_config(dir.path(), "run.json", &text);
    let o = divcurl(&["--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("rows=2 max_error="));
    let csv = std::fs::read_to_string(dir.path().join("divcurl.csv")).unwrap();
    assert!(csv.starts_with("k,I_k,I_inf,error,res_div,res_curl\n2,"));
}

#[test]
fn remaining_commands_summarize() {
    let o = divcurl(&["--command", "poincare", "--d", "1", "--N", "8"]);
    assert!(stdout(&o).starts_with("poincare_A0=1.02"));
    assert!(stdout(&o).trim_end().ends_with("poincare_A1star=none"));
    let o = divcurl(&["--command", "hodge", "--d", "2", "--N", "4"]);
    assert!(stdout(&o).starts_with("harmonic_dim=2 orthogonality_defect="));
    let o = divcurl(&["--command", "gradgrad", "--d", "3", "--N", "3"]);
    assert_eq!(stdout(&o), "harmonic_dim_sym=6 harmonic_dim_dev=8 residual_sym=0 residual_dev=0\n");
    let o = divcurl(&["--command", "gradgrad", "--d", "2", "--N", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "UnsupportedDim");
}
