use experiment_cli::{
    fit_slope, measure, to_csv, to_svg, validate, Experiment, Row, MIN_FIT_POINTS,
};
use proptest::prelude::*;
use std::collections::BTreeMap;
use std::process::Command;

fn row(k: usize, measured: f64) -> Row {
    Row {
        k,
        measured,
        k_times_measured: k as f64 * measured,
        aux: BTreeMap::new(),
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hitchin-lab"))
}

#[test]
fn shipped_configs_validate() {
    for entry in std::fs::read_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/configs")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(validate(&text).is_ok(), "{}", path.display());
    }
}

#[test]
fn validation_collects_every_error() {
    let errs =
        validate(r#"{"experiment": "nope", "k_list": [0], "tau": [0.0, -1.0], "colour": 1}"#)
            .unwrap_err();
    let fields: Vec<&str> = errs.iter().map(|e| e.field.as_str()).collect();
    for f in ["experiment", "k_list", "tau", "colour", "output_dir"] {
        assert!(fields.contains(&f), "missing {f} in {fields:?}");
    }
}

#[test]
fn mapping_class_required_where_needed() {
    let errs =
        validate(r#"{"experiment": "trace", "k_list": [8], "tau": [0.0, 1.0], "output_dir": "x"}"#)
            .unwrap_err();
    assert!(errs.iter().any(|e| e.field == "mapping_class"));
    assert!(!Experiment::Curvature.needs_mapping_class());
}

#[test]
fn slope_of_exact_power_law() {
    let rows: Vec<Row> = [8, 16, 32, 64, 128]
        .iter()
        .map(|&k| row(k, 3.0 / k as f64))
        .collect();
    let fit = fit_slope(&rows).unwrap();
    assert!((fit.slope + 1.0).abs() < 1e-12);
    assert!(fit.half_width < 1e-9);
    assert_eq!(fit.excluded_k, Some(8));
    assert_eq!(fit.points, 4);
}

#[test]
fn slope_needs_enough_positive_points() {
    let rows: Vec<Row> = [8, 16, 32, 64]
        .iter()
        .map(|&k| row(k, if k == 16 { 0.0 } else { 1.0 }))
        .collect();
    assert!(fit_slope(&rows).is_none());
    assert_eq!(MIN_FIT_POINTS, 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn slope_recovers_exponent(p in -3.0f64..3.0, c in 0.1f64..10.0) {
        let rows: Vec<Row> = [4, 8, 16, 32, 64].iter().map(|&k| row(k, c * (k as f64).powf(p))).collect();
        prop_assert!((fit_slope(&rows).unwrap().slope - p).abs() < 1e-9);
    }
}

#[test]
fn reports_are_deterministic() {
    let cfg = validate(
        r#"{"experiment": "unitarity", "k_list": [4, 8], "tau": [0.0, 1.0],
            "mapping_class": [[0, -1], [1, 0]], "output_dir": "unused"}"#,
    )
    .unwrap();
    let (a, b) = (measure(&cfg), measure(&cfg));
    assert!(a.error.is_none());
    assert_eq!(to_csv(&a), to_csv(&b));
    assert_eq!(to_svg(&a), to_svg(&b));
    let header = to_csv(&a).lines().next().unwrap().to_string();
    assert!(
        header.starts_with("k,measured,k_times_measured"),
        "{header}"
    );
}

#[test]
fn list_and_validate_subcommands() {
    let out = bin().arg("list-experiments").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for e in Experiment::ALL {
        assert!(text.contains(e.name()));
    }
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/unitarity.json");
    assert_eq!(
        bin()
            .args(["validate", cfg])
            .output()
            .unwrap()
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        bin()
            .args(["validate", "/nonexistent.json"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn failure_report_records_context() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let out = dir.path().join("out");
    let body = serde_json::json!({
        "experiment": "trace", "k_list": [4], "tau": [0.0, 1.0],
        "mapping_class": [[1, 1], [0, 1]], "output_dir": out.to_str().unwrap()
    });
    std::fs::write(&cfg, body.to_string()).unwrap();
    assert_eq!(
        bin().arg("run").arg(&cfg).output().unwrap().status.code(),
        Some(2)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["error"]["kind"], "hypothesis");
    assert_eq!(report["error"]["k"], 4);
}
