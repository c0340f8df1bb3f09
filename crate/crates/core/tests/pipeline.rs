mod common;

use heatgraph::bench::pipeline::{run_pipeline, ForwardModel, Method, PipelineConfig};
use heatgraph::graph::GridSpec;
use heatgraph::image::read_pgm;

use common::*;

fn synthetic(names: &[&str]) -> Vec<std::path::PathBuf> {
    names
        .iter()
        .map(|n| workspace_root().join(format!("data/synthetic/{n}.pgm")))
        .collect()
}

fn strip_timings(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            [f[0], f[1], f[2], f[5], f[6]].join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = PipelineConfig::new(synthetic(&["gradient_8", "disk_32"]), 3, dir.path());
    cfg.grid = GridSpec::square(32).unwrap();
    cfg.timing_repeats = 1;
    let report = run_pipeline(&cfg).unwrap();
    assert_eq!(report.records.len(), 2);
    assert!(report.failures.is_empty());
    for name in ["gradient_8", "disk_32"] {
        for suffix in ["noisy", "blurred", "naive", "cutoff"] {
            let bytes = std::fs::read(dir.path().join(format!("{name}_{suffix}.pgm"))).unwrap();
            let img = read_pgm(&bytes).unwrap();
            assert_eq!((img.rows(), img.cols()), (32, 32));
        }
    }
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().last().unwrap().starts_with("Avg.,"));
    let rec = &report.records[0];
    assert_eq!(rec.modes_retained, admissible_by_enumeration(32, 32, rec.m_eps));
    assert!(rec.time_naive.unwrap() > 0.0 && rec.time_cutoff.unwrap() > 0.0);
}

#[test]
fn identical_configuration_gives_identical_results() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = PipelineConfig::new(synthetic(&["checker_32", "disk_8"]), 42, dir.path());
        cfg.grid = GridSpec::square(16).unwrap();
        cfg.timing_repeats = 1;
        run_pipeline(&cfg).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
        let img = std::fs::read(dir.path().join("checker_32_cutoff.pgm")).unwrap();
        (strip_timings(&csv), img)
    };
    assert_eq!(run(), run());
}

#[test]
fn unreadable_inputs_are_recorded_and_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("broken.pgm");
    std::fs::write(&bad, b"P5\n4 4\n255\n\x00").unwrap();
    let mut inputs = synthetic(&["disk_8"]);
    inputs.push(bad);
    inputs.push(dir.path().join("missing.pgm"));
    let mut cfg = PipelineConfig::new(inputs, 1, dir.path().join("out"));
    cfg.grid = GridSpec::square(8).unwrap();
    cfg.timing_repeats = 1;
    let report = run_pipeline(&cfg).unwrap();
    assert_eq!(report.records.len(), 1);
    assert_eq!(report.failures.len(), 2);
}

#[test]
fn noise_free_spectral_round_trip_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = PipelineConfig::new(synthetic(&["disk_32"]), 0, dir.path());
    cfg.grid = GridSpec::square(32).unwrap();
    cfg.sigma_noise = 0.0;
    cfg.forward = ForwardModel::Spectral;
    cfg.method = Method::Naive;
    cfg.timing_repeats = 1;
    let report = run_pipeline(&cfg).unwrap();
    assert_eq!(report.records[0].psnr_naive, Some(f64::INFINITY));
    let out = read_pgm(&std::fs::read(dir.path().join("disk_32_naive.pgm")).unwrap()).unwrap();
    let orig = read_pgm(&std::fs::read(&cfg.inputs[0]).unwrap()).unwrap();
    assert_eq!(out, orig);
}

#[test]
fn invalid_parameters_abort_before_any_work() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = PipelineConfig::new(synthetic(&["disk_8"]), 0, dir.path().join("out"));
    cfg.gamma = 1.0;
    assert!(run_pipeline(&cfg).is_err());
    assert!(!dir.path().join("out").exists());
}
