use std::fs;

use spinor_gp_core::counting::suites::Suite;
use spinor_gp_core::experiment::{
    run_experiment, ConvergenceTrendScenario, ExperimentConfig, GpRunScenario, LemmaSuiteScenario,
    ProtocolDemoScenario, RabiScenario, ScatteringSweepScenario, Scenario,
};
use spinor_gp_core::Error;

fn config(scenario: Scenario, dir: &std::path::Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(scenario);
    cfg.output_dir = dir.to_path_buf();
    cfg
}

#[test]
fn every_default_config_round_trips() {
    for kind in Scenario::KINDS {
        let cfg = ExperimentConfig::new(Scenario::default_for(kind).unwrap());
        let text = cfg.to_json().unwrap();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(back, cfg, "{kind}");
        assert_eq!(back.to_json().unwrap(), text);
    }
}

#[test]
fn sparse_config_takes_defaults() {
    let cfg = ExperimentConfig::from_json(r#"{"schema_version": 1, "scenario": {"kind": "rabi", "omega_drive": 0.0}}"#)
        .unwrap();
    let Scenario::Rabi(s) = cfg.scenario else { panic!("wrong scenario") };
    assert_eq!(s.omega_drive, 0.0);
    assert_eq!(s.steps, RabiScenario::default().steps);
}

#[test]
fn config_rejects_bad_input() {
    let wrong_version = r#"{"schema_version": 2, "scenario": {"kind": "rabi"}}"#;
    assert!(matches!(ExperimentConfig::from_json(wrong_version), Err(Error::Config(_))));
    let unknown_field = r#"{"schema_version": 1, "scenario": {"kind": "rabi", "omega": 1.0}}"#;
    assert!(ExperimentConfig::from_json(unknown_field).is_err());
    let negative_pair =
        r#"{"schema_version": 1, "scenario": {"kind": "convergence_trend", "pair_by_distance": [1.0, -0.5, 0.0]}}"#;
    assert!(matches!(ExperimentConfig::from_json(negative_pair), Err(Error::Config(_))));
}

#[test]
fn suites_accept_cli_and_descriptive_names() {
    let s: Vec<Suite> = serde_json::from_str(r#"["lemma31", "shell_scaling"]"#).unwrap();
    assert_eq!(s, [Suite::ProjectorAlgebra, Suite::ShellScaling]);
    assert_eq!(serde_json::to_string(&Suite::IndicatorGap).unwrap(), r#""lemma51""#);
}

#[test]
fn failure_is_tagged_and_partial_results_stay_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let s = ScatteringSweepScenario { n_values: vec![1, 2], ..ScatteringSweepScenario::default() };
    let err = run_experiment(&config(Scenario::ScatteringSweep(s), dir.path())).unwrap_err();
    match &err {
        Error::Scenario { scenario, .. } => assert_eq!(scenario, "scattering_sweep"),
        other => panic!("untagged error {other:?}"),
    }
    assert!(dir.path().join("wells.csv").exists());
    assert!(dir.path().join("scaling.csv").exists());
    let report: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "error");
    assert!(report["error"].as_str().unwrap().contains("support"));
}

#[test]
fn stability_guard_failure_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let s = GpRunScenario { dt: 0.5, t_end: 1.0, ..GpRunScenario::default() };
    let err = run_experiment(&config(Scenario::GpRun(s), dir.path())).unwrap_err();
    assert!(err.to_string().contains("gp_run"), "{err}");
}

#[test]
fn trend_depends_on_seed_only_through_the_initial_orbital() {
    let s =
        ConvergenceTrendScenario { n_values: vec![2, 3], energy_identity: None, ..ConvergenceTrendScenario::default() };
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    for (d, seed) in dirs.iter().zip([5, 5, 6]) {
        let mut cfg = config(Scenario::ConvergenceTrend(s.clone()), d.path());
        cfg.seed = seed;
        run_experiment(&cfg).unwrap();
    }
    let read = |i: usize| fs::read(dirs[i].path().join("trend.csv")).unwrap();
    assert_eq!(read(0), read(1));
    assert_ne!(read(0), read(2));
}

#[test]
fn trend_report_labels_the_effective_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let s = ConvergenceTrendScenario { n_values: vec![2, 3, 4], ..ConvergenceTrendScenario::default() };
    let r = run_experiment(&config(Scenario::ConvergenceTrend(s), dir.path())).unwrap();
    assert!(r.labels["effective_coupling"].contains("g = "));
    assert_eq!(r.metrics["effective_coupling_g"], 1.0 + 2.0 * 0.5 + 0.25);
    let csv = fs::read_to_string(dir.path().join("trend.csv")).unwrap();
    assert!(csv.starts_with("n,t,alpha_tilde,trace_distance,"));
    assert_eq!(csv.lines().count(), 1 + 3 * 4);
}

#[test]
fn static_drive_without_oscillation_follows_the_population_law() {
    let dir = tempfile::tempdir().unwrap();
    let s = RabiScenario { omega_drive: 0.0, steps: 4096, ..RabiScenario::default() };
    let r = run_experiment(&config(Scenario::Rabi(s), dir.path())).unwrap();
    assert!(r.metrics["max_deviation"] < 1e-12, "{}", r.metrics["max_deviation"]);
}

#[test]
fn full_pulse_transfers_everything_to_the_down_level() {
    let dir = tempfile::tempdir().unwrap();
    let s = ProtocolDemoScenario { pulse_us: 400.0, ..ProtocolDemoScenario::default() };
    let r = run_experiment(&config(Scenario::ProtocolDemo(s), dir.path())).unwrap();
    assert!((r.metrics["pulse_solver_time"] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!(r.metrics["pop_up"] < 1e-5, "{}", r.metrics["pop_up"]);
    assert!(r.labels["rescaling"].contains("625"));
}

#[test]
fn lemma_suite_writes_one_report_per_suite() {
    let dir = tempfile::tempdir().unwrap();
    let s = LemmaSuiteScenario {
        suites: vec![Suite::ProjectorAlgebra, Suite::ShellScaling],
        cases: 6,
        ..Default::default()
    };
    let r = run_experiment(&config(Scenario::LemmaSuite(s), dir.path())).unwrap();
    assert!(r.passed());
    assert!(dir.path().join("lemma31.json").exists() && dir.path().join("lemma41.json").exists());
    assert!(r.checks.iter().any(|c| c.name == "lemma41/l2_slope"));
}

#[test]
fn report_carries_schema_and_build_id() {
    let dir = tempfile::tempdir().unwrap();
    let s = RabiScenario { steps: 256, tolerance: 1.0, ..RabiScenario::default() };
    run_experiment(&config(Scenario::Rabi(s), dir.path())).unwrap();
    let report: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert!(!report["build_id"].as_str().unwrap().is_empty());
    assert_eq!(report["parameters"]["kind"], "rabi");
    let svg = fs::read_to_string(dir.path().join("rabi.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 5);
}
