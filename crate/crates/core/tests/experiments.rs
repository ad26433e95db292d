use kdv5::data::DataSpec;
use kdv5::experiments::{
    emit, envelope, parse_config_str, run_scenario, RunOutput, Scenario, ScenarioConfig, Status, SERIES_COLUMNS,
};
use kdv5::Error;

fn quick(scenario: Scenario) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(scenario);
    cfg.t_final = 0.2;
    cfg
}

fn table<'a>(out: &'a RunOutput, name: &str) -> &'a kdv5::experiments::Table {
    out.tables.iter().find(|t| t.name == name).unwrap_or_else(|| panic!("no table {name}"))
}

#[test]
fn every_scenario_passes_on_defaults() {
    let mut decay = quick(Scenario::DecayRegularity);
    decay.k = 2;
    let mut smoothing = quick(Scenario::SmoothingProbe);
    smoothing.draws = 10;
    let configs = [
        quick(Scenario::Conservation),
        quick(Scenario::Persistence),
        decay,
        quick(Scenario::Lipschitz),
        smoothing,
    ];
    for cfg in &configs {
        let out = run_scenario(cfg).unwrap();
        assert_eq!(out.status, Status::Pass, "{}: {:?}", cfg.scenario.name(), out.report.checks);
        let series = table(&out, "series.csv");
        assert_eq!(series.header, SERIES_COLUMNS.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        assert!(!series.rows.is_empty());
    }
}

#[test]
fn scenario_specific_tables() {
    let out = run_scenario(&quick(Scenario::Persistence)).unwrap();
    assert_eq!(table(&out, "envelope.csv").header, ["t", "weighted_sq", "envelope"]);

    let out = run_scenario(&quick(Scenario::Lipschitz)).unwrap();
    let ladder = table(&out, "ladder.csv");
    assert_eq!(ladder.header, ["epsilon", "perturbation_z", "sup_difference_z", "ratio"]);
    assert_eq!(ladder.rows.len(), 3);

    let mut cfg = quick(Scenario::SmoothingProbe);
    cfg.draws = 4;
    let out = run_scenario(&cfg).unwrap();
    assert_eq!(table(&out, "draws.csv").rows.len(), 4);
    // family differs from the locked one, so only the ratios are reported
    assert!(out.report.checks.iter().all(|c| c.name != "smoothing_lock"));
}

#[test]
fn outputs_are_deterministic_in_the_seed() {
    let mut cfg = quick(Scenario::Lipschitz);
    cfg.data = DataSpec::RandomSchwartz { amplitude: 0.8 };
    cfg.seed = 11;
    let csv = |cfg: &ScenarioConfig| {
        let dir = tempfile::tempdir().unwrap();
        emit(&run_scenario(cfg).unwrap(), dir.path()).unwrap();
        (
            std::fs::read(dir.path().join("series.csv")).unwrap(),
            std::fs::read(dir.path().join("ladder.csv")).unwrap(),
        )
    };
    let first = csv(&cfg);
    assert_eq!(first, csv(&cfg));
    cfg.seed = 12;
    assert_ne!(first.0, csv(&cfg).0);
}

#[test]
fn linear_persistence_reports_the_free_bound() {
    let mut cfg = quick(Scenario::Persistence);
    cfg.nonlinear = false;
    cfg.t_final = 1.0;
    let out = run_scenario(&cfg).unwrap();
    assert!(out.report.checks.iter().any(|c| c.name == "free_weighted_bound" && c.passed));
}

#[test]
fn envelope_is_the_gronwall_solution() {
    // E' = C E + B with E(0) = A
    let (a, b, c) = (2.0, 0.7, 0.5);
    let h = 1e-5;
    for t in [0.1, 0.5, 1.0] {
        let de = (envelope(a, b, c, t + h) - envelope(a, b, c, t - h)) / (2.0 * h);
        assert!((de - (c * envelope(a, b, c, t) + b)).abs() < 1e-8);
    }
    assert_eq!(envelope(a, b, 0.0, 2.0), a + 2.0 * b);
}

#[test]
fn parse_errors_carry_lines() {
    let err = parse_config_str("scenario = \"lipschitz\"\nk = 1\nt_final = \"soon\"\n").unwrap_err();
    match err {
        Error::Parse { line, .. } => assert_eq!(line, Some(3)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_config_str("k = 1\n"), Err(Error::Parse { .. })));
    assert!(matches!(parse_config_str("scenario = \"nope\"\n"), Err(Error::Parse { .. })));
    let cfg = parse_config_str("scenario = \"persistence\"\n[data]\nfamily = \"sech2\"\nrate = 0.3\n").unwrap();
    assert!(matches!(cfg.data, DataSpec::Sech2 { .. }));
}
