use harness::sweep::run_jobs;
use harness::{compare_report, read_csv, run_single, run_sweep, summarize, ExperimentConfig, Models, RunConfig};
use miners_sim::ScenarioConfig;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small() -> ExperimentConfig {
    ExperimentConfig::from_json(
        r#"{"epsilons": [0, 0.1], "seeds": 3, "seed_base": 5,
            "conditions": ["smart+rr", "smart+meu", "dummy+rr"], "steps": 120}"#,
    )
    .unwrap()
}

fn scenario(cfg: &ExperimentConfig) -> ScenarioConfig {
    cfg.load_scenario(std::path::Path::new(".")).unwrap()
}

#[test]
fn rows_hold_every_run() {
    let cfg = small();
    let (summary, records) = run_sweep(&cfg, &scenario(&cfg), &Models::builtin()).unwrap();
    assert_eq!(records.len(), 3 * 2 * 3);
    assert_eq!(summary.rows.len(), 6);
    for r in &summary.rows {
        assert_eq!(r.n, 3);
        assert!(r.min <= r.mean && r.mean <= r.max);
    }
    let seeds: Vec<u64> = records.iter().map(|r| r.seed).collect();
    assert!(seeds.iter().all(|s| (5..8).contains(s)));
}

#[test]
fn one_seed_sweep_is_the_single_run() {
    let cfg = ExperimentConfig::from_json(
        r#"{"epsilons": [0.05], "seeds": 1, "seed_base": 9, "conditions": ["smart+meu"], "steps": 80}"#,
    )
    .unwrap();
    let sc = scenario(&cfg);
    let models = Models::builtin();
    let (summary, _) = run_sweep(&cfg, &sc, &models).unwrap();
    let run = run_single(&RunConfig::new(sc, "smart+meu".parse().unwrap(), 0.05, 9), &models).unwrap();
    let row = summary.row("smart+meu", 0.05).unwrap();
    assert_eq!(row.mean, run.record.score() as f64);
    assert_eq!(row.std, 0.0);
}

#[test]
fn csv_ignores_job_order() {
    let cfg = small();
    let sc = scenario(&cfg);
    let models = Models::builtin();
    let mut jobs = cfg.jobs().unwrap();
    let base = summarize(&run_jobs(&cfg, &sc, &models, &jobs).unwrap()).to_csv();
    for seed in 0..2 {
        jobs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        assert_eq!(summarize(&run_jobs(&cfg, &sc, &models, &jobs).unwrap()).to_csv(), base);
    }
}

#[test]
fn report_from_csv_matches_memory() {
    let cfg = small();
    let (summary, _) = run_sweep(&cfg, &scenario(&cfg), &Models::builtin()).unwrap();
    let back = read_csv(&summary.to_csv()).unwrap();
    assert_eq!(back, summary);
    assert_eq!(compare_report(&back).unwrap(), compare_report(&summary).unwrap());
}

#[test]
fn bad_configs_are_rejected() {
    for text in [
        r#"{"epsilons": [1.5]}"#,
        r#"{"epsilons": []}"#,
        r#"{"seeds": 0}"#,
        r#"{"conditions": ["smart+greedy"]}"#,
        r#"{"opponent": "nobody"}"#,
        r#"{"epsilon": [0]}"#,
    ] {
        let err = ExperimentConfig::from_json(text).unwrap_err();
        assert_eq!(err.exit_code(), 1, "{text}");
    }
}

#[test]
fn missing_scenario_file_is_a_validation_error() {
    let cfg = ExperimentConfig::from_json(r#"{"scenario": "no/such.json"}"#).unwrap();
    assert_eq!(cfg.load_scenario(std::path::Path::new(".")).unwrap_err().exit_code(), 1);
}
