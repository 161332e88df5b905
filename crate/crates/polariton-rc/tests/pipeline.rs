//! End-to-end pipeline tests on deliberately tiny splits: persistence
//! round-trips, run-to-run determinism, and thread-count independence of
//! the serialized outputs.

use polariton_rc::dataset;
use polariton_rc::harness::config::{ExperimentConfig, Mode};
use polariton_rc::harness::record::read_records;
use polariton_rc::harness::sweeps::{
    run_and_persist, run_baseline, with_pool, write_baseline,
};
use polariton_rc::qreservoir::SchemeTag;

fn mnist_available() -> bool {
    ExperimentConfig::default()
        .mnist_dir()
        .join(dataset::TRAIN_IMAGES)
        .exists()
}

fn tiny_quantum(out_dir: &std::path::Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.mode = Mode::Quantum;
    cfg.scheme = SchemeTag::SptpPrime;
    cfg.sizes = vec![4];
    cfg.realizations = 2;
    cfg.n_train = 24;
    cfg.n_test = 10;
    cfg.grid_points = 8;
    cfg.steps_per_interval = 25;
    cfg.out_dir = out_dir.to_path_buf();
    cfg
}

#[test]
fn quantum_records_persist_and_reload_identically() {
    if !mnist_available() {
        eprintln!("skipping: MNIST files not present");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny_quantum(dir.path());
    let records = run_and_persist(&cfg, "tiny").unwrap();

    assert_eq!(records.len(), 1);
    let rec = &records[0];
    assert_eq!(rec.size, 4);
    assert_eq!(rec.realizations.len(), 2);
    assert!(rec.best_error <= rec.mean_error);
    assert!(rec.realizations.iter().all(|o| (0.0..=1.0).contains(&o.error_rate)));

    let back = read_records(&dir.path().join("tiny.json")).unwrap();
    assert_eq!(&back, &records);

    let csv = std::fs::read_to_string(dir.path().join("tiny.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("size,realization,error"));
    assert_eq!(lines.count(), 2);

    // The meta sidecar holds the wall clock, keeping the canonical files
    // free of timing noise.
    let meta = std::fs::read_to_string(dir.path().join("tiny.meta.json")).unwrap();
    assert!(meta.contains("wall_clock_seconds"));
    let json = std::fs::read_to_string(dir.path().join("tiny.json")).unwrap();
    assert!(!json.contains("wall_clock"));
}

#[test]
fn rerun_and_thread_count_leave_output_bytes_unchanged() {
    if !mnist_available() {
        eprintln!("skipping: MNIST files not present");
        return;
    }
    let mut outputs = Vec::new();
    for threads in [1usize, 2, 4] {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_quantum(dir.path());
        cfg.threads = threads;
        run_and_persist(&cfg, "det").unwrap();
        outputs.push((
            std::fs::read(dir.path().join("det.json")).unwrap(),
            std::fs::read(dir.path().join("det.csv")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1], "1 vs 2 worker threads");
    assert_eq!(outputs[0], outputs[2], "1 vs 4 worker threads");

    // Same again in-process on the already-warm pool: a literal re-run.
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = tiny_quantum(dir.path());
    cfg.threads = 2;
    run_and_persist(&cfg, "det").unwrap();
    assert_eq!(
        outputs[0].0,
        std::fs::read(dir.path().join("det.json")).unwrap()
    );
}

#[test]
fn classical_records_are_deterministic_across_threads() {
    if !mnist_available() {
        eprintln!("skipping: MNIST files not present");
        return;
    }
    let mut outputs = Vec::new();
    for threads in [1usize, 3] {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tiny_quantum(dir.path());
        cfg.mode = Mode::Classical;
        cfg.sizes = vec![9];
        cfg.threads = threads;
        run_and_persist(&cfg, "cdet").unwrap();
        outputs.push(std::fs::read(dir.path().join("cdet.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn baseline_report_roundtrips_through_json() {
    if !mnist_available() {
        eprintln!("skipping: MNIST files not present");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::default();
    cfg.mode = Mode::LinearBaseline;
    cfg.n_train = 200;
    cfg.n_test = 80;
    cfg.out_dir = dir.path().to_path_buf();

    let report = run_baseline(&cfg).unwrap();
    assert!((0.0..=1.0).contains(&report.normalized_error));
    assert!((0.0..=1.0).contains(&report.unnormalized_error));

    let path = write_baseline(&cfg.out_dir, "base", &report).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let back: polariton_rc::harness::sweeps::BaselineReport =
        serde_json::from_str(&text).unwrap();
    assert_eq!(back.config_hash, report.config_hash);
    assert_eq!(back.unnormalized_error, report.unnormalized_error);
}

#[test]
fn config_file_plus_overrides_matches_cli_semantics() {
    // Mirrors how the CLI applies a TOML file and then flag overrides: the
    // merged config hashes identically however the values arrived.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.toml");
    std::fs::write(
        &path,
        "mode = \"quantum\"\nscheme = \"sp\"\nsizes = [10]\nn_train = 1000\nn_test = 500\n",
    )
    .unwrap();

    let mut from_file = ExperimentConfig::load(&path).unwrap();
    from_file.master_seed = 11; // a --seed override
    from_file.threads = 4; // a --threads override: host-only

    let mut direct = ExperimentConfig::default();
    direct.mode = Mode::Quantum;
    direct.scheme = SchemeTag::Sp;
    direct.sizes = vec![10];
    direct.n_train = 1000;
    direct.n_test = 500;
    direct.master_seed = 11;

    assert_eq!(from_file.config_hash(), direct.config_hash());
}

#[test]
fn pool_scoping_runs_bodies_on_requested_width() {
    let n = with_pool(3, rayon::current_num_threads).unwrap();
    assert_eq!(n, 3);
    // Width 0 falls back to the ambient pool.
    assert!(with_pool(0, rayon::current_num_threads).unwrap() >= 1);
}
