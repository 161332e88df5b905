//! Seeded sweep execution: dataset preparation, per-realization evaluation
//! fan-out, readout training, and aggregation into result records.
//!
//! Image evaluations are distributed over a worker pool; assembly is
//! order-preserving and every random stream is derived from (master seed,
//! domain, indices), so the thread count cannot change any result.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::creservoir::Lattice;
use crate::dataset::{self, InputSignal};
use crate::error::{Error, Result};
use crate::harness::config::{CanonicalConfig, ExperimentConfig, Mode};
use crate::harness::record::{RealizationOutcome, ResultRecord, SeedLedger, write_records};
use crate::qreservoir::{Evaluator, ImageFeatures, MaskSet, PumpScheme, SchemeTag};
use crate::readout::{one_hot_targets, train_ridge, error_rate, DesignMatrix};
use crate::wigner::precompute_kernels;

/// Train/test signals with their indices in the source MNIST file; the
/// index keys the per-image noise stream.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedData {
    pub train: Vec<(u64, InputSignal)>,
    pub test: Vec<(u64, InputSignal)>,
}

impl PreparedData {
    pub fn train_signals(&self) -> Vec<InputSignal> {
        self.train.iter().map(|(_, s)| s.clone()).collect()
    }

    pub fn test_signals(&self) -> Vec<InputSignal> {
        self.test.iter().map(|(_, s)| s.clone()).collect()
    }

    fn labels(side: &[(u64, InputSignal)]) -> Vec<u8> {
        side.iter().map(|(_, s)| s.label).collect()
    }

    fn us(side: &[(u64, InputSignal)]) -> Vec<[f64; 16]> {
        side.iter().map(|(_, s)| s.u).collect()
    }
}

/// Load MNIST, downsample, and split according to the config's seed.
pub fn prepare_dataset(cfg: &ExperimentConfig) -> Result<PreparedData> {
    let images = dataset::load_mnist_train(&cfg.mnist_dir())?;
    let (train_idx, test_idx) =
        dataset::split_indices(images.len(), cfg.n_train, cfg.n_test, cfg.master_seed)?;
    let take = |idx: &[usize]| {
        idx.iter()
            .map(|&i| (i as u64, dataset::signal_from_image(&images[i])))
            .collect()
    };
    Ok(PreparedData {
        train: take(&train_idx),
        test: take(&test_idx),
    })
}

/// Run `body` on a dedicated pool of `threads` workers (0 = global default).
pub fn with_pool<T: Send>(threads: usize, body: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(body());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(body))
}

fn pump_scheme(cfg: &ExperimentConfig) -> PumpScheme {
    match cfg.scheme {
        SchemeTag::Sp => PumpScheme::sp(),
        SchemeTag::Tp => PumpScheme::tp(),
        SchemeTag::Sptp => PumpScheme::sptp(),
        SchemeTag::SptpPrime => PumpScheme::sptp_prime(cfg.theta_max),
    }
}

fn quantum_domains(cfg: &ExperimentConfig) -> Vec<&'static str> {
    let mut d = vec!["split", "mask"];
    if pump_scheme(cfg).uses_phase_mask() {
        d.push("phase-mask");
    }
    if cfg.detuning > 0.0 {
        d.push("detuning");
    }
    d
}

fn train_and_score(
    data: &PreparedData,
    train_feats: &[Vec<f64>],
    test_feats: &[Vec<f64>],
    beta_override: Option<f64>,
) -> Result<(f64, f64)> {
    let x_train = DesignMatrix::assemble(&PreparedData::us(&data.train), train_feats)?;
    let x_test = DesignMatrix::assemble(&PreparedData::us(&data.test), test_feats)?;
    let y = one_hot_targets(&PreparedData::labels(&data.train));
    let beta = beta_override.unwrap_or_else(|| x_train.default_beta());
    let weights = train_ridge(&x_train, &y, beta)?;
    let train_err = error_rate(&weights, &x_train, &PreparedData::labels(&data.train))?;
    let test_err = error_rate(&weights, &x_test, &PreparedData::labels(&data.test))?;
    Ok((train_err, test_err))
}

fn leakage_stats(feats: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut n = 0usize;
    let mut sum = 0.0;
    let mut max = 0.0f64;
    for l in feats {
        n += 1;
        sum += l;
        max = max.max(l);
    }
    (if n == 0 { 0.0 } else { sum / n as f64 }, max)
}

/// Quantum sweep: for each Fock dimension in `cfg.sizes` and each mask
/// realization, evaluate every image's Wigner features, train the readout,
/// and aggregate error rates. Returns one record per size.
pub fn run_quantum_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    if cfg.mode != Mode::Quantum {
        return Err(Error::Config("run_quantum_sweep needs mode = \"quantum\"".into()));
    }
    let data = prepare_dataset(cfg)?;
    with_pool(cfg.threads, || quantum_sweep_on(cfg, &data))?
}

/// As [`run_quantum_sweep`] with dataset and pool supplied by the caller.
pub fn quantum_sweep_on(cfg: &ExperimentConfig, data: &PreparedData) -> Result<Vec<ResultRecord>> {
    let params = cfg.model_params();
    let scheme = pump_scheme(cfg);
    let icfg = cfg.integrator();
    let grid = cfg.phase_grid()?;
    let w_in_max = cfg.effective_w_in_max();
    let canonical = cfg.canonical();
    let domains = quantum_domains(cfg);

    let all_signals: Vec<InputSignal> = data
        .train
        .iter()
        .chain(data.test.iter())
        .map(|(_, s)| s.clone())
        .collect();

    let mut records = Vec::with_capacity(cfg.sizes.len());
    for &n in &cfg.sizes {
        let start = Instant::now();
        let kernels = precompute_kernels(&grid, n)?;
        let mut outcomes = Vec::with_capacity(cfg.realizations as usize);
        for r in 0..cfg.realizations {
            let masks = MaskSet::generate(&scheme, w_in_max, cfg.master_seed, r)?;
            let rescale = Evaluator::batch_rescale(&masks, &all_signals);
            let ev = Evaluator {
                params,
                scheme,
                cfg: icfg,
                kernels: &kernels,
                masks,
                rescale,
                delta_strength: cfg.detuning,
                master_seed: cfg.master_seed,
                realization: r,
            };
            let evaluate = |side: &[(u64, InputSignal)]| -> Result<Vec<ImageFeatures>> {
                side.par_iter()
                    .map(|(idx, sig)| ev.features_for(*idx, sig))
                    .collect()
            };
            let train_feats = evaluate(&data.train)?;
            let test_feats = evaluate(&data.test)?;
            let (mean_leakage, max_leakage) = leakage_stats(
                train_feats
                    .iter()
                    .chain(test_feats.iter())
                    .map(|f| f.leakage),
            );
            let (train_err, test_err) = train_and_score(
                data,
                &train_feats.into_iter().map(|f| f.f).collect::<Vec<_>>(),
                &test_feats.into_iter().map(|f| f.f).collect::<Vec<_>>(),
                cfg.beta,
            )?;
            eprintln!(
                "[quantum {} N={n}] realization {r}: test error {:.4}, train {:.4}",
                scheme.tag, test_err, train_err
            );
            outcomes.push(RealizationOutcome {
                realization: r,
                error_rate: test_err,
                train_error_rate: train_err,
                mean_leakage: Some(mean_leakage),
                max_leakage: Some(max_leakage),
            });
        }
        records.push(ResultRecord::from_outcomes(
            Mode::Quantum,
            Some(cfg.scheme),
            n,
            canonical.clone(),
            SeedLedger::new(cfg.master_seed, &domains, cfg.realizations),
            outcomes,
            start.elapsed().as_secs_f64(),
        )?);
    }
    Ok(records)
}

/// Classical sweep: same protocol with a DNLS lattice per realization and
/// intensity features. Sizes must be perfect squares.
pub fn run_classical_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    if cfg.mode != Mode::Classical {
        return Err(Error::Config("run_classical_sweep needs mode = \"classical\"".into()));
    }
    let data = prepare_dataset(cfg)?;
    with_pool(cfg.threads, || classical_sweep_on(cfg, &data))?
}

/// As [`run_classical_sweep`] with dataset and pool supplied by the caller.
pub fn classical_sweep_on(cfg: &ExperimentConfig, data: &PreparedData) -> Result<Vec<ResultRecord>> {
    let params = cfg.model_params();
    let icfg = cfg.integrator();
    let w_in_max = cfg.effective_w_in_max();
    let k_max = cfg.effective_k_max();
    let canonical = cfg.canonical();

    let mut records = Vec::with_capacity(cfg.sizes.len());
    for &nc in &cfg.sizes {
        let start = Instant::now();
        let mut outcomes = Vec::with_capacity(cfg.realizations as usize);
        for r in 0..cfg.realizations {
            let lattice = Lattice::from_modes(nc, k_max, w_in_max, cfg.master_seed, r)?;
            let evaluate = |side: &[(u64, InputSignal)]| -> Result<Vec<Vec<f64>>> {
                side.par_iter()
                    .map(|(_, sig)| lattice.evaluate_image(sig, &params, &icfg))
                    .collect()
            };
            let train_feats = evaluate(&data.train)?;
            let test_feats = evaluate(&data.test)?;
            let (train_err, test_err) =
                train_and_score(data, &train_feats, &test_feats, cfg.beta)?;
            eprintln!(
                "[classical N_c={nc}] realization {r}: test error {:.4}, train {:.4}",
                test_err, train_err
            );
            outcomes.push(RealizationOutcome {
                realization: r,
                error_rate: test_err,
                train_error_rate: train_err,
                mean_leakage: None,
                max_leakage: None,
            });
        }
        records.push(ResultRecord::from_outcomes(
            Mode::Classical,
            None,
            nc,
            canonical.clone(),
            SeedLedger::new(cfg.master_seed, &["split", "lattice", "lattice-input"], cfg.realizations),
            outcomes,
            start.elapsed().as_secs_f64(),
        )?);
    }
    Ok(records)
}

/// Linear-classifier baseline on the raw 16-value signals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub config_hash: String,
    pub config: CanonicalConfig,
    pub n_train: usize,
    pub n_test: usize,
    /// Error with each signal rescaled to unit Euclidean norm.
    pub normalized_error: f64,
    /// Error on the raw signals.
    pub unnormalized_error: f64,
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

pub fn run_baseline(cfg: &ExperimentConfig) -> Result<BaselineReport> {
    cfg.validate()?;
    let data = prepare_dataset(cfg)?;
    baseline_on(cfg, &data)
}

/// As [`run_baseline`] with a prepared dataset.
pub fn baseline_on(cfg: &ExperimentConfig, data: &PreparedData) -> Result<BaselineReport> {
    let start = Instant::now();
    let train = data.train_signals();
    let test = data.test_signals();
    let normalized_error = crate::readout::linear_baseline(&train, &test, true, cfg.beta)?;
    let unnormalized_error = crate::readout::linear_baseline(&train, &test, false, cfg.beta)?;
    Ok(BaselineReport {
        config_hash: cfg.config_hash(),
        config: cfg.canonical(),
        n_train: cfg.n_train,
        n_test: cfg.n_test,
        normalized_error,
        unnormalized_error,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Write a baseline report as `{stem}.json`.
pub fn write_baseline(
    out_dir: &std::path::Path,
    stem: &str,
    report: &BaselineReport,
) -> Result<std::path::PathBuf> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let path = out_dir.join(format!("{stem}.json"));
    let mut json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Config(format!("serialize baseline: {e}")))?;
    json.push('\n');
    std::fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Run the sweep for `cfg.mode` and persist records under `cfg.out_dir`
/// with the given file stem; returns the records.
pub fn run_and_persist(cfg: &ExperimentConfig, stem: &str) -> Result<Vec<ResultRecord>> {
    let records = match cfg.mode {
        Mode::Quantum => run_quantum_sweep(cfg)?,
        Mode::Classical => run_classical_sweep(cfg)?,
        Mode::LinearBaseline => {
            return Err(Error::Config(
                "linear-baseline mode has no sweep; use run_baseline".into(),
            ))
        }
    };
    write_records(&cfg.out_dir, stem, &records)?;
    Ok(records)
}
