//! Sweep results: one record per reservoir size, serialized as JSON plus an
//! aggregate CSV. Canonical outputs are pure functions of (config, seeds);
//! wall-clock time is kept out of them and written to a separate meta file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::{CanonicalConfig, Mode};
use crate::qreservoir::SchemeTag;
use crate::seeds;

/// Everything needed to regenerate the random streams of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedLedger {
    /// Identifier of the derivation scheme (hash + stream cipher).
    pub generator: String,
    pub master_seed: u64,
    /// Domain strings consumed by this sweep, in derivation order.
    pub domains: Vec<String>,
    /// Realization indices fed to the per-realization domains.
    pub realization_indices: Vec<u64>,
}

impl SeedLedger {
    pub fn new(master_seed: u64, domains: &[&str], realizations: u64) -> Self {
        SeedLedger {
            generator: seeds::GENERATOR_ID.to_string(),
            master_seed,
            domains: domains.iter().map(|d| d.to_string()).collect(),
            realization_indices: (0..realizations).collect(),
        }
    }
}

/// Outcome of one mask/lattice realization at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationOutcome {
    pub realization: u64,
    /// Test-set misclassification rate.
    pub error_rate: f64,
    pub train_error_rate: f64,
    /// Mean/max truncation leakage over all evaluated images (quantum only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_leakage: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_leakage: Option<f64>,
}

/// Results for one reservoir size across all realizations.
///
/// Equality compares canonical content only: `wall_clock_seconds` is a
/// diagnostic, excluded both from serialization and from `==`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRecord {
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeTag>,
    /// Fock dimension N (quantum) or lattice modes N_c (classical).
    pub size: usize,
    pub config_hash: String,
    pub config: CanonicalConfig,
    pub seed_ledger: SeedLedger,
    pub realizations: Vec<RealizationOutcome>,
    pub best_error: f64,
    pub mean_error: f64,
    /// Run duration; excluded from serialized output so that canonical
    /// files are byte-reproducible.
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

impl PartialEq for ResultRecord {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode
            && self.scheme == other.scheme
            && self.size == other.size
            && self.config_hash == other.config_hash
            && self.config == other.config
            && self.seed_ledger == other.seed_ledger
            && self.realizations == other.realizations
            && self.best_error == other.best_error
            && self.mean_error == other.mean_error
    }
}

impl ResultRecord {
    /// Aggregate per-realization outcomes; errors must land in [0,1].
    pub fn from_outcomes(
        mode: Mode,
        scheme: Option<SchemeTag>,
        size: usize,
        config: CanonicalConfig,
        seed_ledger: SeedLedger,
        outcomes: Vec<RealizationOutcome>,
        wall_clock_seconds: f64,
    ) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::invalid("record needs at least one realization"));
        }
        if outcomes
            .iter()
            .any(|o| !(0.0..=1.0).contains(&o.error_rate) || !(0.0..=1.0).contains(&o.train_error_rate))
        {
            return Err(Error::invalid("error rates must lie in [0, 1]"));
        }
        let best_error = outcomes
            .iter()
            .map(|o| o.error_rate)
            .fold(f64::INFINITY, f64::min);
        let mean_error =
            outcomes.iter().map(|o| o.error_rate).sum::<f64>() / outcomes.len() as f64;
        Ok(ResultRecord {
            mode,
            scheme,
            size,
            config_hash: config.hash(),
            config,
            seed_ledger,
            realizations: outcomes,
            best_error,
            mean_error,
            wall_clock_seconds,
        })
    }
}

/// Serialize records to `{stem}.json` (pretty, trailing newline) and
/// `{stem}.csv` (columns `size,realization,error`); wall-clock totals go to
/// `{stem}.meta.json`. Returns the two canonical paths.
pub fn write_records(
    out_dir: &Path,
    stem: &str,
    records: &[ResultRecord],
) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let json_path = out_dir.join(format!("{stem}.json"));
    let csv_path = out_dir.join(format!("{stem}.csv"));
    let meta_path = out_dir.join(format!("{stem}.meta.json"));

    let mut json = serde_json::to_string_pretty(records)
        .map_err(|e| Error::Config(format!("serialize records: {e}")))?;
    json.push('\n');
    std::fs::write(&json_path, json).map_err(|e| Error::io(&json_path, e))?;

    let mut csv = String::from("size,realization,error\n");
    for rec in records {
        for o in &rec.realizations {
            csv.push_str(&format!("{},{},{}\n", rec.size, o.realization, o.error_rate));
        }
    }
    std::fs::write(&csv_path, csv).map_err(|e| Error::io(&csv_path, e))?;

    let meta = serde_json::json!({
        "wall_clock_seconds": records.iter().map(|r| r.wall_clock_seconds).collect::<Vec<_>>(),
        "total_wall_clock_seconds": records.iter().map(|r| r.wall_clock_seconds).sum::<f64>(),
    });
    std::fs::write(&meta_path, format!("{meta:#}\n")).map_err(|e| Error::io(&meta_path, e))?;
    Ok((json_path, csv_path))
}

/// Load records back from a JSON file written by [`write_records`].
pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        file: path.display().to_string(),
        offset: 0,
        detail: e.to_string(),
    })
}
