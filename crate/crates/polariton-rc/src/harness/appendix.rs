//! Robustness scans for the quantum reservoir at fixed size: input-weight
//! amplitude, Kerr strength (with a fixed mask), and detuning fluctuations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::{CanonicalConfig, ExperimentConfig, Mode};
use crate::harness::sweeps::{prepare_dataset, quantum_sweep_on, with_pool, PreparedData};
use crate::qreservoir::SchemeTag;

/// One setting of the scanned parameter with its aggregated errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub value: f64,
    pub best_error: f64,
    pub mean_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetuningPair {
    /// Fluctuation strength δ of the noisy run.
    pub delta: f64,
    pub clean_mean_error: f64,
    pub noisy_mean_error: f64,
}

/// Scan grids; defaults follow the calibration grid for W_in_max and a
/// factor-of-two ladder around the nominal Kerr strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixGrids {
    pub w_in_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub detuning: f64,
}

impl AppendixGrids {
    pub fn default_for(gamma: f64) -> Self {
        AppendixGrids {
            w_in_values: [0.5, 1.0, 2.0, 4.0, 8.0].iter().map(|f| f * gamma).collect(),
            alpha_values: vec![0.025, 0.05, 0.1, 0.2],
            detuning: 0.1 * gamma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub config_hash: String,
    pub config: CanonicalConfig,
    pub grids: AppendixGrids,
    /// Input-amplitude scan, all realizations per point.
    pub w_in_scan: Vec<ScanPoint>,
    /// Kerr scan with the realization-0 mask held fixed.
    pub alpha_scan: Vec<ScanPoint>,
    pub detuning_pair: DetuningPair,
}

/// Run the three scans. The config must select the SP scheme; the scanned
/// size is `cfg.sizes[0]` (nominally 10).
pub fn run_appendix_b(cfg: &ExperimentConfig, grids: &AppendixGrids) -> Result<AppendixReport> {
    cfg.validate()?;
    if cfg.mode != Mode::Quantum || cfg.scheme != SchemeTag::Sp {
        return Err(Error::Config(
            "appendix scans use mode = \"quantum\" with the SP scheme".into(),
        ));
    }
    if grids.w_in_values.is_empty() || grids.alpha_values.is_empty() {
        return Err(Error::invalid("scan grids must be non-empty"));
    }
    if !(grids.detuning > 0.0) {
        return Err(Error::invalid("detuning scan strength must be > 0"));
    }
    let mut base = cfg.clone();
    base.sizes.truncate(1);
    base.detuning = 0.0;
    let data = prepare_dataset(&base)?;
    with_pool(cfg.threads, || scans_on(&base, grids, &data))?
}

fn point(value: f64, cfg: &ExperimentConfig, data: &PreparedData) -> Result<ScanPoint> {
    let recs = quantum_sweep_on(cfg, data)?;
    let rec = &recs[0];
    Ok(ScanPoint {
        value,
        best_error: rec.best_error,
        mean_error: rec.mean_error,
    })
}

fn scans_on(
    base: &ExperimentConfig,
    grids: &AppendixGrids,
    data: &PreparedData,
) -> Result<AppendixReport> {
    let mut w_in_scan = Vec::with_capacity(grids.w_in_values.len());
    for &w in &grids.w_in_values {
        let mut c = base.clone();
        c.w_in_max = Some(w);
        w_in_scan.push(point(w, &c, data)?);
    }

    // Fixed mask: a single realization (index 0) so only α varies.
    let mut alpha_scan = Vec::with_capacity(grids.alpha_values.len());
    for &a in &grids.alpha_values {
        let mut c = base.clone();
        c.alpha = a;
        c.realizations = 1;
        alpha_scan.push(point(a, &c, data)?);
    }

    let clean = point(0.0, base, data)?;
    let mut noisy_cfg = base.clone();
    noisy_cfg.detuning = grids.detuning;
    let noisy = point(grids.detuning, &noisy_cfg, data)?;

    Ok(AppendixReport {
        config_hash: base.config_hash(),
        config: base.canonical(),
        grids: grids.clone(),
        w_in_scan,
        alpha_scan,
        detuning_pair: DetuningPair {
            delta: grids.detuning,
            clean_mean_error: clean.mean_error,
            noisy_mean_error: noisy.mean_error,
        },
    })
}

impl AppendixReport {
    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("serialize appendix report: {e}")))?;
        json.push('\n');
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            file: path.display().to_string(),
            offset: 0,
            detail: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_and_grid_preconditions_are_enforced() {
        let mut cfg = ExperimentConfig::default();
        cfg.scheme = SchemeTag::Sp;
        cfg.sizes = vec![4];
        let grids = AppendixGrids::default_for(1.0);

        let mut wrong_scheme = cfg.clone();
        wrong_scheme.scheme = SchemeTag::Tp;
        assert!(run_appendix_b(&wrong_scheme, &grids).is_err());

        let mut empty = grids.clone();
        empty.w_in_values.clear();
        assert!(run_appendix_b(&cfg, &empty).is_err());

        let mut no_noise = grids.clone();
        no_noise.detuning = 0.0;
        assert!(run_appendix_b(&cfg, &no_noise).is_err());
    }

    #[test]
    fn default_grids_follow_gamma() {
        let g = AppendixGrids::default_for(2.0);
        assert_eq!(g.w_in_values, vec![1.0, 2.0, 4.0, 8.0, 16.0]);
        assert_eq!(g.detuning, 0.2);
    }
}
