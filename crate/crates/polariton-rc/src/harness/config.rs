//! Experiment configuration: one declarative structure covering every sweep,
//! loadable from TOML, overridable from CLI flags, and hashable into a
//! canonical identity that excludes host details (paths, thread count).

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fock::ModelParams;
use crate::lindblad::IntegratorConfig;
use crate::qreservoir::SchemeTag;
use crate::wigner::PhaseSpaceGrid;

/// Which system a sweep exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Quantum,
    Classical,
    LinearBaseline,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Quantum => "quantum",
            Mode::Classical => "classical",
            Mode::LinearBaseline => "linear-baseline",
        })
    }
}

/// Input-weight bound per pump scheme, in units of γ, fixed by a grid search
/// over {0.5, 1, 2, 4, 8}·γ at N = 10, 1000 train / 500 test, 3 mask
/// realizations (see README).
pub fn default_w_in_max(scheme: SchemeTag, gamma: f64) -> f64 {
    let factor = match scheme {
        SchemeTag::Sp => 2.0,
        SchemeTag::Tp => 2.0,
        SchemeTag::Sptp => 2.0,
        SchemeTag::SptpPrime => 1.0,
    };
    factor * gamma
}

/// Classical input bound, same grid search protocol.
pub const CLASSICAL_W_IN_FACTOR: f64 = 8.0;

/// All knobs of one experiment. Fields that identify the experiment are
/// mirrored into [`CanonicalConfig`]; `data_dir`, `out_dir` and `threads`
/// describe the host run and never affect results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    /// Pump scheme (quantum mode only).
    pub scheme: SchemeTag,
    /// Reservoir sizes: Fock dimensions N (quantum) or mode counts N_c
    /// (classical, perfect squares).
    pub sizes: Vec<usize>,
    pub realizations: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub master_seed: u64,
    pub delta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub tau: f64,
    /// Input-weight bound; `None` selects the per-scheme default.
    pub w_in_max: Option<f64>,
    /// Phase-encoding range for SPTP′.
    pub theta_max: f64,
    /// Detuning-fluctuation strength δ (0 disables noise).
    pub detuning: f64,
    /// Classical coupling bound K_max; `None` selects γ.
    pub k_max: Option<f64>,
    pub grid_points: usize,
    pub grid_half_range: f64,
    pub steps_per_interval: usize,
    /// Ridge coefficient; `None` selects the trace-scaled default.
    pub beta: Option<f64>,
    pub data_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// Worker threads; 0 keeps the global default.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mode: Mode::Quantum,
            scheme: SchemeTag::SptpPrime,
            sizes: vec![4, 8, 16],
            realizations: 10,
            n_train: 4000,
            n_test: 1000,
            master_seed: 7,
            delta: 0.1,
            alpha: 0.1,
            gamma: 1.0,
            tau: 1.2,
            w_in_max: None,
            theta_max: PI,
            detuning: 0.0,
            k_max: None,
            grid_points: 20,
            grid_half_range: 5.0,
            steps_per_interval: 100,
            beta: None,
            data_dir: None,
            out_dir: PathBuf::from("out"),
            threads: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::invalid("sweep size list must be non-empty"));
        }
        if self.sizes.iter().any(|&s| s < 1) {
            return Err(Error::invalid("sweep sizes must be ≥ 1"));
        }
        if self.realizations < 1 {
            return Err(Error::invalid("realizations must be ≥ 1"));
        }
        if self.n_train < 1 || self.n_test < 1 {
            return Err(Error::invalid("train and test sizes must be ≥ 1"));
        }
        if self.grid_points < 2 || !(self.grid_half_range > 0.0) {
            return Err(Error::invalid("phase-space grid must have ≥ 2 points and positive range"));
        }
        if self.steps_per_interval < 1 {
            return Err(Error::invalid("steps_per_interval must be ≥ 1"));
        }
        if let Some(w) = self.w_in_max {
            if !(w > 0.0) {
                return Err(Error::invalid("w_in_max must be > 0"));
            }
        }
        if let Some(k) = self.k_max {
            if !(k >= 0.0) {
                return Err(Error::invalid("k_max must be ≥ 0"));
            }
        }
        if !(self.theta_max >= 0.0) || !(self.detuning >= 0.0) {
            return Err(Error::invalid("theta_max and detuning must be ≥ 0"));
        }
        self.model_params().validate()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = toml::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("serialize config: {e}")))?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            delta: self.delta,
            alpha: self.alpha,
            gamma: self.gamma,
            tau: self.tau,
        }
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig {
            step_size: self.tau / 16.0 / self.steps_per_interval as f64,
        }
    }

    pub fn phase_grid(&self) -> Result<PhaseSpaceGrid> {
        PhaseSpaceGrid::new(
            self.grid_points,
            self.grid_points,
            self.grid_half_range,
            self.grid_half_range,
        )
    }

    pub fn effective_w_in_max(&self) -> f64 {
        self.w_in_max.unwrap_or_else(|| match self.mode {
            Mode::Classical => CLASSICAL_W_IN_FACTOR * self.gamma,
            _ => default_w_in_max(self.scheme, self.gamma),
        })
    }

    pub fn effective_k_max(&self) -> f64 {
        self.k_max.unwrap_or(self.gamma)
    }

    pub fn mnist_dir(&self) -> PathBuf {
        self.data_dir
            .clone()
            .unwrap_or_else(crate::dataset::default_mnist_dir)
    }

    /// The experiment-identifying view stored in result records.
    pub fn canonical(&self) -> CanonicalConfig {
        CanonicalConfig {
            mode: self.mode,
            scheme: (self.mode == Mode::Quantum).then_some(self.scheme),
            sizes: self.sizes.clone(),
            realizations: self.realizations,
            n_train: self.n_train,
            n_test: self.n_test,
            master_seed: self.master_seed,
            delta: self.delta,
            alpha: self.alpha,
            gamma: self.gamma,
            tau: self.tau,
            w_in_max: self.effective_w_in_max(),
            theta_max: self.theta_max,
            detuning: self.detuning,
            k_max: (self.mode == Mode::Classical).then(|| self.effective_k_max()),
            grid_points: self.grid_points,
            grid_half_range: self.grid_half_range,
            steps_per_interval: self.steps_per_interval,
            beta: self.beta,
        }
    }

    /// SHA-256 of the canonical serialized config.
    pub fn config_hash(&self) -> String {
        self.canonical().hash()
    }
}

/// Result-identity view of a config: physics, protocol and seed fields only,
/// with scheme defaults resolved. Serialized into every record; its hash
/// names the experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalConfig {
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeTag>,
    pub sizes: Vec<usize>,
    pub realizations: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub master_seed: u64,
    pub delta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub tau: f64,
    pub w_in_max: f64,
    pub theta_max: f64,
    pub detuning: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
    pub grid_points: usize,
    pub grid_half_range: f64,
    pub steps_per_interval: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl CanonicalConfig {
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("canonical config serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest {
            hex.push_str(&format!("{b:02x}"));
        }
        hex
    }
}
