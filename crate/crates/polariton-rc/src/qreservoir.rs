//! Quantum reservoir pipeline: mask an input signal, encode it as drives
//! under one of four pump schemes, evolve the dissipative Kerr mode, and
//! read out Wigner features.
//!
//! Schemes: SP (single-photon drive only), TP (two-photon drive only),
//! SPTP (both drives from one masked signal), SPTP′ (both drives plus an
//! input-dependent two-photon phase derived from an independent mask).

use nalgebra::DMatrix;
use rand::Rng;

use crate::dataset::InputSignal;
use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, ModelParams};
use crate::lindblad::{evolve, IntegratorConfig, PumpSchedule};
use crate::seeds;
use crate::wigner::{flatten_features, wigner_of, KernelTable};

/// Random 16×16 input mask with entries uniform in [0, W_in_max].
#[derive(Debug, Clone, PartialEq)]
pub struct InputMask {
    w_in: DMatrix<f64>,
    w_in_max: f64,
    /// (master seed, domain, realization) from which the mask regenerates
    /// exactly under [`seeds::GENERATOR_ID`].
    seed: (u64, String, u64),
}

impl InputMask {
    /// Draw a fresh mask from its seeded stream; entries are filled
    /// row-major as `uniform[0,1) × W_in_max`, so scaling W_in_max rescales
    /// every entry exactly.
    pub fn generate(w_in_max: f64, master: u64, domain: &str, realization: u64) -> Result<Self> {
        if !(w_in_max > 0.0) {
            return Err(Error::invalid(format!("W_in_max must be > 0, got {w_in_max}")));
        }
        let mut rng = seeds::rng(master, domain, &[realization]);
        let mut w = DMatrix::zeros(16, 16);
        for i in 0..16 {
            for j in 0..16 {
                w[(i, j)] = rng.gen::<f64>() * w_in_max;
            }
        }
        Ok(InputMask {
            w_in: w,
            w_in_max,
            seed: (master, domain.to_string(), realization),
        })
    }

    /// Wrap an explicit mask matrix (for loading saved masks and tests).
    pub fn from_matrix(w_in: DMatrix<f64>, w_in_max: f64) -> Result<Self> {
        if w_in.nrows() != 16 || w_in.ncols() != 16 {
            return Err(Error::DimensionMismatch {
                context: "InputMask::from_matrix",
                expected: 16,
                found: w_in.nrows().max(w_in.ncols()),
            });
        }
        if w_in.iter().any(|&v| !(0.0..=w_in_max).contains(&v)) {
            return Err(Error::invalid("mask entries must lie in [0, W_in_max]"));
        }
        Ok(InputMask {
            w_in,
            w_in_max,
            seed: (0, "explicit".to_string(), 0),
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w_in
    }

    pub fn w_in_max(&self) -> f64 {
        self.w_in_max
    }

    /// m = W_in · u.
    pub fn mask_signal(&self, u: &[f64; 16]) -> [f64; 16] {
        let mut m = [0.0; 16];
        for i in 0..16 {
            let mut acc = 0.0;
            for j in 0..16 {
                acc += self.w_in[(i, j)] * u[j];
            }
            m[i] = acc;
        }
        m
    }
}

/// Pump-scheme taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeTag {
    Sp,
    Tp,
    Sptp,
    SptpPrime,
}

impl std::fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SchemeTag::Sp => "SP",
            SchemeTag::Tp => "TP",
            SchemeTag::Sptp => "SPTP",
            SchemeTag::SptpPrime => "SPTP'",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for SchemeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sp" => Ok(SchemeTag::Sp),
            "tp" => Ok(SchemeTag::Tp),
            "sptp" => Ok(SchemeTag::Sptp),
            "sptp-prime" | "sptp'" | "sptpprime" => Ok(SchemeTag::SptpPrime),
            other => Err(Error::invalid(format!(
                "unknown scheme {other:?}; expected sp, tp, sptp, or sptp-prime"
            ))),
        }
    }
}

/// Scheme plus its phase-encoding range (used by SPTP′ only).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PumpScheme {
    pub tag: SchemeTag,
    pub theta_max: f64,
}

impl PumpScheme {
    pub fn sp() -> Self {
        PumpScheme {
            tag: SchemeTag::Sp,
            theta_max: 0.0,
        }
    }

    pub fn tp() -> Self {
        PumpScheme {
            tag: SchemeTag::Tp,
            theta_max: 0.0,
        }
    }

    pub fn sptp() -> Self {
        PumpScheme {
            tag: SchemeTag::Sptp,
            theta_max: 0.0,
        }
    }

    /// Default phase range: Θ ∈ [0, π].
    pub fn sptp_prime(theta_max: f64) -> Self {
        PumpScheme {
            tag: SchemeTag::SptpPrime,
            theta_max,
        }
    }

    pub fn uses_phase_mask(&self) -> bool {
        self.tag == SchemeTag::SptpPrime
    }
}

/// Batch min/max rescaling σ: values → [0, 1]; a degenerate batch
/// (max = min) maps everything to ½.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PhaseRescale {
    pub min: f64,
    pub max: f64,
}

impl PhaseRescale {
    pub fn from_batch(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            min = min.min(v);
            max = max.max(v);
        }
        PhaseRescale { min, max }
    }

    pub fn apply(&self, v: f64) -> f64 {
        if !(self.max > self.min) {
            return 0.5;
        }
        (v - self.min) / (self.max - self.min)
    }
}

/// Per-realization mask set: the amplitude mask, plus an independent phase
/// mask when the scheme calls for one.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskSet {
    pub amplitude: InputMask,
    pub phase: Option<InputMask>,
}

impl MaskSet {
    /// Standard derivation: amplitude mask from the "mask" stream, phase
    /// mask (SPTP′ only) from the independent "phase-mask" stream.
    pub fn generate(
        scheme: &PumpScheme,
        w_in_max: f64,
        master: u64,
        realization: u64,
    ) -> Result<Self> {
        let amplitude = InputMask::generate(w_in_max, master, "mask", realization)?;
        let phase = if scheme.uses_phase_mask() {
            Some(InputMask::generate(w_in_max, master, "phase-mask", realization)?)
        } else {
            None
        };
        Ok(MaskSet { amplitude, phase })
    }
}

/// Per-interval detuning shifts η_i uniform in [−δ, δ], one per pixel
/// interval, from a per-image stream. δ = 0 yields exact zeros.
pub fn detuning_shifts(
    delta_strength: f64,
    master: u64,
    realization: u64,
    image_index: u64,
) -> Result<[f64; 16]> {
    if delta_strength < 0.0 {
        return Err(Error::invalid(format!(
            "fluctuation strength must be ≥ 0, got {delta_strength}"
        )));
    }
    let mut out = [0.0; 16];
    if delta_strength == 0.0 {
        return Ok(out);
    }
    let mut rng = seeds::rng(master, "detuning", &[realization, image_index]);
    for v in &mut out {
        *v = rng.gen_range(-delta_strength..=delta_strength);
    }
    Ok(out)
}

/// Encode a masked signal as a 16-interval drive schedule under `scheme`.
///
/// SP: F_i = m_i. TP: P_i = m_i. SPTP: F_i = P_i = m_i. SPTP′ additionally
/// sets Θ_i = theta_max · σ(m′_i) from the phase-masked signal m′ and the
/// batch rescale σ.
pub fn build_schedule(
    m: &[f64; 16],
    scheme: &PumpScheme,
    params: &ModelParams,
    phase: Option<(&[f64; 16], &PhaseRescale)>,
    delta_shifts: &[f64; 16],
) -> Result<PumpSchedule> {
    if scheme.uses_phase_mask() != phase.is_some() {
        return Err(Error::Config(format!(
            "scheme {} {} a phase signal",
            scheme.tag,
            if scheme.uses_phase_mask() {
                "requires"
            } else {
                "does not take"
            }
        )));
    }
    let zero = [0.0; 16];
    let (f_drive, p_drive) = match scheme.tag {
        SchemeTag::Sp => (*m, zero),
        SchemeTag::Tp => (zero, *m),
        SchemeTag::Sptp | SchemeTag::SptpPrime => (*m, *m),
    };
    let mut theta = [0.0; 16];
    if let Some((m_phase, rescale)) = phase {
        for i in 0..16 {
            theta[i] = scheme.theta_max * rescale.apply(m_phase[i]);
        }
    }
    PumpSchedule::image_encoding(params.tau, &f_drive, &p_drive, &theta, delta_shifts)
}

/// Feature vector plus the truncation-leakage diagnostic for one image.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageFeatures {
    pub f: Vec<f64>,
    pub leakage: f64,
}

/// Everything fixed across one realization's batch: physics, scheme, masks,
/// integrator, kernel table, and noise configuration. Shared read-only
/// across parallel image evaluations.
pub struct Evaluator<'a> {
    pub params: ModelParams,
    pub scheme: PumpScheme,
    pub cfg: IntegratorConfig,
    pub kernels: &'a KernelTable,
    pub masks: MaskSet,
    pub rescale: Option<PhaseRescale>,
    pub delta_strength: f64,
    pub master_seed: u64,
    pub realization: u64,
}

impl<'a> Evaluator<'a> {
    /// Compute the batch phase rescale for SPTP′ from every phase-masked
    /// signal in the run (train and test together — σ is unsupervised).
    pub fn batch_rescale(masks: &MaskSet, signals: &[InputSignal]) -> Option<PhaseRescale> {
        let phase = masks.phase.as_ref()?;
        Some(PhaseRescale::from_batch(
            signals
                .iter()
                .flat_map(|s| phase.mask_signal(&s.u).into_iter()),
        ))
    }

    /// vacuum → mask → schedule → evolve → Wigner → flatten.
    pub fn features_for(&self, image_index: u64, signal: &InputSignal) -> Result<ImageFeatures> {
        let dim = self.kernels.dim();
        let m = self.masks.amplitude.mask_signal(&signal.u);
        let phase_signal = self
            .masks
            .phase
            .as_ref()
            .map(|pm| pm.mask_signal(&signal.u));
        let phase = match (&phase_signal, &self.rescale) {
            (Some(sig), Some(rs)) => Some((sig, rs)),
            (None, None) => None,
            _ => {
                return Err(Error::Config(
                    "phase mask and rescale must be configured together".to_string(),
                ))
            }
        };
        let shifts = detuning_shifts(
            self.delta_strength,
            self.master_seed,
            self.realization,
            image_index,
        )?;
        let schedule = build_schedule(&m, &self.scheme, &self.params, phase, &shifts)?;
        let rho0 = DensityMatrix::vacuum(dim)?;
        let rho = evolve(&rho0, &self.params, &schedule, &self.cfg).map_err(|e| {
            Error::ImageEvaluation {
                image_id: image_index as usize,
                source: Box::new(e),
            }
        })?;
        let leakage = rho.leakage();
        let sample = wigner_of(&rho, self.kernels)?;
        Ok(ImageFeatures {
            f: flatten_features(&sample),
            leakage,
        })
    }
}
