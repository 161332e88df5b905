//! Fixed-step integration of the quantum master equation
//!
//!   dρ/dt = −i[H, ρ] + (γ/2)(2aρa† − a†aρ − ρa†a)
//!
//! with piecewise-constant drives (one Hamiltonian per pixel interval).
//!
//! The right-hand side is applied in the equivalent form
//! ρ̇ = Gρ + ρG† + γ aρa† with G = −iH − (γ/2)a†a. Since H couples Fock
//! levels at most two apart, G is pentadiagonal and one application costs
//! O(N²) instead of the O(N³) of dense products — this is the inner loop
//! of every image evaluation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, FockOperator, ModelParams};

/// One piecewise-constant drive segment.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PumpInterval {
    /// Segment length in units of ħ/γ.
    pub duration: f64,
    /// Single-photon drive amplitude F.
    pub f_drive: f64,
    /// Two-photon drive amplitude P.
    pub p_drive: f64,
    /// Two-photon drive phase Θ.
    pub theta: f64,
    /// Additive detuning shift η for this segment (0 without noise).
    pub delta_shift: f64,
}

/// Piecewise-constant drive schedule over the full evolution time τ.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PumpSchedule {
    intervals: Vec<PumpInterval>,
}

impl PumpSchedule {
    pub fn new(intervals: Vec<PumpInterval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::invalid("schedule must have at least one interval"));
        }
        for (k, iv) in intervals.iter().enumerate() {
            if !(iv.duration > 0.0) {
                return Err(Error::invalid(format!(
                    "interval {k} duration must be > 0, got {}",
                    iv.duration
                )));
            }
            for (name, v) in [
                ("F", iv.f_drive),
                ("P", iv.p_drive),
                ("theta", iv.theta),
                ("delta_shift", iv.delta_shift),
            ] {
                if !v.is_finite() {
                    return Err(Error::invalid(format!("interval {k}: {name} must be finite")));
                }
            }
        }
        Ok(PumpSchedule { intervals })
    }

    /// Constant drive over the whole duration (single interval).
    pub fn constant(duration: f64, f_drive: f64, p_drive: f64, theta: f64) -> Result<Self> {
        Self::new(vec![PumpInterval {
            duration,
            f_drive,
            p_drive,
            theta,
            delta_shift: 0.0,
        }])
    }

    /// Sixteen equal intervals of τ/16 — the image-encoding layout.
    pub fn image_encoding(
        tau: f64,
        f_drive: &[f64; 16],
        p_drive: &[f64; 16],
        theta: &[f64; 16],
        delta_shift: &[f64; 16],
    ) -> Result<Self> {
        let dt = tau / 16.0;
        let intervals = (0..16)
            .map(|i| PumpInterval {
                duration: dt,
                f_drive: f_drive[i],
                p_drive: p_drive[i],
                theta: theta[i],
                delta_shift: delta_shift[i],
            })
            .collect();
        Self::new(intervals)
    }

    pub fn intervals(&self) -> &[PumpInterval] {
        &self.intervals
    }

    pub fn total_duration(&self) -> f64 {
        self.intervals.iter().map(|iv| iv.duration).sum()
    }
}

/// Time-stepping configuration: fixed-step explicit 4th-order Runge–Kutta.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IntegratorConfig {
    /// Step size in units of ħ/γ; must divide every interval duration.
    pub step_size: f64,
}

impl IntegratorConfig {
    /// Default policy: τ/1600, i.e. 100 steps per pixel interval.
    pub fn default_for(params: &ModelParams) -> Self {
        IntegratorConfig {
            step_size: params.tau / 1600.0,
        }
    }

    /// Number of steps covering `duration`, requiring an integer fit to one
    /// part in 1e9.
    pub fn steps_for(&self, duration: f64) -> Result<usize> {
        if !(self.step_size > 0.0) {
            return Err(Error::invalid(format!(
                "step_size must be > 0, got {}",
                self.step_size
            )));
        }
        let ratio = duration / self.step_size;
        let steps = ratio.round();
        if steps < 1.0 || (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::invalid(format!(
                "step_size {} does not divide interval duration {duration}",
                self.step_size
            )));
        }
        Ok(steps as usize)
    }
}

/// Master-equation right-hand side in dense form. This is the readable
/// reference; the integrator uses the banded [`Generator`] and is tested
/// against this function.
pub fn lindblad_rhs(
    rho: &DensityMatrix,
    h: &FockOperator,
    gamma: f64,
) -> Result<DMatrix<Complex64>> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            context: "lindblad_rhs",
            expected: rho.dim(),
            found: h.dim(),
        });
    }
    let dim = rho.dim();
    let a = FockOperator::annihilation(dim).into_entries();
    let adag = a.adjoint();
    let r = rho.entries();
    let hm = h.entries();
    let i = Complex64::new(0.0, 1.0);
    let comm = hm * r - r * hm;
    let a_r_adag = &a * r * &adag;
    let n_op = &adag * &a;
    let anti = &n_op * r + r * &n_op;
    Ok(comm * (-i) + (a_r_adag * Complex64::new(2.0, 0.0) - anti) * Complex64::new(gamma / 2.0, 0.0))
}

/// Pentadiagonal effective generator G = −iH − (γ/2)a†a plus the quantum-jump
/// feed term γ aρa†, stored as bands for O(N²) application.
pub(crate) struct Generator {
    dim: usize,
    /// G[n, n]
    d0: Vec<Complex64>,
    /// G[n, n+1] (= G[n+1, n]; the drive couplings are symmetric before −i)
    d1: Vec<Complex64>,
    /// G[n, n+2]
    d2: Vec<Complex64>,
    /// G[n+2, n]
    dm2: Vec<Complex64>,
    /// √(n+1), used by the jump term
    sq: Vec<f64>,
    gamma: f64,
}

impl Generator {
    pub(crate) fn new(
        params: &ModelParams,
        iv: &PumpInterval,
        dim: usize,
    ) -> Self {
        let mi = Complex64::new(0.0, -1.0);
        let delta = params.delta + iv.delta_shift;
        let mut d0 = Vec::with_capacity(dim);
        for n in 0..dim {
            let nf = n as f64;
            let h_nn = delta * nf + params.alpha * nf * (nf - 1.0);
            d0.push(mi * h_nn + Complex64::new(-params.gamma / 2.0 * nf, 0.0));
        }
        let mut d1 = Vec::with_capacity(dim.saturating_sub(1));
        for n in 0..dim.saturating_sub(1) {
            d1.push(mi * (iv.f_drive * ((n + 1) as f64).sqrt()));
        }
        let phase = Complex64::from_polar(iv.p_drive, iv.theta);
        let mut d2 = Vec::with_capacity(dim.saturating_sub(2));
        let mut dm2 = Vec::with_capacity(dim.saturating_sub(2));
        for n in 0..dim.saturating_sub(2) {
            let amp = (((n + 1) * (n + 2)) as f64).sqrt();
            // H[n, n+2] = P e^{−iΘ} amp, H[n+2, n] = P e^{iΘ} amp.
            d2.push(mi * phase.conj() * amp);
            dm2.push(mi * phase * amp);
        }
        let sq = (0..dim).map(|n| ((n + 1) as f64).sqrt()).collect();
        Generator {
            dim,
            d0,
            d1,
            d2,
            dm2,
            sq,
            gamma: params.gamma,
        }
    }

    /// out = Gρ + ρG† + γ aρa†, column-major slices of length dim².
    pub(crate) fn apply(&self, rho: &[Complex64], out: &mut [Complex64]) {
        let n = self.dim;
        // Gρ: pentadiagonal stencil down each column.
        for j in 0..n {
            let col = &rho[j * n..(j + 1) * n];
            let o = &mut out[j * n..(j + 1) * n];
            for i in 0..n {
                let mut acc = self.d0[i] * col[i];
                if i + 1 < n {
                    acc += self.d1[i] * col[i + 1];
                }
                if i >= 1 {
                    acc += self.d1[i - 1] * col[i - 1];
                }
                if i + 2 < n {
                    acc += self.d2[i] * col[i + 2];
                }
                if i >= 2 {
                    acc += self.dm2[i - 2] * col[i - 2];
                }
                o[i] = acc;
            }
        }
        // ρG†: column j of the output gains conj(G[j,k]) × column k of ρ.
        for j in 0..n {
            for (k, g_jk) in self.row_band(j) {
                let c = g_jk.conj();
                let src = &rho[k * n..(k + 1) * n];
                let dst = &mut out[j * n..(j + 1) * n];
                for i in 0..n {
                    dst[i] += c * src[i];
                }
            }
        }
        // γ aρa†: (i, j) ← γ √((i+1)(j+1)) ρ[i+1, j+1].
        for j in 0..n.saturating_sub(1) {
            let src = &rho[(j + 1) * n..(j + 2) * n];
            let dst = &mut out[j * n..(j + 1) * n];
            let gj = self.gamma * self.sq[j];
            for i in 0..n - 1 {
                dst[i] += Complex64::new(gj * self.sq[i], 0.0) * src[i + 1];
            }
        }
    }

    /// Nonzero entries (k, G[j, k]) in row j.
    fn row_band(&self, j: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let lo = j.saturating_sub(2);
        let hi = (j + 2).min(self.dim - 1);
        (lo..=hi).filter_map(move |k| {
            let v = if k == j {
                self.d0[j]
            } else if k == j + 1 {
                self.d1[j]
            } else if k + 1 == j {
                self.d1[k]
            } else if k == j + 2 {
                self.d2[j]
            } else {
                self.dm2[k]
            };
            Some((k, v))
        })
    }
}

/// Evolve `rho0` through the whole schedule; returns ρ(τ).
///
/// The trace and Hermiticity invariants are enforced by symmetrization after
/// every step and verified at every interval boundary; any non-finite entry
/// aborts with the interval index.
pub fn evolve(
    rho0: &DensityMatrix,
    params: &ModelParams,
    schedule: &PumpSchedule,
    cfg: &IntegratorConfig,
) -> Result<DensityMatrix> {
    evolve_observed(rho0, params, schedule, cfg, |_, _| {})
}

/// [`evolve`] with a callback invoked after each interval (index, state);
/// used by invariant tests and diagnostics.
pub fn evolve_observed(
    rho0: &DensityMatrix,
    params: &ModelParams,
    schedule: &PumpSchedule,
    cfg: &IntegratorConfig,
    mut observer: impl FnMut(usize, &DensityMatrix),
) -> Result<DensityMatrix> {
    params.validate()?;
    let total = schedule.total_duration();
    if (total - params.tau).abs() > 1e-9 * params.tau.max(1.0) {
        return Err(Error::invalid(format!(
            "schedule duration {total} does not match tau {}",
            params.tau
        )));
    }
    let dim = rho0.dim();
    let n2 = dim * dim;
    let mut rho: Vec<Complex64> = rho0.entries().as_slice().to_vec();
    let mut k1 = vec![Complex64::default(); n2];
    let mut k2 = vec![Complex64::default(); n2];
    let mut k3 = vec![Complex64::default(); n2];
    let mut k4 = vec![Complex64::default(); n2];
    let mut tmp = vec![Complex64::default(); n2];

    for (idx, iv) in schedule.intervals().iter().enumerate() {
        let steps = cfg.steps_for(iv.duration)?;
        let dt = iv.duration / steps as f64;
        let gen = Generator::new(params, iv, dim);
        for _ in 0..steps {
            rk4_step(&gen, &mut rho, dt, &mut k1, &mut k2, &mut k3, &mut k4, &mut tmp);
            symmetrize(&mut rho, dim);
        }
        if rho.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NumericalFailure {
                interval: idx,
                detail: "non-finite density-matrix entry".to_string(),
            });
        }
        observer(
            idx,
            &DensityMatrix::from_matrix_unchecked(DMatrix::from_column_slice(dim, dim, &rho)),
        );
    }

    let out = DensityMatrix::from_matrix_unchecked(DMatrix::from_column_slice(dim, dim, &rho));
    let tr = out.trace();
    if (tr - 1.0).abs() > 1e-8 {
        return Err(Error::NumericalFailure {
            interval: schedule.intervals().len() - 1,
            detail: format!("trace drifted to {tr:.12}"),
        });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn rk4_step(
    gen: &Generator,
    rho: &mut [Complex64],
    dt: f64,
    k1: &mut [Complex64],
    k2: &mut [Complex64],
    k3: &mut [Complex64],
    k4: &mut [Complex64],
    tmp: &mut [Complex64],
) {
    let half = dt / 2.0;
    gen.apply(rho, k1);
    for i in 0..rho.len() {
        tmp[i] = rho[i] + k1[i] * half;
    }
    gen.apply(tmp, k2);
    for i in 0..rho.len() {
        tmp[i] = rho[i] + k2[i] * half;
    }
    gen.apply(tmp, k3);
    for i in 0..rho.len() {
        tmp[i] = rho[i] + k3[i] * dt;
    }
    gen.apply(tmp, k4);
    let w = dt / 6.0;
    for i in 0..rho.len() {
        rho[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
    }
}

/// ρ ← (ρ + ρ†)/2 in place (column-major).
fn symmetrize(rho: &mut [Complex64], dim: usize) {
    for j in 0..dim {
        rho[j * dim + j] = Complex64::new(rho[j * dim + j].re, 0.0);
        for i in 0..j {
            let upper = rho[j * dim + i];
            let lower = rho[i * dim + j];
            let avg = (upper + lower.conj()) * 0.5;
            rho[j * dim + i] = avg;
            rho[i * dim + j] = avg.conj();
        }
    }
}
