//! Classical benchmark reservoir: a square lattice of coupled nonlinear
//! polariton modes obeying the driven-damped discrete nonlinear
//! Schrödinger equation
//!
//!   dψ_n/dt = (W_in · v)_n − i Σ_{m∈ñ} K_{nm} ψ_m − γ ψ_n − i α |ψ_n|² ψ_n
//!
//! with v = [1, u(t)], random symmetric nearest-neighbour couplings K, open
//! boundaries, ψ(0) = 0, and intensity readout f_n = |ψ_n(τ)|².

use num_complex::Complex64;
use rand::Rng;

use crate::dataset::InputSignal;
use crate::error::{Error, Result};
use crate::fock::ModelParams;
use crate::lindblad::IntegratorConfig;
use crate::seeds;

/// Square lattice with random couplings and an N_c×2 input mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    side: usize,
    /// CSR adjacency: neighbours of site n are nbr_idx[nbr_start[n]..nbr_start[n+1]].
    nbr_start: Vec<u32>,
    nbr_idx: Vec<u32>,
    nbr_k: Vec<f64>,
    /// Input mask: column 0 is the constant bias channel, column 1 couples u(t).
    w_in: Vec<[f64; 2]>,
    k_max: f64,
    w_in_max: f64,
}

/// Complex field on the lattice at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    pub psi: Vec<Complex64>,
    pub time: f64,
}

fn site(side: usize, row: usize, col: usize) -> usize {
    row * side + col
}

impl Lattice {
    /// Draw couplings and input mask from seeded streams. Edge values are
    /// assigned in row-major (right, then down) order so the lattice is a
    /// pure function of (seed, side, K_max, W_in_max).
    pub fn generate(
        side: usize,
        k_max: f64,
        w_in_max: f64,
        master: u64,
        realization: u64,
    ) -> Result<Self> {
        if side < 1 {
            return Err(Error::invalid("lattice side must be ≥ 1"));
        }
        if !(k_max >= 0.0) || !(w_in_max > 0.0) {
            return Err(Error::invalid("K_max must be ≥ 0 and W_in_max > 0"));
        }
        let nc = side * side;
        let mut rng = seeds::rng(master, "lattice", &[realization]);

        // Undirected edges in deterministic order; mirrored into both rows.
        let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::with_capacity(4); nc];
        for r in 0..side {
            for c in 0..side {
                let n = site(side, r, c);
                if c + 1 < side {
                    let m = site(side, r, c + 1);
                    let k = rng.gen::<f64>() * k_max;
                    adj[n].push((m as u32, k));
                    adj[m].push((n as u32, k));
                }
                if r + 1 < side {
                    let m = site(side, r + 1, c);
                    let k = rng.gen::<f64>() * k_max;
                    adj[n].push((m as u32, k));
                    adj[m].push((n as u32, k));
                }
            }
        }
        let mut nbr_start = Vec::with_capacity(nc + 1);
        let mut nbr_idx = Vec::new();
        let mut nbr_k = Vec::new();
        nbr_start.push(0u32);
        for mut list in adj {
            list.sort_by_key(|&(m, _)| m);
            for (m, k) in list {
                nbr_idx.push(m);
                nbr_k.push(k);
            }
            nbr_start.push(nbr_idx.len() as u32);
        }

        let mut rng_w = seeds::rng(master, "lattice-input", &[realization]);
        let w_in = (0..nc)
            .map(|_| [rng_w.gen::<f64>() * w_in_max, rng_w.gen::<f64>() * w_in_max])
            .collect();

        Ok(Lattice {
            side,
            nbr_start,
            nbr_idx,
            nbr_k,
            w_in,
            k_max,
            w_in_max,
        })
    }

    /// Build from a mode count, which must be a perfect square.
    pub fn from_modes(
        n_modes: usize,
        k_max: f64,
        w_in_max: f64,
        master: u64,
        realization: u64,
    ) -> Result<Self> {
        let side = (n_modes as f64).sqrt().round() as usize;
        if side * side != n_modes {
            return Err(Error::invalid(format!(
                "lattice size {n_modes} is not a perfect square"
            )));
        }
        Self::generate(side, k_max, w_in_max, master, realization)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn n_modes(&self) -> usize {
        self.side * self.side
    }

    pub fn w_in_max(&self) -> f64 {
        self.w_in_max
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    /// Coupling K_{nm} (0 when not neighbours).
    pub fn coupling(&self, n: usize, m: usize) -> f64 {
        let lo = self.nbr_start[n] as usize;
        let hi = self.nbr_start[n + 1] as usize;
        for k in lo..hi {
            if self.nbr_idx[k] as usize == m {
                return self.nbr_k[k];
            }
        }
        0.0
    }

    pub fn input_row(&self, n: usize) -> [f64; 2] {
        self.w_in[n]
    }

    /// dψ/dt for input vector v = [1, u]; out must have N_c entries.
    pub fn rhs(
        &self,
        psi: &[Complex64],
        v: [f64; 2],
        alpha: f64,
        gamma: f64,
        out: &mut [Complex64],
    ) -> Result<()> {
        let nc = self.n_modes();
        if psi.len() != nc || out.len() != nc {
            return Err(Error::DimensionMismatch {
                context: "Lattice::rhs",
                expected: nc,
                found: psi.len().min(out.len()),
            });
        }
        let mi = Complex64::new(0.0, -1.0);
        for n in 0..nc {
            let lo = self.nbr_start[n] as usize;
            let hi = self.nbr_start[n + 1] as usize;
            let mut coup = Complex64::default();
            for k in lo..hi {
                coup += self.nbr_k[k] * psi[self.nbr_idx[k] as usize];
            }
            let drive = self.w_in[n][0] * v[0] + self.w_in[n][1] * v[1];
            let p = psi[n];
            out[n] = Complex64::new(drive, 0.0) + mi * coup - gamma * p
                + mi * (alpha * p.norm_sqr()) * p;
        }
        Ok(())
    }

    /// Integrate from ψ(0) = 0 through the 16 pixel intervals of the signal
    /// and return the final state. Same fixed-step 4th-order scheme and
    /// step policy as the quantum module.
    pub fn evolve_signal(
        &self,
        signal: &InputSignal,
        params: &ModelParams,
        cfg: &IntegratorConfig,
    ) -> Result<LatticeState> {
        self.evolve_from(
            vec![Complex64::default(); self.n_modes()],
            signal,
            params,
            cfg,
        )
    }

    /// As [`Lattice::evolve_signal`] with an explicit initial field.
    pub fn evolve_from(
        &self,
        psi0: Vec<Complex64>,
        signal: &InputSignal,
        params: &ModelParams,
        cfg: &IntegratorConfig,
    ) -> Result<LatticeState> {
        params.validate()?;
        let nc = self.n_modes();
        if psi0.len() != nc {
            return Err(Error::DimensionMismatch {
                context: "Lattice::evolve_from",
                expected: nc,
                found: psi0.len(),
            });
        }
        let mut psi = psi0;
        let mut k1 = vec![Complex64::default(); nc];
        let mut k2 = vec![Complex64::default(); nc];
        let mut k3 = vec![Complex64::default(); nc];
        let mut k4 = vec![Complex64::default(); nc];
        let mut tmp = vec![Complex64::default(); nc];

        let interval = params.tau / 16.0;
        let steps = cfg.steps_for(interval)?;
        let dt = interval / steps as f64;
        let mut time = 0.0;
        for (idx, &u) in signal.u.iter().enumerate() {
            let v = [1.0, u];
            for _ in 0..steps {
                self.rhs(&psi, v, params.alpha, params.gamma, &mut k1)?;
                for i in 0..nc {
                    tmp[i] = psi[i] + k1[i] * (dt / 2.0);
                }
                self.rhs(&tmp, v, params.alpha, params.gamma, &mut k2)?;
                for i in 0..nc {
                    tmp[i] = psi[i] + k2[i] * (dt / 2.0);
                }
                self.rhs(&tmp, v, params.alpha, params.gamma, &mut k3)?;
                for i in 0..nc {
                    tmp[i] = psi[i] + k3[i] * dt;
                }
                self.rhs(&tmp, v, params.alpha, params.gamma, &mut k4)?;
                for i in 0..nc {
                    psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
                }
            }
            time += interval;
            if psi.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::NumericalFailure {
                    interval: idx,
                    detail: "non-finite lattice amplitude".to_string(),
                });
            }
        }
        Ok(LatticeState { psi, time })
    }

    /// Intensity features f_n = |ψ_n(τ)|².
    pub fn evaluate_image(
        &self,
        signal: &InputSignal,
        params: &ModelParams,
        cfg: &IntegratorConfig,
    ) -> Result<Vec<f64>> {
        let state = self.evolve_signal(signal, params, cfg)?;
        Ok(state.psi.iter().map(|p| p.norm_sqr()).collect())
    }
}
