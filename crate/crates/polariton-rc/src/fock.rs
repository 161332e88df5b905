//! Truncated-Fock-space operator algebra and quantum states of a single
//! bosonic mode.
//!
//! The mode is represented on the hard-truncated basis {|0⟩, …, |N−1⟩}.
//! Units: ħ = 1 and the dissipation rate γ = 1 set the energy and time
//! scales, so all model parameters are dimensionless ratios.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical parameters of the driven dissipative Kerr mode, in units of γ.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModelParams {
    /// Detuning Δ between mode energy and pump frequency (rotating frame).
    pub delta: f64,
    /// Kerr interaction strength α.
    pub alpha: f64,
    /// Dissipation rate γ (1 by unit convention; kept explicit for sweeps).
    pub gamma: f64,
    /// Total evolution time τ per image, in units of ħ/γ.
    pub tau: f64,
}

impl Default for ModelParams {
    /// Standard working point: Δ/γ = 0.1, α/γ = 0.1, γτ/ħ = 1.2.
    fn default() -> Self {
        ModelParams {
            delta: 0.1,
            alpha: 0.1,
            gamma: 1.0,
            tau: 1.2,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return Err(Error::invalid(format!("gamma must be ≥ 0, got {}", self.gamma)));
        }
        if !(self.tau > 0.0) {
            return Err(Error::invalid(format!("tau must be > 0, got {}", self.tau)));
        }
        for (name, v) in [("delta", self.delta), ("alpha", self.alpha)] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Dense operator on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    dim: usize,
    entries: DMatrix<Complex64>,
}

impl FockOperator {
    /// Annihilation operator â: a[n−1, n] = √n.
    pub fn annihilation(dim: usize) -> Self {
        let mut a = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        FockOperator { dim, entries: a }
    }

    /// Creation operator â† (conjugate transpose of â).
    pub fn creation(dim: usize) -> Self {
        let a = Self::annihilation(dim);
        FockOperator {
            dim,
            entries: a.entries.adjoint(),
        }
    }

    /// Number operator â†â = diag(0, 1, …, dim−1).
    pub fn number(dim: usize) -> Self {
        let mut n = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            n[(k, k)] = Complex64::new(k as f64, 0.0);
        }
        FockOperator { dim, entries: n }
    }

    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                context: "FockOperator::from_matrix",
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        Ok(FockOperator {
            dim: entries.nrows(),
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    /// Max-norm deviation from Hermiticity, ‖A − A†‖_max.
    pub fn hermiticity_error(&self) -> f64 {
        let adj = self.entries.adjoint();
        (&self.entries - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Rotating-frame Hamiltonian
/// H = Δ a†a + α a†a†aa + F(a† + a) + P(e^{iΘ} a†a† + e^{−iΘ} aa).
///
/// The Kerr term a†a†aa equals n̂(n̂−1) on the number basis, so H is
/// pentadiagonal: diagonal from Δ and α, first off-diagonals from the
/// single-photon drive F, second off-diagonals from the two-photon drive P
/// with phase Θ.
pub fn build_hamiltonian(
    params: &ModelParams,
    f_drive: f64,
    p_drive: f64,
    theta: f64,
    dim: usize,
) -> Result<FockOperator> {
    if dim < 2 {
        return Err(Error::invalid(format!("hamiltonian dim must be ≥ 2, got {dim}")));
    }
    for (name, v) in [("F", f_drive), ("P", p_drive), ("theta", theta)] {
        if !v.is_finite() {
            return Err(Error::invalid(format!("drive {name} must be finite, got {v}")));
        }
    }
    params.validate()?;

    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..dim {
        let nf = n as f64;
        h[(n, n)] = Complex64::new(params.delta * nf + params.alpha * nf * (nf - 1.0), 0.0);
    }
    for n in 0..dim - 1 {
        let c = Complex64::new(f_drive * ((n + 1) as f64).sqrt(), 0.0);
        h[(n, n + 1)] = c;
        h[(n + 1, n)] = c;
    }
    if dim >= 2 {
        let phase = Complex64::from_polar(p_drive, theta);
        for n in 0..dim - 2 {
            let amp = (((n + 1) * (n + 2)) as f64).sqrt();
            // ⟨n+2| e^{iΘ} a†a† |n⟩ and ⟨n| e^{−iΘ} aa |n+2⟩.
            h[(n + 2, n)] = phase * amp;
            h[(n, n + 2)] = phase.conj() * amp;
        }
    }
    Ok(FockOperator { dim, entries: h })
}

/// Density matrix of the truncated mode: Hermitian, unit trace, positive
/// semidefinite up to numerical tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Vacuum state |0⟩⟨0|.
    pub fn vacuum(dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::invalid(format!("state dim must be ≥ 1, got {dim}")));
        }
        let mut m = DMatrix::zeros(dim, dim);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { dim, entries: m })
    }

    /// Pure Fock state |n⟩⟨n|.
    pub fn fock_state(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::invalid(format!("fock level {n} outside dim {dim}")));
        }
        let mut m = DMatrix::zeros(dim, dim);
        m[(n, n)] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { dim, entries: m })
    }

    /// Truncated coherent state |β⟩⟨β| with c_n = e^{−|β|²/2} βⁿ/√n!,
    /// renormalized to unit trace on the truncated basis.
    pub fn coherent(dim: usize, beta: Complex64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::invalid("state dim must be ≥ 1".to_string()));
        }
        let mut c = vec![Complex64::default(); dim];
        c[0] = Complex64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
        for n in 1..dim {
            c[n] = c[n - 1] * beta / (n as f64).sqrt();
        }
        let norm: f64 = c.iter().map(|x| x.norm_sqr()).sum();
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = c[i] * c[j].conj() / norm;
            }
        }
        Ok(DensityMatrix { dim, entries: m })
    }

    /// Wrap a raw matrix, enforcing Hermiticity and unit trace to 1e−12.
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                context: "DensityMatrix::from_matrix",
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        let rho = DensityMatrix {
            dim: entries.nrows(),
            entries,
        };
        if rho.hermiticity_error() > 1e-12 {
            return Err(Error::invalid(format!(
                "matrix is not Hermitian: ‖ρ−ρ†‖_max = {:.3e}",
                rho.hermiticity_error()
            )));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("trace must be 1, got {tr:.15}")));
        }
        Ok(rho)
    }

    /// Wrap a raw matrix without validation (used by the integrator, which
    /// maintains the invariants itself and checks them at readout time).
    pub(crate) fn from_matrix_unchecked(entries: DMatrix<Complex64>) -> Self {
        DensityMatrix {
            dim: entries.nrows(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[(i, i)].re).sum()
    }

    /// Tr ρ², real for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.entries
            .iter()
            .map(|c| c.norm_sqr())
            .sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let adj = self.entries.adjoint();
        (&self.entries - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue, via the real symmetric embedding
    /// [[Re ρ, −Im ρ], [Im ρ, Re ρ]] whose spectrum doubles that of ρ.
    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.dim;
        let mut real = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let c = self.entries[(i, j)];
                real[(i, j)] = c.re;
                real[(n + i, n + j)] = c.re;
                real[(i, n + j)] = -c.im;
                real[(n + i, j)] = c.im;
            }
        }
        real.symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Mean photon number ⟨a†a⟩ = Σ_n n ρ_nn.
    pub fn mean_occupation(&self) -> f64 {
        (0..self.dim)
            .map(|n| n as f64 * self.entries[(n, n)].re)
            .sum()
    }

    /// Population of the top two Fock levels — the truncation-leakage
    /// diagnostic. A run is trustworthy when this stays ≤ 1e−3.
    pub fn leakage(&self) -> f64 {
        let d = self.dim;
        if d >= 2 {
            self.entries[(d - 1, d - 1)].re + self.entries[(d - 2, d - 2)].re
        } else {
            self.entries[(d - 1, d - 1)].re
        }
    }

    /// Expectation value ⟨a⟩ = Tr(a ρ) = Σ_n √(n+1) ρ_{n+1,n}.
    pub fn mean_annihilation(&self) -> Complex64 {
        (0..self.dim.saturating_sub(1))
            .map(|n| ((n + 1) as f64).sqrt() * self.entries[(n + 1, n)])
            .sum()
    }
}

/// Tr(a†a ρ) as a free function mirroring the state method.
pub fn mean_occupation(rho: &DensityMatrix) -> f64 {
    rho.mean_occupation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn annihilation_entries_are_sqrt_n() {
        let a = FockOperator::annihilation(5);
        for n in 1..5 {
            assert_abs_diff_eq!(a.entries()[(n - 1, n)].re, (n as f64).sqrt(), epsilon = 0.0);
        }
        let nonzero = a.entries().iter().filter(|c| c.norm() > 0.0).count();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn creation_is_adjoint_of_annihilation() {
        let a = FockOperator::annihilation(6);
        let adag = FockOperator::creation(6);
        assert_eq!(a.entries().adjoint(), *adag.entries());
    }

    #[test]
    fn number_operator_is_adag_a() {
        // a†a reproduces diag(0..dim−1) up to the rounding of √n·√n.
        let a = FockOperator::annihilation(7);
        let adag = FockOperator::creation(7);
        let n = adag.entries() * a.entries();
        let diff = (n - FockOperator::number(7).entries())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-14, "max deviation {diff:.3e}");
    }

    #[test]
    fn commutator_is_identity_below_truncation() {
        // [a, a†] = 1 except in the last diagonal entry, which the hard
        // truncation corrupts to −(dim−1).
        for dim in [2, 4, 16] {
            let a = FockOperator::annihilation(dim);
            let adag = FockOperator::creation(dim);
            let comm = a.entries() * adag.entries() - adag.entries() * a.entries();
            for i in 0..dim - 1 {
                assert_abs_diff_eq!(comm[(i, i)].re, 1.0, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(comm[(dim - 1, dim - 1)].re, -((dim - 1) as f64), epsilon = 1e-12);
        }
    }

    #[test]
    fn hamiltonian_all_couplings_off_is_zero() {
        let p = ModelParams {
            delta: 0.0,
            alpha: 0.0,
            gamma: 1.0,
            tau: 1.2,
        };
        let h = build_hamiltonian(&p, 0.0, 0.0, 0.0, 4).unwrap();
        assert!(h.entries().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn hamiltonian_pure_detuning_is_number_operator() {
        let p = ModelParams {
            delta: 1.0,
            alpha: 0.0,
            gamma: 1.0,
            tau: 1.2,
        };
        let h = build_hamiltonian(&p, 0.0, 0.0, 0.0, 3).unwrap();
        assert_eq!(*h.entries(), *FockOperator::number(3).entries());
    }

    #[test]
    fn hamiltonian_matches_explicit_ladder_construction() {
        // Independent element-by-element assembly from the √n ladder entries.
        let p = ModelParams {
            delta: 0.1,
            alpha: 0.1,
            gamma: 1.0,
            tau: 1.2,
        };
        let (f, pp, th, dim) = (0.5, 0.3, std::f64::consts::FRAC_PI_4, 8);
        let h = build_hamiltonian(&p, f, pp, th, dim).unwrap();

        let a = FockOperator::annihilation(dim).into_entries();
        let adag = a.adjoint();
        let phase = Complex64::from_polar(1.0, th);
        let expected = &adag * &a * Complex64::new(p.delta, 0.0)
            + &adag * &adag * &a * &a * Complex64::new(p.alpha, 0.0)
            + (&adag + &a) * Complex64::new(f, 0.0)
            + (&adag * &adag * phase + &a * &a * phase.conj()) * Complex64::new(pp, 0.0);
        let diff = (h.entries() - expected).iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(diff <= 1e-12, "max deviation {diff:.3e}");
    }

    #[test]
    fn hamiltonian_is_hermitian_and_linear_in_drives() {
        let p = ModelParams::default();
        let h = build_hamiltonian(&p, 0.7, 0.4, 1.1, 10).unwrap();
        assert!(h.hermiticity_error() <= 1e-12);

        // Linearity in F and P at fixed Θ.
        let h0 = build_hamiltonian(&p, 0.0, 0.4, 1.1, 10).unwrap();
        let hf = build_hamiltonian(&p, 1.4, 0.4, 1.1, 10).unwrap();
        let mid = (h0.entries() + hf.entries()) * Complex64::new(0.5, 0.0);
        let diff = (h.entries() - mid).iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(diff <= 1e-12);
    }

    #[test]
    fn hamiltonian_rejects_bad_inputs() {
        let p = ModelParams::default();
        assert!(build_hamiltonian(&p, f64::NAN, 0.0, 0.0, 4).is_err());
        assert!(build_hamiltonian(&p, 0.0, 0.0, 0.0, 1).is_err());
    }

    #[test]
    fn vacuum_state_basics() {
        let v2 = DensityMatrix::vacuum(2).unwrap();
        assert_eq!(v2.entries()[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(v2.entries()[(1, 1)], Complex64::new(0.0, 0.0));
        let v1 = DensityMatrix::vacuum(1).unwrap();
        assert_eq!(v1.entries()[(0, 0)], Complex64::new(1.0, 0.0));
        assert_abs_diff_eq!(DensityMatrix::vacuum(16).unwrap().trace(), 1.0, epsilon = 0.0);
        assert!(DensityMatrix::vacuum(0).is_err());
    }

    #[test]
    fn mean_occupation_on_basis_states() {
        assert_abs_diff_eq!(DensityMatrix::vacuum(8).unwrap().mean_occupation(), 0.0);
        let one = DensityMatrix::fock_state(8, 1).unwrap();
        assert_abs_diff_eq!(one.mean_occupation(), 1.0);
    }

    #[test]
    fn coherent_state_occupation_near_beta_squared() {
        let beta = Complex64::new(0.6, -0.4);
        let rho = DensityMatrix::coherent(24, beta).unwrap();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.mean_occupation(), beta.norm_sqr(), epsilon = 1e-9);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            rho.mean_annihilation().re,
            beta.re,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(rho.mean_annihilation().im, beta.im, epsilon = 1e-9);
    }

    #[test]
    fn min_eigenvalue_via_real_embedding() {
        // diag(0.7, 0.3) mixed by an off-diagonal phase keeps eigenvalues
        // 0.5 ± sqrt(0.04 + 0.09): check against the closed form.
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = Complex64::new(0.7, 0.0);
        m[(1, 1)] = Complex64::new(0.3, 0.0);
        m[(0, 1)] = Complex64::new(0.0, 0.3);
        m[(1, 0)] = Complex64::new(0.0, -0.3);
        let rho = DensityMatrix::from_matrix(m).unwrap();
        let expect = 0.5 - (0.04f64 + 0.09).sqrt();
        assert_abs_diff_eq!(rho.min_eigenvalue(), expect, epsilon = 1e-12);
    }

    #[test]
    fn from_matrix_rejects_non_hermitian_and_bad_trace() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(0, 1)] = Complex64::new(0.5, 0.0);
        assert!(DensityMatrix::from_matrix(m).is_err());

        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = Complex64::new(0.9, 0.0);
        assert!(DensityMatrix::from_matrix(m).is_err());
    }

    #[test]
    fn leakage_reads_top_two_levels() {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        m[(0, 0)] = Complex64::new(0.7, 0.0);
        m[(2, 2)] = Complex64::new(0.2, 0.0);
        m[(3, 3)] = Complex64::new(0.1, 0.0);
        let rho = DensityMatrix::from_matrix(m).unwrap();
        assert_abs_diff_eq!(rho.leakage(), 0.3, epsilon = 1e-15);
    }
}
