//! Wigner quasiprobability distribution of a truncated-mode state on a
//! fixed phase-space grid, flattened into the readout feature vector.
//!
//! Quadrature convention: a = (x̂ + ip̂)/√2, so a coherent state of
//! amplitude β peaks at (x, p) = (√2 Re β, √2 Im β) and the vacuum is
//! W(x, p) = (1/π) e^{−x²−p²}.
//!
//! For each Fock pair the sampled kernel is the analytic Wigner transform
//! of |m⟩⟨n| (m ≥ n):
//!
//!   W(x, p) = (1/π)(−1)ⁿ √(n!/m!) [√2 (x − ip)]^{m−n} e^{−r²} L_n^{m−n}(2r²)
//!
//! with r² = x² + p² and associated Laguerre polynomials L_n^k. The table is
//! built once per (grid, dim) and W_ρ is a single contraction
//! W_ρ = Σ_{mn} ρ_{mn} · kernel[n, m].

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

/// Uniform rectangular grid over [−Lx, Lx] × [−Lp, Lp], endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PhaseSpaceGrid {
    pub x_points: usize,
    pub p_points: usize,
    pub x_half_range: f64,
    pub p_half_range: f64,
}

impl PhaseSpaceGrid {
    pub fn new(x_points: usize, p_points: usize, x_half_range: f64, p_half_range: f64) -> Result<Self> {
        if x_points < 2 || p_points < 2 {
            return Err(Error::invalid("grid needs at least 2 points per axis"));
        }
        if !(x_half_range > 0.0) || !(p_half_range > 0.0) {
            return Err(Error::invalid("grid half-ranges must be > 0"));
        }
        Ok(PhaseSpaceGrid {
            x_points,
            p_points,
            x_half_range,
            p_half_range,
        })
    }

    /// Default readout grid: 20×20 over [−5, 5]², i.e. 400 features.
    pub fn default_readout() -> Self {
        PhaseSpaceGrid {
            x_points: 20,
            p_points: 20,
            x_half_range: 5.0,
            p_half_range: 5.0,
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        let n = self.x_points;
        let l = self.x_half_range;
        (0..n).map(|k| -l + 2.0 * l * k as f64 / (n - 1) as f64).collect()
    }

    pub fn ps(&self) -> Vec<f64> {
        let n = self.p_points;
        let l = self.p_half_range;
        (0..n).map(|k| -l + 2.0 * l * k as f64 / (n - 1) as f64).collect()
    }

    /// Cell area dx·dp of the uniform spacing.
    pub fn cell_area(&self) -> f64 {
        let dx = 2.0 * self.x_half_range / (self.x_points - 1) as f64;
        let dp = 2.0 * self.p_half_range / (self.p_points - 1) as f64;
        dx * dp
    }

    pub fn len(&self) -> usize {
        self.x_points * self.p_points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sampled Wigner field; `values[(i, j)]` is W(xs[i], ps[j]).
#[derive(Debug, Clone, PartialEq)]
pub struct WignerSample {
    pub grid: PhaseSpaceGrid,
    pub values: DMatrix<f64>,
}

impl WignerSample {
    /// Riemann-sum normalization ∫W dx dp.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    /// Grid coordinates of the field maximum.
    pub fn max_location(&self) -> (f64, f64) {
        let xs = self.grid.xs();
        let ps = self.grid.ps();
        let mut best = (0, 0);
        let mut best_v = f64::NEG_INFINITY;
        for i in 0..self.grid.x_points {
            for j in 0..self.grid.p_points {
                if self.values[(i, j)] > best_v {
                    best_v = self.values[(i, j)];
                    best = (i, j);
                }
            }
        }
        (xs[best.0], ps[best.1])
    }

    /// Second moments (Var x, Var p) of the field treated as a density,
    /// using max(W, 0) weights; used for squeezing diagnostics.
    pub fn quadrature_variances(&self) -> (f64, f64) {
        let xs = self.grid.xs();
        let ps = self.grid.ps();
        let (mut w, mut sx, mut sp, mut sxx, mut spp) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..self.grid.x_points {
            for j in 0..self.grid.p_points {
                let v = self.values[(i, j)].max(0.0);
                w += v;
                sx += v * xs[i];
                sp += v * ps[j];
                sxx += v * xs[i] * xs[i];
                spp += v * ps[j] * ps[j];
            }
        }
        let mx = sx / w;
        let mp = sp / w;
        (sxx / w - mx * mx, spp / w - mp * mp)
    }

    /// Write `x,p,W` rows (header included).
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,p,w")?;
        let xs = self.grid.xs();
        let ps = self.grid.ps();
        for i in 0..self.grid.x_points {
            for j in 0..self.grid.p_points {
                writeln!(out, "{},{},{}", xs[i], ps[j], self.values[(i, j)])?;
            }
        }
        Ok(())
    }
}

/// Precomputed Fock-pair Wigner kernels on a grid.
///
/// `plane(n, m)` holds the Wigner transform of |m⟩⟨n| sampled row-major
/// (x-index × p-index), so that W_ρ(x, p) = Σ_{mn} ρ_{mn} · plane(n, m).
pub struct KernelTable {
    dim: usize,
    grid: PhaseSpaceGrid,
    planes: Vec<Vec<Complex64>>,
}

impl KernelTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    pub fn plane(&self, n: usize, m: usize) -> &[Complex64] {
        &self.planes[n * self.dim + m]
    }
}

/// Associated Laguerre values L_n^k(z) for n = 0..count−1 via the stable
/// upward recurrence (n+1)L_{n+1}^k = (2n+k+1−z)L_n^k − (n+k)L_{n−1}^k.
fn laguerre_column(k: usize, z: f64, count: usize, out: &mut Vec<f64>) {
    out.clear();
    if count == 0 {
        return;
    }
    out.push(1.0);
    if count == 1 {
        return;
    }
    out.push(1.0 + k as f64 - z);
    for n in 1..count - 1 {
        let nf = n as f64;
        let kf = k as f64;
        let next = ((2.0 * nf + kf + 1.0 - z) * out[n] - (nf + kf) * out[n - 1]) / (nf + 1.0);
        out.push(next);
    }
}

/// Build the kernel table for every Fock pair (m, n) with m, n < dim.
pub fn precompute_kernels(grid: &PhaseSpaceGrid, dim: usize) -> Result<KernelTable> {
    if dim < 1 {
        return Err(Error::invalid("kernel dim must be ≥ 1"));
    }
    let xs = grid.xs();
    let ps = grid.ps();
    let npts = grid.len();
    let mut planes = vec![vec![Complex64::default(); npts]; dim * dim];

    // √(n!/m!) = 1/√((n+1)(n+2)…m) for m ≥ n.
    let mut ratio = vec![vec![0.0f64; dim]; dim];
    for n in 0..dim {
        ratio[n][n] = 1.0;
        for m in n + 1..dim {
            ratio[n][m] = ratio[n][m - 1] / (m as f64).sqrt();
        }
    }

    let mut lag = Vec::with_capacity(dim);
    for (ix, &x) in xs.iter().enumerate() {
        for (ip, &p) in ps.iter().enumerate() {
            let idx = ix * ps.len() + ip;
            let r2 = x * x + p * p;
            let z = 2.0 * r2;
            let gauss = (-r2).exp() / std::f64::consts::PI;
            let w = Complex64::new(x, -p) * std::f64::consts::SQRT_2;
            let mut w_pow = Complex64::new(1.0, 0.0);
            for k in 0..dim {
                laguerre_column(k, z, dim - k, &mut lag);
                for n in 0..dim - k {
                    let m = n + k;
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    let val = w_pow * (sign * ratio[n][m] * gauss * lag[n]);
                    planes[n * dim + m][idx] = val;
                    planes[m * dim + n][idx] = val.conj();
                }
                w_pow *= w;
            }
        }
    }
    Ok(KernelTable {
        dim,
        grid: *grid,
        planes,
    })
}

/// Contract a state against the kernel table: W_ρ = Σ_{mn} ρ_{mn} kernel[n,m].
///
/// The imaginary residue of the contraction is verified ≤ 1e−10 and then
/// discarded; a Hermitian ρ gives an exactly real field up to rounding.
pub fn wigner_of(rho: &DensityMatrix, kernels: &KernelTable) -> Result<WignerSample> {
    if rho.dim() != kernels.dim {
        return Err(Error::DimensionMismatch {
            context: "wigner_of",
            expected: kernels.dim,
            found: rho.dim(),
        });
    }
    let dim = kernels.dim;
    let npts = kernels.grid.len();
    let mut acc = vec![Complex64::default(); npts];
    for m in 0..dim {
        for n in 0..dim {
            let c = rho.entries()[(m, n)];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let plane = kernels.plane(n, m);
            for (a, k) in acc.iter_mut().zip(plane) {
                *a += c * k;
            }
        }
    }
    let residue = acc.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    if residue > 1e-10 {
        return Err(Error::NumericalFailure {
            interval: 0,
            detail: format!("Wigner imaginary residue {residue:.3e}"),
        });
    }
    let values = DMatrix::from_fn(kernels.grid.x_points, kernels.grid.p_points, |i, j| {
        acc[i * kernels.grid.p_points + j].re
    });
    Ok(WignerSample {
        grid: kernels.grid,
        values,
    })
}

/// Row-major flattening of the sampled field (x-index outer, p-index inner).
/// This ordering is part of the readout contract and must stay stable.
pub fn flatten_features(sample: &WignerSample) -> Vec<f64> {
    let mut f = Vec::with_capacity(sample.grid.len());
    for i in 0..sample.grid.x_points {
        for j in 0..sample.grid.p_points {
            f.push(sample.values[(i, j)]);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockOperator;
    use approx::assert_abs_diff_eq;

    const PI: f64 = std::f64::consts::PI;

    /// Odd-count grid: includes the origin exactly.
    fn origin_grid(points: usize, l: f64) -> PhaseSpaceGrid {
        PhaseSpaceGrid::new(points, points, l, l).unwrap()
    }

    #[test]
    fn laguerre_recurrence_matches_closed_forms() {
        for &(k, z) in &[(0usize, 0.3), (1, 1.7), (3, 4.2)] {
            let mut lag = Vec::new();
            laguerre_column(k, z, 3, &mut lag);
            let kf = k as f64;
            assert_abs_diff_eq!(lag[0], 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(lag[1], 1.0 + kf - z, epsilon = 1e-14);
            let l2 = (z * z - 2.0 * (kf + 2.0) * z + (kf + 1.0) * (kf + 2.0)) / 2.0;
            assert_abs_diff_eq!(lag[2], l2, epsilon = 1e-12);
        }
    }

    #[test]
    fn vacuum_kernel_peak_and_profile() {
        let grid = origin_grid(21, 5.0);
        let table = precompute_kernels(&grid, 4).unwrap();
        let center = 10 * 21 + 10;
        assert_abs_diff_eq!(table.plane(0, 0)[center].re, 1.0 / PI, epsilon = 1e-12);
        // (x, p) = (1, 0) sits on this grid: W = (1/π)e^{−1}.
        let at_x1 = 12 * 21 + 10;
        assert_abs_diff_eq!(table.plane(0, 0)[at_x1].re, (-1.0f64).exp() / PI, epsilon = 1e-12);
    }

    #[test]
    fn one_photon_kernel_negativity() {
        let grid = origin_grid(21, 5.0);
        let table = precompute_kernels(&grid, 4).unwrap();
        let center = 10 * 21 + 10;
        assert_abs_diff_eq!(table.plane(1, 1)[center].re, -1.0 / PI, epsilon = 1e-12);
    }

    #[test]
    fn off_diagonal_kernel_integrates_to_zero() {
        // Tr|0⟩⟨1| = 0, so the (0,1) kernel must integrate to zero.
        let grid = origin_grid(61, 6.0);
        let table = precompute_kernels(&grid, 3).unwrap();
        let sum: Complex64 = table.plane(0, 1).iter().sum();
        assert!((sum * grid.cell_area()).norm() < 1e-6);
    }

    #[test]
    fn kernel_conjugate_symmetry() {
        let grid = origin_grid(9, 4.0);
        let table = precompute_kernels(&grid, 5).unwrap();
        for n in 0..5 {
            for m in 0..5 {
                for (a, b) in table.plane(n, m).iter().zip(table.plane(m, n)) {
                    assert!((a - b.conj()).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn wigner_of_vacuum_is_the_gaussian() {
        let grid = origin_grid(21, 5.0);
        let table = precompute_kernels(&grid, 8).unwrap();
        let rho = DensityMatrix::vacuum(8).unwrap();
        let w = wigner_of(&rho, &table).unwrap();
        assert_abs_diff_eq!(w.values[(10, 10)], 1.0 / PI, epsilon = 1e-12);
        assert_abs_diff_eq!(w.values[(12, 10)], (-1.0f64).exp() / PI, epsilon = 1e-12);
        assert!((w.integral() - 1.0).abs() < 1e-2);
        let (x, p) = w.max_location();
        assert_eq!((x, p), (0.0, 0.0));
    }

    #[test]
    fn wigner_of_one_photon_is_negative_at_origin() {
        let grid = origin_grid(21, 5.0);
        let table = precompute_kernels(&grid, 8).unwrap();
        let rho = DensityMatrix::fock_state(8, 1).unwrap();
        let w = wigner_of(&rho, &table).unwrap();
        assert_abs_diff_eq!(w.values[(10, 10)], -1.0 / PI, epsilon = 1e-12);
        assert!((w.integral() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn wigner_is_linear_in_the_state() {
        let grid = origin_grid(15, 5.0);
        let table = precompute_kernels(&grid, 6).unwrap();
        let r0 = DensityMatrix::vacuum(6).unwrap();
        let r1 = DensityMatrix::fock_state(6, 1).unwrap();
        let mix = DensityMatrix::from_matrix(
            r0.entries() * Complex64::new(0.5, 0.0) + r1.entries() * Complex64::new(0.5, 0.0),
        )
        .unwrap();
        let w0 = wigner_of(&r0, &table).unwrap();
        let w1 = wigner_of(&r1, &table).unwrap();
        let wm = wigner_of(&mix, &table).unwrap();
        for i in 0..15 {
            for j in 0..15 {
                assert_abs_diff_eq!(
                    wm.values[(i, j)],
                    0.5 * w0.values[(i, j)] + 0.5 * w1.values[(i, j)],
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn coherent_state_peaks_at_displaced_point() {
        let beta = Complex64::new(0.5, 0.3);
        let grid = origin_grid(41, 5.0);
        let table = precompute_kernels(&grid, 24).unwrap();
        let rho = DensityMatrix::coherent(24, beta).unwrap();
        let w = wigner_of(&rho, &table).unwrap();
        let (x, p) = w.max_location();
        let step = 2.0 * 5.0 / 40.0;
        assert!((x - 2f64.sqrt() * beta.re).abs() <= step / 2.0 + 1e-12);
        assert!((p - 2f64.sqrt() * beta.im).abs() <= step / 2.0 + 1e-12);
        assert!((w.integral() - 1.0).abs() < 1e-2);
        // Overlap identity Tr ρ² = 2π ∫ W² for a pure state.
        let purity_from_w: f64 =
            2.0 * PI * w.values.iter().map(|v| v * v).sum::<f64>() * grid.cell_area();
        assert!((purity_from_w - 1.0).abs() < 1e-2);
    }

    #[test]
    fn fock_diagonal_states_have_inversion_symmetry() {
        let grid = origin_grid(15, 4.0);
        let table = precompute_kernels(&grid, 6).unwrap();
        let mix = DensityMatrix::from_matrix(
            DensityMatrix::vacuum(6).unwrap().entries() * Complex64::new(0.3, 0.0)
                + DensityMatrix::fock_state(6, 2).unwrap().entries() * Complex64::new(0.7, 0.0),
        )
        .unwrap();
        let w = wigner_of(&mix, &table).unwrap();
        for i in 0..15 {
            for j in 0..15 {
                assert_abs_diff_eq!(w.values[(i, j)], w.values[(14 - i, 14 - j)], epsilon = 1e-10);
            }
        }
    }

    /// Small matrix exponential by scaling and squaring (test-only).
    fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let norm = m.iter().map(|c| c.norm()).fold(0.0, f64::max) * m.nrows() as f64;
        let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
        let scaled = m / Complex64::new(2f64.powi(squarings as i32), 0.0);
        let dim = m.nrows();
        let mut term = DMatrix::<Complex64>::identity(dim, dim);
        let mut sum = term.clone();
        for k in 1..30 {
            term = &term * &scaled / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn displaced_parity_oracle_confirms_kernels() {
        // Independent definition: W(x, p) = (1/π) Tr[ρ D(α) Π D†(α)] with
        // α = (x + ip)/√2, computed with a brute-force matrix exponential in
        // a padded Fock space. This pins the kernel orientation, sign, and
        // prefactor all at once.
        let dim = 6;
        let pad = 48;
        // A deliberately asymmetric but valid state: mixture of a coherent
        // state and a Fock state, with off-diagonal structure.
        let coh = DensityMatrix::coherent(dim, Complex64::new(0.4, -0.2)).unwrap();
        let fock = DensityMatrix::fock_state(dim, 2).unwrap();
        let rho = DensityMatrix::from_matrix(
            coh.entries() * Complex64::new(0.6, 0.0) + fock.entries() * Complex64::new(0.4, 0.0),
        )
        .unwrap();

        let a = FockOperator::annihilation(pad).into_entries();
        let adag = a.adjoint();
        let parity = DMatrix::from_fn(pad, pad, |i, j| {
            if i == j {
                Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
            } else {
                Complex64::default()
            }
        });

        let points = [(0.0, 0.0), (0.5, 0.0), (0.0, -0.5), (1.0, 1.0), (-1.5, 0.5)];
        let grid = origin_grid(13, 3.0); // step 0.5: contains all test points
        let table = precompute_kernels(&grid, dim).unwrap();
        let w = wigner_of(&rho, &table).unwrap();
        let xs = grid.xs();

        for &(x, p) in &points {
            let alpha = Complex64::new(x, p) / 2f64.sqrt();
            let d = expm(&(&adag * alpha - &a * alpha.conj()));
            let kernel_op = &d * &parity * d.adjoint();
            let mut tr = Complex64::default();
            for m in 0..dim {
                for n in 0..dim {
                    tr += rho.entries()[(m, n)] * kernel_op[(n, m)];
                }
            }
            let oracle = tr.re / PI;
            assert!(tr.im.abs() < 1e-9);

            let ix = xs.iter().position(|&v| (v - x).abs() < 1e-12).unwrap();
            let ip = xs.iter().position(|&v| (v - p).abs() < 1e-12).unwrap();
            let got = w.values[(ix, ip)];
            assert!(
                (got - oracle).abs() < 1e-9,
                "W({x},{p}) = {got}, oracle {oracle}"
            );
        }
    }

    #[test]
    fn flatten_is_row_major() {
        let grid = PhaseSpaceGrid::new(2, 2, 1.0, 1.0).unwrap();
        let sample = WignerSample {
            grid,
            values: DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]),
        };
        assert_eq!(flatten_features(&sample), vec![1.0, 2.0, 3.0, 4.0]);

        let zero = WignerSample {
            grid,
            values: DMatrix::zeros(2, 2),
        };
        assert_eq!(flatten_features(&zero), vec![0.0; 4]);
    }

    #[test]
    fn vacuum_on_default_grid_peaks_nearest_origin() {
        let grid = PhaseSpaceGrid::default_readout();
        let table = precompute_kernels(&grid, 8).unwrap();
        let rho = DensityMatrix::vacuum(8).unwrap();
        let f = flatten_features(&wigner_of(&rho, &table).unwrap());
        assert_eq!(f.len(), 400);
        let (argmax, _) = f
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| {
                if v > acc.1 {
                    (i, v)
                } else {
                    acc
                }
            });
        // Nearest-to-origin grid points on the even 20-point axis.
        let xs = grid.xs();
        let ix = argmax / 20;
        let ip = argmax % 20;
        assert!(xs[ix].abs() <= 10.0 / 19.0 / 2.0 + 1e-12);
        assert!(xs[ip].abs() <= 10.0 / 19.0 / 2.0 + 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let grid = origin_grid(5, 3.0);
        let table = precompute_kernels(&grid, 4).unwrap();
        let rho = DensityMatrix::vacuum(6).unwrap();
        assert!(wigner_of(&rho, &table).is_err());
    }
}
