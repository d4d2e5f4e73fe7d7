// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Gauge-invariant Wigner transform of a spinor wavefunction on a 1D grid,
//! the first-order Moyal product and phase-space Hamiltonians.
//!
//! W(x, π) = (1/2π)∫dy e^{−iπy} ψ(x + y/2)ψ†(x − y/2)·exp(−ie∫_{x−y/2}^{x+y/2}A dz),
//! with kinetic π. On the grid y = 2sΔx and the y-integral is a length-2N
//! FFT, so Δπ = π/(2NΔx). The stored blocks use unit-trace normalization:
//! ∫Sp[W] dx dπ = 1. The spin-trace convention W⁰ = Sp[W′]/4 corresponds to
//! W′ = 4W, see [`WignerField::spin_trace_convention`].

mod moyal;

pub use moyal::{moyal_star, ps_fw_hamiltonian, ps_projectors, PhaseSpaceSymbol, SymbolFn, SymbolGrad};

use std::f64::consts::PI;

use nalgebra::Vector4;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::dirac::{max_abs, SpinorMatrix};
use crate::error::{Error, Result};

pub type Spinor = Vector4<Complex64>;

/// Uniform 1D grid x_j = x_min + jΔx, j < len.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1 {
    pub x_min: f64,
    pub dx: f64,
    pub len: usize,
}

impl Grid1 {
    pub fn new(x_min: f64, x_max: f64, len: usize) -> Result<Self> {
        if !(x_max > x_min) || len < 8 {
            return Err(Error::domain("grid needs x_max > x_min and at least 8 points"));
        }
        Ok(Grid1 {
            x_min,
            dx: (x_max - x_min) / (len - 1) as f64,
            len,
        })
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinorWavefunction {
    pub grid: Grid1,
    pub values: Vec<Spinor>,
}

impl SpinorWavefunction {
    /// Normalizes to Σ|ψ|²Δx = 1.
    pub fn new(grid: Grid1, values: Vec<Spinor>) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::domain("wavefunction length does not match grid"));
        }
        let norm2: f64 = values.iter().map(|s| s.norm_squared()).sum::<f64>() * grid.dx;
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::domain("wavefunction has zero norm"));
        }
        let scale = Complex64::new(norm2.sqrt().recip(), 0.0);
        Ok(SpinorWavefunction {
            grid,
            values: values.into_iter().map(|s| s * scale).collect(),
        })
    }

    /// Σ_n c_n·exp(−(x − x_n)²/(4s_n²) + ip_n x)·χ, normalized.
    pub fn gaussian_sum(grid: Grid1, packets: &[GaussianPacket], spinor: Spinor) -> Result<Self> {
        if packets.is_empty() || packets.iter().any(|p| !(p.width > 0.0)) {
            return Err(Error::domain("need at least one packet with positive width"));
        }
        let values = (0..grid.len)
            .map(|j| {
                let x = grid.x(j);
                let amp: Complex64 = packets
                    .iter()
                    .map(|p| {
                        let env = (-(x - p.center).powi(2) / (4.0 * p.width * p.width)).exp();
                        Complex64::from_polar(p.weight * env, p.momentum * x)
                    })
                    .sum();
                spinor * amp
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|s| s.norm_squared()).collect()
    }

    /// |ψ̃(π)|² with ψ̃(π) = (2π)^{−1/2}Σ_j ψ_j e^{−iπx_j}Δx.
    pub fn momentum_density(&self, pi: f64) -> f64 {
        let mut acc = Spinor::zeros();
        for (j, s) in self.values.iter().enumerate() {
            acc += s * Complex64::from_polar(1.0, -pi * self.grid.x(j));
        }
        acc.norm_squared() * self.grid.dx * self.grid.dx / (2.0 * PI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianPacket {
    pub center: f64,
    /// Position standard deviation of |ψ|².
    pub width: f64,
    pub momentum: f64,
    pub weight: f64,
}

/// Spinor-valued Wigner function on (x_j, π_k).
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    grid: Grid1,
    pi: Vec<f64>,
    blocks: Vec<SpinorMatrix>,
}

impl WignerField {
    pub fn x_grid(&self) -> Grid1 {
        self.grid
    }

    pub fn pi_grid(&self) -> &[f64] {
        &self.pi
    }

    pub fn dpi(&self) -> f64 {
        self.pi[1] - self.pi[0]
    }

    pub fn block(&self, j: usize, k: usize) -> &SpinorMatrix {
        &self.blocks[j * self.pi.len() + k]
    }

    /// Sp[W] at (x_j, π_k).
    pub fn w0(&self, j: usize, k: usize) -> f64 {
        self.block(j, k).trace().re
    }

    /// W′ = 4W, for which Sp[W′]/4 = Sp[W].
    pub fn spin_trace_convention(&self, j: usize, k: usize) -> SpinorMatrix {
        self.block(j, k) * Complex64::new(4.0, 0.0)
    }

    pub fn x_marginal(&self) -> Vec<f64> {
        let dpi = self.dpi();
        (0..self.grid.len)
            .map(|j| (0..self.pi.len()).map(|k| self.w0(j, k)).sum::<f64>() * dpi)
            .collect()
    }

    pub fn pi_marginal(&self) -> Vec<f64> {
        let dx = self.grid.dx;
        (0..self.pi.len())
            .map(|k| (0..self.grid.len).map(|j| self.w0(j, k)).sum::<f64>() * dx)
            .collect()
    }

    pub fn normalization(&self) -> f64 {
        self.x_marginal().iter().sum::<f64>() * self.grid.dx
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| max_abs(&(b - b.adjoint())))
            .fold(0.0, f64::max)
    }

    /// Rows (x, π, W⁰) in x-major order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.grid.len).flat_map(move |j| (0..self.pi.len()).map(move |k| (self.grid.x(j), self.pi[k], self.w0(j, k))))
    }
}

/// Relative density at the grid ends above which the transform refuses to
/// run.
const EDGE_TOL: f64 = 1e-10;

/// Gauge-covariant Wigner transform. `a` is the vector-potential component
/// along the grid and `charge` the particle charge.
pub fn wigner_transform(psi: &SpinorWavefunction, a: impl Fn(f64) -> f64, charge: f64) -> Result<WignerField> {
    let g = psi.grid;
    let n = g.len;
    let density = psi.density();
    let peak = density.iter().fold(0.0f64, |m, v| m.max(*v));
    let edge = density[..2].iter().chain(&density[n - 2..]).fold(0.0f64, |m, v| m.max(*v));
    if edge > EDGE_TOL * peak {
        return Err(Error::Resolution(format!(
            "wavefunction support touches the grid edge (edge/peak = {:e})",
            edge / peak
        )));
    }
    let band = PI / (2.0 * g.dx);
    let spectral_edge = psi.momentum_density(0.95 * band).max(psi.momentum_density(-0.95 * band));
    let spectral_peak = (0..n)
        .map(|k| psi.momentum_density(-band + 2.0 * band * k as f64 / n as f64))
        .fold(0.0f64, f64::max);
    if spectral_edge > EDGE_TOL * spectral_peak {
        return Err(Error::Resolution(format!(
            "momentum content reaches the band edge ±{band} (edge/peak = {:e})",
            spectral_edge / spectral_peak
        )));
    }

    // Cumulative ∫A dz by the trapezoid rule.
    let mut cum = vec![0.0; n];
    for j in 1..n {
        cum[j] = cum[j - 1] + 0.5 * (a(g.x(j - 1)) + a(g.x(j))) * g.dx;
    }

    let len = 2 * n;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);
    let pref = 2.0 * g.dx / (2.0 * PI);
    let rows: Vec<Vec<SpinorMatrix>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let smax = j.min(n - 1 - j);
            let mut buf = vec![vec![Complex64::new(0.0, 0.0); len]; 16];
            for s in -(smax as isize)..=(smax as isize) {
                let up = (j as isize + s) as usize;
                let dn = (j as isize - s) as usize;
                let phase = Complex64::from_polar(pref, -charge * (cum[up] - cum[dn]));
                let slot = s.rem_euclid(len as isize) as usize;
                for al in 0..4 {
                    for be in 0..4 {
                        buf[4 * al + be][slot] = psi.values[up][al] * psi.values[dn][be].conj() * phase;
                    }
                }
            }
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            for b in buf.iter_mut() {
                fft.process_with_scratch(b, &mut scratch);
            }
            (0..len)
                .map(|kk| {
                    // Reorder to ascending π: kk = 0 ↔ k = −N.
                    let k = (kk + n) % len;
                    SpinorMatrix::from_fn(|al, be| buf[4 * al + be][k])
                })
                .collect()
        })
        .collect();
    let dpi = PI / (len as f64 * g.dx);
    let pi = (0..len).map(|kk| (kk as f64 - n as f64) * dpi).collect();
    Ok(WignerField {
        grid: g,
        pi,
        blocks: rows.into_iter().flatten().collect(),
    })
}

/// Residuals of the two marginal identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginalResiduals {
    pub x_marginal: f64,
    pub pi_marginal: f64,
    pub normalization: f64,
    pub hermiticity: f64,
}

pub fn marginal_residuals(psi: &SpinorWavefunction, w: &WignerField) -> MarginalResiduals {
    let rho = psi.density();
    let xm = w.x_marginal();
    let x_err = rho.iter().zip(&xm).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let pm = w.pi_marginal();
    let p_err = w
        .pi_grid()
        .iter()
        .zip(&pm)
        .map(|(p, m)| (psi.momentum_density(*p) - m).abs())
        .fold(0.0, f64::max);
    MarginalResiduals {
        x_marginal: x_err,
        pi_marginal: p_err,
        normalization: (w.normalization() - 1.0).abs(),
        hermiticity: w.max_hermiticity_error(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up() -> Spinor {
        Spinor::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    fn packet(center: f64, width: f64, momentum: f64) -> GaussianPacket {
        GaussianPacket {
            center,
            width,
            momentum,
            weight: 1.0,
        }
    }

    #[test]
    fn gaussian_marginals_and_closed_form() {
        let g = Grid1::new(-12.0, 12.0, 192).unwrap();
        let s = 1.0;
        let p0 = 0.7;
        let psi = SpinorWavefunction::gaussian_sum(g, &[packet(0.5, s, p0)], up()).unwrap();
        let w = wigner_transform(&psi, |_| 0.0, 0.3).unwrap();
        let r = marginal_residuals(&psi, &w);
        assert!(r.x_marginal < 1e-12, "{r:?}");
        assert!(r.pi_marginal < 1e-10, "{r:?}");
        assert!(r.normalization < 1e-10);
        assert!(r.hermiticity < 1e-14);
        // W = (1/π)exp(−(x−x0)²/(2s²) − 2s²(π−p0)²) for this packet.
        let j = 96;
        let x = g.x(j);
        for (k, &pi) in w.pi_grid().iter().enumerate().step_by(17) {
            let exact = (-(x - 0.5f64).powi(2) / (2.0 * s * s) - 2.0 * s * s * (pi - p0).powi(2)).exp() / PI;
            assert!((w.w0(j, k) - exact).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn constant_potential_is_pure_gauge() {
        let g = Grid1::new(-10.0, 10.0, 128).unwrap();
        let e = 0.3;
        let a0 = 0.8;
        let packets = [packet(-2.0, 0.8, 0.5), packet(2.5, 1.0, -0.4)];
        let spinor = Spinor::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let psi = SpinorWavefunction::gaussian_sum(g, &packets, spinor).unwrap();
        let shifted = SpinorWavefunction::new(
            g,
            psi.values.iter().enumerate().map(|(j, s)| s * Complex64::from_polar(1.0, e * a0 * g.x(j))).collect(),
        )
        .unwrap();
        let w0 = wigner_transform(&psi, |_| 0.0, e).unwrap();
        let w1 = wigner_transform(&shifted, |_| a0, e).unwrap();
        let diff = (0..g.len)
            .flat_map(|j| (0..w0.pi_grid().len()).map(move |k| (j, k)))
            .map(|(j, k)| max_abs(&(w0.block(j, k) - w1.block(j, k))))
            .fold(0.0, f64::max);
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn edge_support_is_rejected() {
        let g = Grid1::new(-3.0, 3.0, 64).unwrap();
        let psi = SpinorWavefunction::gaussian_sum(g, &[packet(0.0, 2.0, 0.0)], up()).unwrap();
        assert!(matches!(wigner_transform(&psi, |_| 0.0, 0.3), Err(Error::Resolution(_))));
    }

    #[test]
    fn product_state_spin_trace() {
        let g = Grid1::new(-10.0, 10.0, 96).unwrap();
        let packets = [packet(-1.5, 0.9, 0.2), packet(2.0, 0.7, 0.0)];
        let scalar = SpinorWavefunction::gaussian_sum(g, &packets, up()).unwrap();
        let chi = Spinor::new(Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5), Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0));
        let spinful = SpinorWavefunction::gaussian_sum(g, &packets, chi).unwrap();
        let a = wigner_transform(&scalar, |_| 0.0, 0.0).unwrap();
        let b = wigner_transform(&spinful, |_| 0.0, 0.0).unwrap();
        for j in (0..g.len).step_by(7) {
            for k in (0..a.pi_grid().len()).step_by(11) {
                assert!((a.w0(j, k) - b.w0(j, k)).abs() < 1e-13);
                let conv = b.spin_trace_convention(j, k).trace().re / 4.0;
                assert!((conv - b.w0(j, k)).abs() < 1e-15);
            }
        }
    }
}
