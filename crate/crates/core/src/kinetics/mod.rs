// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! VF-diffusion kinetics: a Fokker–Planck grid solver and an equivalent
//! Langevin ensemble for
//!
//! ∂f/∂t + ∇_x·(u f) + ∇_π·(G f) = (γτ₀/2)(F·∇_π + v·∇_x)² f,
//!
//! with u = v + δv and G = F + f_vac − f_rad the VF-corrected drift.
//!
//! Grids resolve `dims` ∈ {1, 2, 3} spatial and momentum components; the
//! remaining components are held at fixed values by [`KineticModel`], and
//! the FP solver, the sampler and the reduced ODE all use the same model.

mod grid;
mod langevin;

pub use grid::{fp_step, Axis, FokkerPlanck, PhaseSpaceGrid, PhaseSpaceScalarField};
pub use langevin::{langevin_ensemble, reduced_ode, Ensemble};

use nalgebra::{SMatrix, Vector3};
use serde::Serialize;

use crate::classical::{force_terms, rhs, FieldConfig, ModelKind, ParticleState};
use crate::error::{Error, Result};
use crate::units::ModelConstants;

/// Phase-space point in grid coordinates (x₁..x_d, π₁..π_d); unused
/// trailing entries are zero.
pub type Coord = [f64; 6];

/// Constant (v, F, γ) used for drift and diffusion in place of the
/// state-dependent values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrozenCoefficients {
    pub v: Vector3<f64>,
    pub force: Vector3<f64>,
    pub gamma: f64,
}

/// Drift w = (u, G), diffusion direction c = (v, F) and κ = γτ₀/2 at one
/// point, in grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub drift: Coord,
    pub direction: Coord,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KineticModel {
    pub dims: usize,
    pub field: FieldConfig,
    pub consts: ModelConstants,
    /// Values of the position components not resolved by the grid.
    pub fixed_x: Vector3<f64>,
    /// Values of the momentum components not resolved by the grid.
    pub fixed_pi: Vector3<f64>,
    pub frozen: Option<FrozenCoefficients>,
}

impl KineticModel {
    pub fn new(dims: usize, field: FieldConfig, consts: ModelConstants) -> Result<Self> {
        if !(1..=3).contains(&dims) {
            return Err(Error::domain(format!("dims must be 1, 2 or 3, got {dims}")));
        }
        field.validate()?;
        Ok(KineticModel {
            dims,
            field,
            consts,
            fixed_x: Vector3::zeros(),
            fixed_pi: Vector3::zeros(),
            frozen: None,
        })
    }

    pub fn with_fixed(mut self, x: Vector3<f64>, pi: Vector3<f64>) -> Self {
        self.fixed_x = x;
        self.fixed_pi = pi;
        self
    }

    pub fn with_frozen(mut self, frozen: FrozenCoefficients) -> Self {
        self.frozen = Some(frozen);
        self
    }

    /// Number of grid coordinates, 2·dims.
    pub fn rank(&self) -> usize {
        2 * self.dims
    }

    pub fn embed(&self, y: &Coord) -> (Vector3<f64>, Vector3<f64>) {
        let mut x = self.fixed_x;
        let mut pi = self.fixed_pi;
        for a in 0..self.dims {
            x[a] = y[a];
            pi[a] = y[self.dims + a];
        }
        (x, pi)
    }

    pub fn project(&self, x: &Vector3<f64>, pi: &Vector3<f64>) -> Coord {
        let mut y = [0.0; 6];
        for a in 0..self.dims {
            y[a] = x[a];
            y[self.dims + a] = pi[a];
        }
        y
    }

    pub fn state(&self, t: f64, y: &Coord) -> ParticleState {
        let (x, pi) = self.embed(y);
        ParticleState::new(t, x, pi)
    }

    pub fn coefficients(&self, y: &Coord) -> Result<Coefficients> {
        let d = self.dims;
        let mut drift = [0.0; 6];
        let mut direction = [0.0; 6];
        let kappa;
        match &self.frozen {
            Some(fc) => {
                for a in 0..d {
                    drift[a] = fc.v[a];
                    drift[d + a] = fc.force[a];
                }
                direction = drift;
                kappa = 0.5 * fc.gamma * self.consts.tau0;
            }
            None => {
                let (x, pi) = self.embed(y);
                let (dx, dpi) = rhs(
                    ModelKind::VfEhrenfest,
                    &ParticleState::new(0.0, x, pi),
                    &self.field,
                    &self.consts,
                )?;
                let ft = force_terms(&x, &pi, &self.field, &self.consts);
                for a in 0..d {
                    drift[a] = dx[a];
                    drift[d + a] = dpi[a];
                    direction[a] = ft.v[a];
                    direction[d + a] = ft.lorentz[a];
                }
                kappa = 0.5 * ft.gamma * self.consts.tau0;
            }
        }
        Ok(Coefficients {
            drift,
            direction,
            kappa,
        })
    }
}

/// First and second central moments over (x₁, x₂, x₃, π₁, π₂, π₃).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Moments {
    pub mean_x: Vector3<f64>,
    pub mean_pi: Vector3<f64>,
    pub cov: SMatrix<f64, 6, 6>,
    /// Sample count for ensembles; `None` for grid moments.
    pub samples: Option<usize>,
}

impl Moments {
    pub fn mean(&self, i: usize) -> f64 {
        if i < 3 {
            self.mean_x[i]
        } else {
            self.mean_pi[i - 3]
        }
    }

    pub fn var(&self, i: usize) -> f64 {
        self.cov[(i, i)]
    }

    /// Standard error of the mean of component i (zero for grids).
    pub fn stderr_mean(&self, i: usize) -> f64 {
        match self.samples {
            Some(n) if n > 1 => (self.var(i) / n as f64).sqrt(),
            _ => 0.0,
        }
    }

    /// Standard error of the covariance entry (i, j) for near-Gaussian
    /// samples.
    pub fn stderr_cov(&self, i: usize, j: usize) -> f64 {
        match self.samples {
            Some(n) if n > 1 => {
                let c = &self.cov;
                ((c[(i, i)] * c[(j, j)] + c[(i, j)] * c[(i, j)]) / (n as f64 - 1.0)).sqrt()
            }
            _ => 0.0,
        }
    }

    pub(crate) fn from_weighted<'a>(
        points: impl Iterator<Item = (f64, [f64; 6])> + Clone + 'a,
        samples: Option<usize>,
    ) -> Result<Self> {
        let mut w_sum = 0.0;
        let mut mean = [0.0; 6];
        for (w, z) in points.clone() {
            w_sum += w;
            for i in 0..6 {
                mean[i] += w * z[i];
            }
        }
        if !(w_sum > 0.0) {
            return Err(Error::domain("moments of an empty distribution"));
        }
        for m in mean.iter_mut() {
            *m /= w_sum;
        }
        let mut cov = SMatrix::<f64, 6, 6>::zeros();
        for (w, z) in points {
            for i in 0..6 {
                let di = z[i] - mean[i];
                for j in i..6 {
                    cov[(i, j)] += w * di * (z[j] - mean[j]);
                }
            }
        }
        let norm = match samples {
            Some(n) if n > 1 => w_sum * (n as f64 - 1.0) / n as f64,
            _ => w_sum,
        };
        for i in 0..6 {
            for j in i..6 {
                cov[(i, j)] /= norm;
                cov[(j, i)] = cov[(i, j)];
            }
        }
        Ok(Moments {
            mean_x: Vector3::new(mean[0], mean[1], mean[2]),
            mean_pi: Vector3::new(mean[3], mean[4], mean[5]),
            cov,
            samples,
        })
    }
}

/// Order-of-magnitude ratios quoted for strong-field kinetics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffusionRatios {
    #[serde(rename = "Dq_over_Dc")]
    pub dq_over_dc: f64,
    pub frad_over_f: f64,
    #[serde(rename = "RR_over_Diff")]
    pub rr_over_diff: f64,
}

/// D_q/D_c = γ³E/E_cr, f_rad/F = αγ²E/E_cr, RR/Diff = m/(γΔp).
pub fn estimate_ratios(
    e_over_ecr: f64,
    gamma: f64,
    delta_p_over_m: f64,
    consts: &ModelConstants,
) -> Result<DiffusionRatios> {
    for (name, v) in [("E/E_cr", e_over_ecr), ("gamma", gamma), ("delta_p/m", delta_p_over_m)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(DiffusionRatios {
        dq_over_dc: gamma.powi(3) * e_over_ecr,
        frad_over_f: consts.alpha * gamma * gamma * e_over_ecr,
        rr_over_diff: 1.0 / (gamma * delta_p_over_m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoted_estimates() {
        let c = ModelConstants::physical();
        let r = estimate_ratios(1e-3, 10.0, 1.0, &c).unwrap();
        assert!((r.dq_over_dc - 1.0).abs() < 1e-15);
        assert!((r.frad_over_f - c.alpha * 0.1).abs() < 1e-18);
        assert!((r.rr_over_diff - 0.1).abs() < 1e-16);
        assert!(estimate_ratios(0.0, 10.0, 1.0, &c).is_err());
    }

    #[test]
    fn embedding_round_trip() {
        let c = ModelConstants::physical();
        let m = KineticModel::new(1, FieldConfig::uniform(Vector3::z()), c)
            .unwrap()
            .with_fixed(Vector3::new(0.0, 2.0, 3.0), Vector3::new(0.0, 10.0, 0.0));
        let y = [0.5, -1.0, 0.0, 0.0, 0.0, 0.0];
        let (x, pi) = m.embed(&y);
        assert_eq!(x, Vector3::new(0.5, 2.0, 3.0));
        assert_eq!(pi, Vector3::new(-1.0, 10.0, 0.0));
        assert_eq!(m.project(&x, &pi), y);
    }

    #[test]
    fn sample_moments_match_definition() {
        let pts = vec![(1.0, [1.0, 0.0, 0.0, 2.0, 0.0, 0.0]), (1.0, [3.0, 0.0, 0.0, 0.0, 0.0, 0.0])];
        let m = Moments::from_weighted(pts.into_iter(), Some(2)).unwrap();
        assert_eq!(m.mean_x.x, 2.0);
        assert_eq!(m.var(0), 2.0);
        assert_eq!(m.cov[(0, 3)], -2.0);
        assert!(Moments::from_weighted(std::iter::empty(), Some(0)).is_err());
    }
}
