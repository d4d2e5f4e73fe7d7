// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Langevin sampler for the kinetic equation: Euler–Maruyama with the
//! VF-corrected drift and one shared Wiener increment per particle and
//! step, dy = w dt + √(γτ₀)·c·dW, c = (v, F).
//!
//! Each call draws from ChaCha8 streams keyed by (seed, epoch, particle),
//! so results do not depend on thread count or scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{Coord, KineticModel, Moments};
use crate::classical::ParticleState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub particles: Vec<ParticleState>,
    pub seed: u64,
    /// Number of sampler calls applied so far; selects fresh streams.
    pub epoch: u64,
}

fn stream(seed: u64, epoch: u64, particle: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ epoch.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(particle as u64);
    rng
}

impl Ensemble {
    pub fn new(particles: Vec<ParticleState>, seed: u64) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::domain("ensemble must contain at least one particle"));
        }
        Ok(Ensemble {
            particles,
            seed,
            epoch: 1,
        })
    }

    /// `n` particles drawn from a product Gaussian in grid coordinates;
    /// components with zero width are set to the mean.
    pub fn gaussian(model: &KineticModel, n: usize, mean: &Coord, std: &Coord, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("ensemble must contain at least one particle"));
        }
        let rank = model.rank();
        if std[..rank].iter().any(|s| !(*s >= 0.0)) {
            return Err(Error::domain("Gaussian widths must be non-negative"));
        }
        let particles = (0..n)
            .into_par_iter()
            .map(|k| {
                let mut rng = stream(seed, 0, k);
                let mut y = [0.0; 6];
                for a in 0..rank {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    y[a] = mean[a] + std[a] * z;
                }
                model.state(0.0, &y)
            })
            .collect();
        Self::new(particles, seed)
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn moments(&self) -> Result<Moments> {
        let pts = self.particles.iter().map(|s| (1.0, [s.x.x, s.x.y, s.x.z, s.pi.x, s.pi.y, s.pi.z]));
        Moments::from_weighted(pts, Some(self.particles.len()))
    }
}

/// Advances every particle by `steps` Euler–Maruyama steps. Components
/// outside the model's grid coordinates stay fixed.
pub fn langevin_ensemble(ens: &Ensemble, model: &KineticModel, dt: f64, steps: usize) -> Result<Ensemble> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(format!("dt must be positive, got {dt}")));
    }
    let rank = model.rank();
    let sqrt_dt = dt.sqrt();
    let particles = ens
        .particles
        .par_iter()
        .enumerate()
        .map(|(k, s0)| {
            let mut rng = stream(ens.seed, ens.epoch, k);
            let mut y = model.project(&s0.x, &s0.pi);
            let mut t = s0.t;
            for _ in 0..steps {
                let c = model.coefficients(&y).map_err(|e| match e {
                    Error::BlowUp { speed, .. } => Error::BlowUp { t, speed },
                    other => other,
                })?;
                let z: f64 = StandardNormal.sample(&mut rng);
                let noise = (2.0 * c.kappa).sqrt() * sqrt_dt * z;
                for a in 0..rank {
                    y[a] += c.drift[a] * dt + c.direction[a] * noise;
                }
                t += dt;
            }
            let (x, pi) = model.embed(&y);
            let mut s = ParticleState::new(t, x, pi);
            // Keep frozen components bit-identical to the input.
            for a in model.dims..3 {
                s.x[a] = s0.x[a];
                s.pi[a] = s0.pi[a];
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble {
        particles,
        seed: ens.seed,
        epoch: ens.epoch + 1,
    })
}

/// RK4 solution of dy/dt = w(y) (the deterministic drift of the same
/// model), `steps + 1` samples.
pub fn reduced_ode(model: &KineticModel, y0: &Coord, dt: f64, steps: usize) -> Result<Vec<Coord>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(format!("dt must be positive, got {dt}")));
    }
    let rank = model.rank();
    let add = |y: &Coord, k: &Coord, h: f64| {
        let mut out = *y;
        for a in 0..rank {
            out[a] += h * k[a];
        }
        out
    };
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = *y0;
    out.push(y);
    for _ in 0..steps {
        let k1 = model.coefficients(&y)?.drift;
        let k2 = model.coefficients(&add(&y, &k1, 0.5 * dt))?.drift;
        let k3 = model.coefficients(&add(&y, &k2, 0.5 * dt))?.drift;
        let k4 = model.coefficients(&add(&y, &k3, dt))?.drift;
        for a in 0..rank {
            y[a] += dt / 6.0 * (k1[a] + 2.0 * (k2[a] + k3[a]) + k4[a]);
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{rhs, FieldConfig, ModelKind};
    use crate::kinetics::FrozenCoefficients;
    use crate::units::ModelConstants;
    use nalgebra::Vector3;

    #[test]
    fn zero_tau0_is_deterministic_lorentz() {
        let c = ModelConstants::physical().with_tau0(0.0);
        let field = FieldConfig::uniform(Vector3::new(0.0, 0.0, 0.05));
        let model = KineticModel::new(3, field, c).unwrap();
        let mean = [1.0, 0.0, 0.0, 0.0, 3.0, 0.2];
        let std = [0.1, 0.1, 0.1, 0.2, 0.2, 0.2];
        let ens = Ensemble::gaussian(&model, 16, &mean, &std, 3).unwrap();
        let dt = 0.5;
        let out = langevin_ensemble(&ens, &model, dt, 40).unwrap();
        for (s0, s1) in ens.particles.iter().zip(&out.particles) {
            let mut s = *s0;
            for _ in 0..40 {
                let (dx, dp) = rhs(ModelKind::Lorentz, &s, &field, &c).unwrap();
                s = ParticleState::new(s.t + dt, s.x + dx * dt, s.pi + dp * dt);
            }
            assert_eq!(s.x, s1.x);
            assert_eq!(s.pi, s1.pi);
        }
    }

    #[test]
    fn same_seed_same_output() {
        let c = ModelConstants::physical().with_tau0(0.05);
        let model = KineticModel::new(1, FieldConfig::uniform(Vector3::zeros()), c)
            .unwrap()
            .with_frozen(FrozenCoefficients {
                v: Vector3::new(0.3, 0.0, 0.0),
                force: Vector3::new(1.0, 0.0, 0.0),
                gamma: 2.0,
            });
        let ens = Ensemble::gaussian(&model, 500, &[0.0; 6], &[0.1, 0.1, 0., 0., 0., 0.], 42).unwrap();
        let a = langevin_ensemble(&ens, &model, 0.01, 50).unwrap();
        let b = langevin_ensemble(&ens, &model, 0.01, 50).unwrap();
        assert_eq!(a, b);
        let other = Ensemble { seed: 43, ..ens.clone() };
        let c2 = langevin_ensemble(&other, &model, 0.01, 50).unwrap();
        assert_ne!(a.particles, c2.particles);
        let (ma, mc) = (a.moments().unwrap(), c2.moments().unwrap());
        let se = ma.stderr_mean(3).hypot(mc.stderr_mean(3));
        assert!((ma.mean_pi.x - mc.mean_pi.x).abs() < 4.0 * se);
    }

    #[test]
    fn frozen_variance_matches_generator() {
        let (v, force, gamma, tau0) = (0.4, 0.7, 3.0, 0.02);
        let c = ModelConstants::physical().with_tau0(tau0);
        let model = KineticModel::new(1, FieldConfig::uniform(Vector3::zeros()), c)
            .unwrap()
            .with_frozen(FrozenCoefficients {
                v: Vector3::new(v, 0.0, 0.0),
                force: Vector3::new(force, 0.0, 0.0),
                gamma,
            });
        let ens = Ensemble::gaussian(&model, 100_000, &[0.0; 6], &[0.0; 6], 7).unwrap();
        let t = 2.0;
        let out = langevin_ensemble(&ens, &model, 0.02, 100).unwrap();
        let m = out.moments().unwrap();
        let expected = gamma * tau0 * force * force * t;
        assert!((m.var(3) - expected).abs() < 3.0 * m.stderr_cov(3, 3), "{} vs {expected}", m.var(3));
        let exp_xp = gamma * tau0 * v * force * t;
        assert!((m.cov[(0, 3)] - exp_xp).abs() < 3.0 * m.stderr_cov(0, 3));
    }
}
