// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Radiation reaction: the FW-projected emission amplitude R, the
//! low-recoil τ-integral along a classical trajectory, and its LCFA closed
//! form −(σ/2π)γ⁴|ẍ|²ẋ.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use crate::dirac::{pauli, Momentum3, PauliMatrix};
use crate::error::{Error, Result};
use crate::lindblad::Sign;
use crate::units::ModelConstants;

/// Photon channel (η, k, λ).
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionChannel {
    eta: Sign,
    k: Vector3<f64>,
    omega: f64,
    lambda_pol: u8,
    polarization: Vector3<f64>,
}

impl EmissionChannel {
    /// `eta = Plus` is emission. `lambda_pol` selects e₁ or e₂ from
    /// [`polarization_basis`].
    pub fn new(eta: Sign, k: Vector3<f64>, lambda_pol: u8) -> Result<Self> {
        let omega = k.norm();
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::domain("photon momentum must be non-zero and finite"));
        }
        let [e1, e2] = polarization_basis(&k);
        let polarization = match lambda_pol {
            1 => e1,
            2 => e2,
            other => return Err(Error::domain(format!("polarization index {other} not in {{1, 2}}"))),
        };
        Ok(EmissionChannel {
            eta,
            k,
            omega,
            lambda_pol,
            polarization,
        })
    }

    pub fn eta(&self) -> Sign {
        self.eta
    }

    pub fn k(&self) -> Vector3<f64> {
        self.k
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn lambda_pol(&self) -> u8 {
        self.lambda_pol
    }

    pub fn polarization(&self) -> Vector3<f64> {
        self.polarization
    }
}

/// Real orthonormal (e₁, e₂) with e₁ × e₂ = k/|k|.
pub fn polarization_basis(k: &Vector3<f64>) -> [Vector3<f64>; 2] {
    let n = k.normalize();
    let axis = (0..3)
        .min_by(|&a, &b| n[a].abs().total_cmp(&n[b].abs()))
        .unwrap_or(0);
    let mut trial = Vector3::zeros();
    trial[axis] = 1.0;
    let e1 = trial.cross(&n).normalize();
    let e2 = n.cross(&e1);
    [e1, e2]
}

/// The vectors entering R = e_λ·A + iσ·ℬ.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoilAmplitudes {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub pi0: f64,
    pub pi0_prime: f64,
}

/// A and ℬ with π′ = π − ηk/2 and π₀′ = π₀ − ηω/2.
pub fn recoil_amplitudes(ch: &EmissionChannel, p: &Momentum3, m: f64) -> Result<RecoilAmplitudes> {
    let eta = ch.eta.value();
    let pi0 = p.energy(m);
    let pi0_prime = pi0 - 0.5 * eta * ch.omega;
    if pi0_prime <= m {
        return Err(Error::RecoilOutOfRange { pi0_prime, m });
    }
    let pi = p.vector();
    let pi_prime = pi - ch.k * (0.5 * eta);
    let ratio = ((pi0_prime + m) / (pi0 + m)).sqrt();
    let norm = 2.0 * (pi0 * pi0_prime).sqrt();
    let a = (pi * ratio + pi_prime / ratio) / norm;
    let b = ch.polarization.cross(&((pi * ratio - pi_prime / ratio) / norm));
    Ok(RecoilAmplitudes {
        a,
        b,
        pi0,
        pi0_prime,
    })
}

/// R = (e_λ·A)·I + iσ·ℬ on the positive-energy spin space.
pub fn emission_amplitude_r(ch: &EmissionChannel, p: &Momentum3, m: f64) -> Result<PauliMatrix> {
    let amp = recoil_amplitudes(ch, p, m)?;
    let s = pauli();
    let i = Complex64::new(0.0, 1.0);
    let scalar = Complex64::new(ch.polarization.dot(&amp.a), 0.0);
    Ok(PauliMatrix::identity() * scalar
        + (s[0] * Complex64::new(amp.b.x, 0.0)
            + s[1] * Complex64::new(amp.b.y, 0.0)
            + s[2] * Complex64::new(amp.b.z, 0.0))
            * i)
}

/// Velocity, acceleration and Lorentz factor at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub xdot: Vector3<f64>,
    pub xddot: Vector3<f64>,
    pub gamma: f64,
}

impl TrajectoryPoint {
    pub fn new(xdot: Vector3<f64>, xddot: Vector3<f64>) -> Result<Self> {
        let v2 = xdot.norm_squared();
        if !(v2 < 1.0) {
            return Err(Error::domain(format!("|xdot| = {} must be < 1", v2.sqrt())));
        }
        Ok(TrajectoryPoint {
            xdot,
            xddot,
            gamma: 1.0 / (1.0 - v2).sqrt(),
        })
    }
}

/// −(σ/2π)·γ⁴·|ẍ|²·ẋ.
pub fn rr_force_lcfa(tp: &TrajectoryPoint, consts: &ModelConstants) -> Vector3<f64> {
    let coef = consts.sigma / (2.0 * PI) * tp.gamma.powi(4) * tp.xddot.norm_squared();
    tp.xdot * (-coef)
}

/// A classical worldline parametrized by lab time.
pub trait Trajectory: Sync {
    fn position(&self, t: f64) -> Vector3<f64>;
    fn velocity(&self, t: f64) -> Vector3<f64>;
    fn acceleration(&self, t: f64) -> Vector3<f64>;

    /// r = x(t + τ/2) − x(t − τ/2).
    fn chord(&self, t: f64, tau: f64) -> Vector3<f64> {
        self.position(t + 0.5 * tau) - self.position(t - 0.5 * tau)
    }
}

/// Uniform circular motion in the xy plane, centred on the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularTrajectory {
    pub speed: f64,
    pub omega: f64,
}

impl CircularTrajectory {
    pub fn new(gamma: f64, omega: f64) -> Result<Self> {
        if !(gamma > 1.0 && omega > 0.0 && omega.is_finite()) {
            return Err(Error::domain("circular trajectory needs gamma > 1 and omega > 0"));
        }
        Ok(CircularTrajectory {
            speed: (1.0 - 1.0 / (gamma * gamma)).sqrt(),
            omega,
        })
    }

    pub fn radius(&self) -> f64 {
        self.speed / self.omega
    }

    pub fn point(&self, t: f64) -> TrajectoryPoint {
        let v = self.velocity(t);
        let gamma = 1.0 / (1.0 - self.speed * self.speed).sqrt();
        TrajectoryPoint {
            xdot: v,
            xddot: self.acceleration(t),
            gamma,
        }
    }
}

impl Trajectory for CircularTrajectory {
    fn position(&self, t: f64) -> Vector3<f64> {
        let (s, c) = (self.omega * t).sin_cos();
        Vector3::new(c, s, 0.0) * self.radius()
    }

    fn velocity(&self, t: f64) -> Vector3<f64> {
        let (s, c) = (self.omega * t).sin_cos();
        Vector3::new(-s, c, 0.0) * self.speed
    }

    fn acceleration(&self, t: f64) -> Vector3<f64> {
        let (s, c) = (self.omega * t).sin_cos();
        Vector3::new(c, s, 0.0) * (-self.speed * self.omega)
    }

    fn chord(&self, t: f64, tau: f64) -> Vector3<f64> {
        self.velocity(t) * (2.0 * (0.5 * self.omega * tau).sin() / self.omega)
    }
}

/// x(t) = x₀ + v·t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StraightTrajectory {
    pub x0: Vector3<f64>,
    pub v: Vector3<f64>,
}

impl Trajectory for StraightTrajectory {
    fn position(&self, t: f64) -> Vector3<f64> {
        self.x0 + self.v * t
    }

    fn velocity(&self, _t: f64) -> Vector3<f64> {
        self.v
    }

    fn acceleration(&self, _t: f64) -> Vector3<f64> {
        Vector3::zeros()
    }

    fn chord(&self, _t: f64, tau: f64) -> Vector3<f64> {
        self.v * tau
    }
}

/// Quadrature controls for [`rr_kernel_numeric_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    /// Initial truncation in units of the LCFA formation time √12/(γ|ẍ|).
    pub tau_max_start: f64,
    /// Relative change between doublings that counts as converged.
    pub truncation_tol: f64,
    pub max_doublings: u32,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            tau_max_start: 50.0,
            truncation_tol: 1e-3,
            max_doublings: 30,
        }
    }
}

/// Low-recoil friction force at time `t` from the τ-integral
/// ∫dτ σ|v̇|²τ²·i r/(2π²(τ² − r²)²).
///
/// The integrand carries a simple pole at τ = 0 from r ≈ τẋ. It is
/// regularized as 1/τ → 1/(τ − iδ) with δ = reg_eps·√12/(γ|ẍ|), which keeps
/// the even part of the integrand and turns the real force into
/// −2δ∫₀^τmax g(τ)/(τ² + δ²)dτ with g = σ|v̇|²τ³r/(2π²(τ² − r²)²).
pub fn rr_kernel_numeric(
    traj: &dyn Trajectory,
    t: f64,
    consts: &ModelConstants,
    reg_eps: f64,
) -> Result<Vector3<f64>> {
    rr_kernel_numeric_with(traj, t, consts, reg_eps, &KernelOptions::default())
}

pub fn rr_kernel_numeric_with(
    traj: &dyn Trajectory,
    t: f64,
    consts: &ModelConstants,
    reg_eps: f64,
    opts: &KernelOptions,
) -> Result<Vector3<f64>> {
    if !(reg_eps > 0.0 && reg_eps < 1.0) {
        return Err(Error::domain(format!("reg_eps must lie in (0, 1), got {reg_eps}")));
    }
    let v = traj.velocity(t);
    let acc = traj.acceleration(t);
    let a2 = acc.norm_squared();
    if a2 == 0.0 {
        return Ok(Vector3::zeros());
    }
    let v2 = v.norm_squared();
    if !(v2 < 1.0) {
        return Err(Error::domain("trajectory speed must be < 1"));
    }
    let gamma = 1.0 / (1.0 - v2).sqrt();
    let tau_c = 12f64.sqrt() / (gamma * a2.sqrt());
    let delta = reg_eps * tau_c;
    let pref = consts.sigma * a2 / (2.0 * PI * PI);
    let g0 = v * (pref * gamma.powi(4));

    let g = |tau: f64| -> Vector3<f64> {
        if tau < 1e-9 * tau_c {
            return g0;
        }
        let r = traj.chord(t, tau);
        let defect = tau * tau - r.norm_squared();
        r * (pref * tau.powi(3) / (defect * defect))
    };

    let scale = g0.norm();
    let integrate = |tau_max: f64| -> Result<Vector3<f64>> {
        let theta_max = (tau_max / delta).atan();
        let mut out = Vector3::zeros();
        for c in 0..3 {
            let res = quadrature::double_exponential::integrate(
                |theta: f64| g(delta * theta.tan())[c],
                0.0,
                theta_max,
                1e-10 * scale,
            );
            if !res.integral.is_finite() || res.error_estimate > 1e-6 * scale {
                return Err(Error::Quadrature(format!(
                    "component {c}: error estimate {:e} with {} evaluations",
                    res.error_estimate, res.num_function_evaluations
                )));
            }
            out[c] = -2.0 * res.integral;
        }
        Ok(out)
    };

    let mut tau_max = opts.tau_max_start * tau_c;
    let mut prev = integrate(tau_max)?;
    for _ in 0..opts.max_doublings {
        tau_max *= 2.0;
        let next = integrate(tau_max)?;
        if (next - prev).norm() <= opts.truncation_tol * next.norm() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature(format!(
        "τ truncation did not converge after {} doublings",
        opts.max_doublings
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{block, fw_unitary_with_energy, gamma_basis, max_abs};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn channel(eta: Sign, k: Vector3<f64>, lambda: u8) -> EmissionChannel {
        EmissionChannel::new(eta, k, lambda).unwrap()
    }

    /// Upper-left block of U_FW(π′, π₀′)(α·e)U_FW(π)†.
    fn matrix_route(ch: &EmissionChannel, p: &Momentum3, m: f64) -> PauliMatrix {
        let eta = ch.eta().value();
        let b = gamma_basis();
        let e = ch.polarization();
        let alpha_e = b.alpha[0] * Complex64::new(e.x, 0.0)
            + b.alpha[1] * Complex64::new(e.y, 0.0)
            + b.alpha[2] * Complex64::new(e.z, 0.0);
        let pi0 = p.energy(m);
        let u = fw_unitary_with_energy(&p.vector(), pi0, m);
        let pp = p.vector() - ch.k() * (0.5 * eta);
        let up = fw_unitary_with_energy(&pp, pi0 - 0.5 * eta * ch.omega(), m);
        block(&(up * alpha_e * u.adjoint()), 0, 0)
    }

    fn momentum() -> impl Strategy<Value = Momentum3> {
        (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0).prop_map(|(x, y, z)| Momentum3::new(x, y, z))
    }

    fn photon() -> impl Strategy<Value = Vector3<f64>> {
        (-0.5f64..0.5, -0.5f64..0.5, -0.5f64..0.5)
            .prop_filter("non-zero", |(x, y, z)| x * x + y * y + z * z > 1e-6)
            .prop_map(|(x, y, z)| Vector3::new(x, y, z))
    }

    #[test]
    fn soft_photon_limit_is_velocity() {
        let p = Momentum3::new(0.4, -1.2, 2.0);
        let ch = channel(Sign::Plus, Vector3::new(1e-9, 2e-9, -1e-9), 1);
        let r = emission_amplitude_r(&ch, &p, 1.0).unwrap();
        let ev = ch.polarization().dot(&p.velocity(1.0));
        let expected = PauliMatrix::identity() * Complex64::new(ev, 0.0);
        assert!(max_abs(&(r - expected)) < 1e-8);
    }

    #[test]
    fn spin_term_is_linear_in_k_at_rest() {
        let p = Momentum3::zero();
        let dir = Vector3::new(0.3, 0.5, -0.8).normalize();
        let b_of = |s: f64| recoil_amplitudes(&channel(Sign::Minus, dir * s, 1), &p, 1.0).unwrap().b.norm();
        let ratio = b_of(2e-3) / b_of(1e-3);
        assert!((ratio - 2.0).abs() < 1e-2, "ratio {ratio}");
        assert!(b_of(1e-3) < 1e-3);
    }

    #[test]
    fn unreachable_recoil_is_rejected() {
        let ch = channel(Sign::Plus, Vector3::new(0.0, 0.0, 1.0), 1);
        let err = emission_amplitude_r(&ch, &Momentum3::zero(), 1.0).unwrap_err();
        assert!(matches!(err, Error::RecoilOutOfRange { .. }));
        assert!(EmissionChannel::new(Sign::Plus, Vector3::zeros(), 1).is_err());
        assert!(EmissionChannel::new(Sign::Plus, Vector3::x(), 3).is_err());
    }

    #[test]
    fn lcfa_reference_value() {
        let c = ModelConstants::physical();
        let tp = TrajectoryPoint::new(
            Vector3::new(0.0, (1.0f64 - 1e-2).sqrt(), 0.0),
            Vector3::new(-1e-3, 0.0, 0.0),
        )
        .unwrap();
        assert_relative_eq!(tp.gamma, 10.0, max_relative = 1e-14);
        let f = rr_force_lcfa(&tp, &c);
        let v = tp.xdot.norm();
        assert_relative_eq!(f.norm() / v, c.alpha / 3.0 * 1e4 * 1e-6, max_relative = 1e-12);
        let zero = rr_force_lcfa(&TrajectoryPoint::new(tp.xdot, Vector3::zeros()).unwrap(), &c);
        assert_eq!(zero, Vector3::zeros());
    }

    #[test]
    fn kernel_matches_lcfa_on_circle() {
        let c = ModelConstants::physical();
        let traj = CircularTrajectory::new(10.0, 1e-3).unwrap();
        let lcfa = rr_force_lcfa(&traj.point(0.0), &c);
        let a = rr_kernel_numeric(&traj, 0.0, &c, 1e-3).unwrap();
        let b = rr_kernel_numeric(&traj, 0.0, &c, 5e-4).unwrap();
        assert!((a - lcfa).norm() < 0.05 * lcfa.norm());
        assert!((a - b).norm() < 0.01 * a.norm());
    }

    #[test]
    fn kernel_vanishes_on_straight_line() {
        let c = ModelConstants::physical();
        let traj = StraightTrajectory {
            x0: Vector3::zeros(),
            v: Vector3::new(0.5, 0.2, 0.0),
        };
        assert_eq!(rr_kernel_numeric(&traj, 3.0, &c, 1e-3).unwrap(), Vector3::zeros());
    }

    proptest! {
        #[test]
        fn closed_form_matches_matrix_route(p in momentum(), k in photon(), emit in any::<bool>(), lambda in 1u8..=2) {
            let eta = if emit { Sign::Plus } else { Sign::Minus };
            let ch = channel(eta, k, lambda);
            let r = emission_amplitude_r(&ch, &p, 1.0);
            prop_assume!(r.is_ok());
            let r = r.unwrap();
            let direct = matrix_route(&ch, &p, 1.0);
            prop_assert!(max_abs(&(r - direct)) < 1e-12, "{}", max_abs(&(r - direct)));
        }

        #[test]
        fn spin_trace_identity(p in momentum(), k1 in photon(), k2 in photon(), l1 in 1u8..=2, l2 in 1u8..=2) {
            let c1 = channel(Sign::Plus, k1, l1);
            let c2 = channel(Sign::Minus, k2, l2);
            prop_assume!(recoil_amplitudes(&c1, &p, 1.0).is_ok());
            let r1 = emission_amplitude_r(&c1, &p, 1.0).unwrap();
            let r2 = emission_amplitude_r(&c2, &p, 1.0).unwrap();
            let a1 = recoil_amplitudes(&c1, &p, 1.0).unwrap();
            let a2 = recoil_amplitudes(&c2, &p, 1.0).unwrap();
            let lhs = (r2.adjoint() * r1).trace() * Complex64::new(0.5, 0.0);
            let rhs = c2.polarization().dot(&a2.a) * c1.polarization().dot(&a1.a) + a2.b.dot(&a1.b);
            prop_assert!((lhs - Complex64::new(rhs, 0.0)).norm() < 1e-12);
        }

        #[test]
        fn polarization_completeness(k in photon()) {
            let [e1, e2] = polarization_basis(&k);
            let n = k.normalize();
            let sum = e1 * e1.transpose() + e2 * e2.transpose() + n * n.transpose();
            prop_assert!((sum - nalgebra::Matrix3::identity()).abs().max() < 1e-14);
            prop_assert!(e1.dot(&k).abs() < 1e-14 * k.norm());
            prop_assert!(e1.dot(&e2).abs() < 1e-14);
        }

        #[test]
        fn amplitude_is_bounded(p in momentum(), k in photon(), lambda in 1u8..=2) {
            let ch = channel(Sign::Plus, k, lambda);
            if let Ok(r) = emission_amplitude_r(&ch, &p, 1.0) {
                let sv = nalgebra::SVD::new(r, false, false).singular_values;
                prop_assert!(sv.max() <= 2.0);
            }
        }

        #[test]
        fn lcfa_is_friction(vx in -0.6f64..0.6, vy in -0.6f64..0.6, ax in -1.0f64..1.0, az in 0.01f64..1.0) {
            let c = ModelConstants::physical();
            let v = Vector3::new(vx, vy, 0.0);
            prop_assume!(v.norm() > 1e-3);
            let tp = TrajectoryPoint::new(v, Vector3::new(ax, 0.0, az)).unwrap();
            let f = rr_force_lcfa(&tp, &c);
            prop_assert!(f.dot(&v) < 0.0);
            prop_assert!((f.normalize() + v.normalize()).norm() < 1e-12);
        }
    }
}
