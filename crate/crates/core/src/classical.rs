// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Classical equations of motion in a static magnetic field with optional
//! constant gradient: Lorentz, Landau–Lifshitz, the VF-corrected Ehrenfest
//! system and its variant without the position fluctuation.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::ModelConstants;

/// B(x) = B0 + gradBᵀ(x − x0), gradB\[i\]\[j\] = ∂ᵢB_j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub b0: Vector3<f64>,
    pub grad_b: Matrix3<f64>,
    pub x0: Vector3<f64>,
    /// Reserved; must be zero.
    pub e0: Vector3<f64>,
}

impl FieldConfig {
    pub fn new(b0: Vector3<f64>, grad_b: Matrix3<f64>) -> Result<Self> {
        let f = FieldConfig {
            b0,
            grad_b,
            x0: Vector3::zeros(),
            e0: Vector3::zeros(),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn uniform(b0: Vector3<f64>) -> Self {
        FieldConfig {
            b0,
            grad_b: Matrix3::zeros(),
            x0: Vector3::zeros(),
            e0: Vector3::zeros(),
        }
    }

    pub fn with_origin(mut self, x0: Vector3<f64>) -> Self {
        self.x0 = x0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.b0.iter().chain(self.grad_b.iter()).chain(self.x0.iter()).all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("field entries must be finite"));
        }
        let tr = self.grad_b.trace();
        if tr.abs() > 1e-12 * (1.0 + self.grad_b.abs().max()) {
            return Err(Error::domain(format!("divergence-free violation: trace(gradB) = {tr}")));
        }
        if self.e0 != Vector3::zeros() {
            return Err(Error::domain("electric field is not supported; E0 must be zero"));
        }
        Ok(())
    }

    pub fn is_uniform(&self) -> bool {
        self.grad_b == Matrix3::zeros()
    }

    pub fn b_at(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.b0 + self.grad_b.transpose() * (x - self.x0)
    }

    /// (u·∇)B.
    pub fn directional(&self, u: &Vector3<f64>) -> Vector3<f64> {
        self.grad_b.transpose() * u
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Lorentz,
    LandauLifshitz,
    VfEhrenfest,
    SokolovVariant,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Lorentz,
        ModelKind::LandauLifshitz,
        ModelKind::VfEhrenfest,
        ModelKind::SokolovVariant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Lorentz => "lorentz",
            ModelKind::LandauLifshitz => "landau-lifshitz",
            ModelKind::VfEhrenfest => "vf-ehrenfest",
            ModelKind::SokolovVariant => "sokolov-variant",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lorentz" => Ok(ModelKind::Lorentz),
            "ll" | "landau-lifshitz" | "landau_lifshitz" => Ok(ModelKind::LandauLifshitz),
            "vf" | "vf-ehrenfest" | "vf_ehrenfest" => Ok(ModelKind::VfEhrenfest),
            "sokolov" | "sokolov-variant" | "sokolov_variant" => Ok(ModelKind::SokolovVariant),
            other => Err(Error::domain(format!("unknown model '{other}'"))),
        }
    }
}

/// Classical state (t, x, π) with π the kinetic momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub t: f64,
    pub x: Vector3<f64>,
    pub pi: Vector3<f64>,
}

impl ParticleState {
    pub fn new(t: f64, x: Vector3<f64>, pi: Vector3<f64>) -> Self {
        ParticleState { t, x, pi }
    }

    pub fn pi0(&self, m: f64) -> f64 {
        (self.pi.norm_squared() + m * m).sqrt()
    }

    pub fn gamma(&self, m: f64) -> f64 {
        self.pi0(m) / m
    }

    pub fn velocity(&self, m: f64) -> Vector3<f64> {
        self.pi / self.pi0(m)
    }
}

/// Lorentz force and the VF fluctuation fields at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceTerms {
    pub v: Vector3<f64>,
    pub gamma: f64,
    pub b: Vector3<f64>,
    pub lorentz: Vector3<f64>,
    /// δv = τ₀F/(2m).
    pub delta_v: Vector3<f64>,
    /// δr = τ₀γv/2.
    pub delta_r: Vector3<f64>,
    /// f_rad = τ₀γ²F²v/m.
    pub f_rad: Vector3<f64>,
}

pub fn force_terms(x: &Vector3<f64>, pi: &Vector3<f64>, field: &FieldConfig, c: &ModelConstants) -> ForceTerms {
    let pi0 = (pi.norm_squared() + c.m * c.m).sqrt();
    let v = pi / pi0;
    let gamma = pi0 / c.m;
    let b = field.b_at(x);
    let lorentz = v.cross(&b) * c.charge();
    ForceTerms {
        v,
        gamma,
        b,
        lorentz,
        delta_v: lorentz * (0.5 * c.tau0 / c.m),
        delta_r: v * (0.5 * c.tau0 * gamma),
        f_rad: v * (c.tau0 * gamma * gamma * lorentz.norm_squared() / c.m),
    }
}

/// (dx/dt, dπ/dt).
pub fn rhs(
    model: ModelKind,
    state: &ParticleState,
    field: &FieldConfig,
    consts: &ModelConstants,
) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let e = consts.charge();
    let ft = force_terms(&state.x, &state.pi, field, consts);
    let (dx, dpi) = match model {
        ModelKind::Lorentz => (ft.v, ft.lorentz),
        ModelKind::LandauLifshitz => {
            let f = ft.lorentz;
            let vf = f.cross(&ft.b) / consts.m + ft.v.cross(&field.directional(&ft.v)) * ft.gamma;
            (ft.v, f - ft.f_rad + vf * (e * consts.tau0))
        }
        ModelKind::VfEhrenfest | ModelKind::SokolovVariant => {
            let mut f_vac = ft.delta_v.cross(&ft.b) * e;
            if model == ModelKind::VfEhrenfest {
                f_vac += ft.v.cross(&field.directional(&ft.delta_r)) * e;
            }
            (ft.v + ft.delta_v, ft.lorentz + f_vac - ft.f_rad)
        }
    };
    let speed = dx.norm();
    if !(speed < 1.0) || !dpi.iter().all(|v| v.is_finite()) {
        return Err(Error::BlowUp { t: state.t, speed });
    }
    Ok((dx, dpi))
}

/// Classic RK4 with `steps + 1` samples including the initial state.
pub fn integrate(
    model: ModelKind,
    state0: &ParticleState,
    field: &FieldConfig,
    consts: &ModelConstants,
    dt: f64,
    steps: usize,
) -> Result<Vec<ParticleState>> {
    let mut out = Vec::with_capacity(steps + 1);
    integrate_with(model, state0, field, consts, dt, steps, 1, |s| out.push(*s))?;
    Ok(out)
}

/// Streams every `stride`-th state (and the last) to `sink` without storing
/// the trajectory. Returns the final state.
#[allow(clippy::too_many_arguments)]
pub fn integrate_with(
    model: ModelKind,
    state0: &ParticleState,
    field: &FieldConfig,
    consts: &ModelConstants,
    dt: f64,
    steps: usize,
    stride: usize,
    mut sink: impl FnMut(&ParticleState),
) -> Result<ParticleState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(format!("dt must be positive, got {dt}")));
    }
    if steps == 0 {
        return Err(Error::domain("steps must be >= 1"));
    }
    let stride = stride.max(1);
    let mut s = *state0;
    sink(&s);
    for n in 0..steps {
        s = rk4_step(model, &s, field, consts, dt)?;
        if (n + 1) % stride == 0 || n + 1 == steps {
            sink(&s);
        }
    }
    Ok(s)
}

pub fn rk4_step(
    model: ModelKind,
    s: &ParticleState,
    field: &FieldConfig,
    consts: &ModelConstants,
    dt: f64,
) -> Result<ParticleState> {
    let at = |h: f64, dx: &Vector3<f64>, dp: &Vector3<f64>| ParticleState {
        t: s.t + h,
        x: s.x + dx * h,
        pi: s.pi + dp * h,
    };
    let (x1, p1) = rhs(model, s, field, consts)?;
    let (x2, p2) = rhs(model, &at(0.5 * dt, &x1, &p1), field, consts)?;
    let (x3, p3) = rhs(model, &at(0.5 * dt, &x2, &p2), field, consts)?;
    let (x4, p4) = rhs(model, &at(dt, &x3, &p3), field, consts)?;
    Ok(ParticleState {
        t: s.t + dt,
        x: s.x + (x1 + (x2 + x3) * 2.0 + x4) * (dt / 6.0),
        pi: s.pi + (p1 + (p2 + p3) * 2.0 + p4) * (dt / 6.0),
    })
}

/// 2πγm/(e|B|) at the state's energy and the field at its position.
pub fn cyclotron_period(state: &ParticleState, field: &FieldConfig, consts: &ModelConstants) -> Result<f64> {
    let b = field.b_at(&state.x).norm();
    if b == 0.0 {
        return Err(Error::domain("cyclotron period undefined for B = 0"));
    }
    Ok(2.0 * std::f64::consts::PI * state.gamma(consts.m) * consts.m / (consts.charge() * b))
}

/// State at (R, 0, 0) on the Lorentz orbit centred at the origin of a
/// field along z.
pub fn circular_orbit_state(gamma: f64, field: &FieldConfig, consts: &ModelConstants) -> Result<ParticleState> {
    if !(gamma >= 1.0) {
        return Err(Error::domain("gamma must be >= 1"));
    }
    let bz = field.b0.z;
    if bz == 0.0 {
        return Err(Error::domain("circular orbit needs B0 along z"));
    }
    let p = consts.m * (gamma * gamma - 1.0).sqrt();
    let radius = p / (consts.charge() * bz.abs());
    // e v×B must point to −x.
    let vy = if bz > 0.0 { -1.0 } else { 1.0 };
    Ok(ParticleState::new(0.0, Vector3::new(radius, 0.0, 0.0), Vector3::new(0.0, vy * p, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn consts() -> ModelConstants {
        ModelConstants::physical()
    }

    fn uniform(c: &ModelConstants, omega_c: f64) -> FieldConfig {
        FieldConfig::uniform(Vector3::new(0.0, 0.0, omega_c * c.m / c.charge()))
    }

    #[test]
    fn lorentz_orbit_closes() {
        let c = consts();
        let field = uniform(&c, 1e-3);
        let s0 = circular_orbit_state(10.0, &field, &c).unwrap();
        let period = cyclotron_period(&s0, &field, &c).unwrap();
        let steps = 4000;
        let traj = integrate(ModelKind::Lorentz, &s0, &field, &c, period / steps as f64, steps).unwrap();
        let end = traj.last().unwrap();
        let radius = s0.x.norm();
        assert!((end.x - s0.x).norm() < 1e-8 * radius);
        assert!(traj.iter().all(|s| (s.gamma(c.m) - 10.0).abs() < 1e-9));
        assert!(traj.iter().all(|s| (s.x.norm() - radius).abs() < 1e-8 * radius));
    }

    #[test]
    fn ll_friction_identity_uniform_field() {
        let c = consts();
        let field = uniform(&c, 1e-3);
        let s = ParticleState::new(0.0, Vector3::new(1.0, 2.0, 0.0), Vector3::new(3.0, -1.0, 0.0));
        let ft = force_terms(&s.x, &s.pi, &field, &c);
        let e = c.charge();
        let b2 = field.b0.norm_squared();
        let lhs = ft.lorentz.cross(&ft.b) * (e * c.tau0 / c.m);
        let rhs_ = ft.v * (-(e * e * b2 * c.tau0 / c.m));
        assert!((lhs - rhs_).norm() < 1e-14 * rhs_.norm());
    }

    #[test]
    fn vf_uniform_field_force_is_half_ll_term() {
        let c = consts();
        let field = uniform(&c, 1e-3);
        let s = ParticleState::new(0.0, Vector3::zeros(), Vector3::new(2.0, 1.0, 0.3));
        let (_, vf) = rhs(ModelKind::VfEhrenfest, &s, &field, &c).unwrap();
        let ft = force_terms(&s.x, &s.pi, &field, &c);
        let half_ll = ft.lorentz.cross(&ft.b) * (0.5 * c.charge() * c.tau0 / c.m);
        let expected = ft.lorentz + half_ll - ft.f_rad;
        assert!((vf - expected).norm() < 1e-15 * expected.norm());
    }

    #[test]
    fn sokolov_matches_vf_in_uniform_field() {
        let c = consts();
        let field = uniform(&c, 1e-3);
        let s0 = circular_orbit_state(5.0, &field, &c).unwrap();
        let a = integrate(ModelKind::VfEhrenfest, &s0, &field, &c, 10.0, 500).unwrap();
        let b = integrate(ModelKind::SokolovVariant, &s0, &field, &c, 10.0, 500).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_tau0_reduces_to_lorentz() {
        let c = consts().with_tau0(0.0);
        let mut grad = Matrix3::zeros();
        grad[(0, 0)] = 1e-7;
        grad[(1, 1)] = -1e-7;
        let field = FieldConfig::new(Vector3::new(0.0, 0.0, 1e-2), grad).unwrap();
        let s0 = ParticleState::new(0.0, Vector3::new(5.0, 0.0, 0.0), Vector3::new(0.0, 3.0, 0.5));
        let lorentz = integrate(ModelKind::Lorentz, &s0, &field, &c, 1.0, 300).unwrap();
        for model in ModelKind::ALL {
            let other = integrate(model, &s0, &field, &c, 1.0, 300).unwrap();
            assert_eq!(lorentz, other, "{model}");
        }
    }

    #[test]
    fn ll_energy_loss_rate() {
        let c = consts();
        let omega_c = 1e-3;
        let field = uniform(&c, omega_c);
        let s = circular_orbit_state(10.0, &field, &c).unwrap();
        let (_, dpi) = rhs(ModelKind::LandauLifshitz, &s, &field, &c).unwrap();
        let v = s.velocity(c.m);
        let v2 = v.norm_squared();
        let gamma = s.gamma(c.m);
        let dg = v.dot(&dpi);
        let expected = -c.tau0 * omega_c * omega_c * c.m * (gamma * gamma * v2 * v2 + v2);
        assert_relative_eq!(dg, expected, max_relative = 1e-12);
    }

    #[test]
    fn rejects_divergent_field() {
        let mut grad = Matrix3::zeros();
        grad[(0, 0)] = 1.0;
        let err = FieldConfig::new(Vector3::zeros(), grad).unwrap_err();
        assert!(err.to_string().contains("divergence-free"));
    }

    #[test]
    fn model_names_round_trip() {
        for m in ModelKind::ALL {
            assert_eq!(m.name().parse::<ModelKind>().unwrap(), m);
        }
        assert!("lad".parse::<ModelKind>().is_err());
    }

    proptest! {
        #[test]
        fn magnetic_force_does_no_work(px in -5.0f64..5.0, py in -5.0f64..5.0, pz in -5.0f64..5.0,
                                       bx in -1.0f64..1.0, by in -1.0f64..1.0, bz in -1.0f64..1.0) {
            let c = consts();
            let field = FieldConfig::uniform(Vector3::new(bx, by, bz));
            let s = ParticleState::new(0.0, Vector3::zeros(), Vector3::new(px, py, pz));
            let (dx, dp) = rhs(ModelKind::Lorentz, &s, &field, &c).unwrap();
            prop_assert!(dx.dot(&dp).abs() <= 1e-14 * (1.0 + dp.norm()));
        }
    }
}
