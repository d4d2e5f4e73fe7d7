// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! The acceptance suite. Each criterion measures its quantities against
//! independent oracles and returns the raw numbers with pinned tolerances;
//! nothing here asserts.

use nalgebra::{DMatrix, Matrix3, Vector2, Vector3, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};

use crate::classical::{
    circular_orbit_state, cyclotron_period, force_terms, integrate, integrate_with, FieldConfig, ModelKind,
    ParticleState,
};
use crate::dirac::{anticommutator, block, fw_unitary, gamma_basis, max_abs, pauli, Momentum3, SpinorMatrix};
use crate::error::Result;
use crate::io::{Check, Table};
use crate::kinetics::{
    estimate_ratios, langevin_ensemble, reduced_ode, Axis, Ensemble, FokkerPlanck, FrozenCoefficients, KineticModel,
    Moments, PhaseSpaceGrid, PhaseSpaceScalarField,
};
use crate::lindblad::{purity_rate, run_demo, vf_operator, vf_strength, DemoConfig, DephasingChannel, Sign};
use crate::radiation::{rr_force_lcfa, rr_kernel_numeric, CircularTrajectory, TrajectoryPoint};
use crate::units::ModelConstants;
use crate::wigner::{
    marginal_residuals, moyal_star, wigner_transform, GaussianPacket, Grid1, PhaseSpaceSymbol, Spinor,
    SpinorWavefunction,
};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub parts: Vec<Check>,
    /// Data produced on the way, written out by `validate`.
    pub tables: Vec<(String, Table)>,
}

impl Criterion {
    fn new(id: u8, name: &'static str) -> Self {
        Criterion {
            id,
            name,
            parts: Vec::new(),
            tables: Vec::new(),
        }
    }

    fn part(&mut self, c: Check) {
        self.parts.push(c);
    }

    pub fn passed(&self) -> bool {
        !self.parts.is_empty() && self.parts.iter().all(|c| c.passed)
    }

    /// One report entry: measured is the worst measured/tolerance ratio.
    pub fn summary(&self) -> Check {
        let worst = self
            .parts
            .iter()
            .map(|c| if c.tolerance > 0.0 { c.measured / c.tolerance } else if c.measured == 0.0 { 0.0 } else { f64::INFINITY })
            .fold(0.0, f64::max);
        let detail = self
            .parts
            .iter()
            .map(|c| {
                let mut s = format!("{}: {:e} (tol {:e}) {}", c.name, c.measured, c.tolerance, if c.passed { "ok" } else { "FAIL" });
                if !c.detail.is_empty() {
                    s.push_str(&format!(" [{}]", c.detail));
                }
                s
            })
            .collect::<Vec<_>>()
            .join("; ");
        Check {
            name: format!("{:02} {}", self.id, self.name),
            measured: worst,
            tolerance: 1.0,
            passed: self.passed(),
            detail,
        }
    }

    /// `PASS`/`FAIL` line for terminal output.
    pub fn line(&self) -> String {
        let s = self.summary();
        format!("[{}] {}: {}", if s.passed { "PASS" } else { "FAIL" }, s.name, s.detail)
    }
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];
const SEED: u64 = 0x5EED_1A7E;

/// 100 momenta with uniform direction and |p| uniform in [0, 10m].
fn sample_momenta(m: f64) -> Vec<Momentum3> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..100)
        .map(|_| {
            let dir: [f64; 3] = UnitSphere.sample(&mut rng);
            let r = rng.random_range(0.0..10.0 * m);
            Momentum3(Vector3::from(dir) * r)
        })
        .collect()
}

pub fn criterion_1() -> Criterion {
    let mut c = Criterion::new(1, "gamma algebra");
    let b = gamma_basis();
    let id = SpinorMatrix::identity();
    let mut clifford = 0.0f64;
    let mut g5 = 0.0f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let want = if mu == nu { id * re(2.0 * METRIC[mu]) } else { SpinorMatrix::zeros() };
            clifford = clifford.max(max_abs(&(anticommutator(&b.gamma[mu], &b.gamma[nu]) - want)));
        }
        g5 = g5.max(max_abs(&anticommutator(&b.gamma5, &b.gamma[mu])));
    }
    c.part(Check::at_most("{γ^μ,γ^ν} − 2η^{μν}", clifford, 1e-12));
    c.part(Check::at_most("{γ₅,γ^μ}", g5, 1e-12));
    c
}

pub fn criterion_2() -> Criterion {
    let mut c = Criterion::new(2, "FW diagonalization");
    let m = 1.0;
    let b = gamma_basis();
    let [sx, sy, sz] = pauli();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut diag = 0.0f64;
    let mut spinor = 0.0f64;
    for p in sample_momenta(m) {
        let u = fw_unitary(&p, m);
        let e = p.energy(m);
        let h = crate::dirac::free_hamiltonian(&p, m);
        diag = diag.max(max_abs(&(u * h * u.adjoint() - b.gamma[0] * re(e))));
        // U†(Φ, 0) = √((π₀+m)/2π₀)·(Φ, σ·π Φ/(π₀+m)).
        let z: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let phi = Vector2::new(Complex64::new(z[0], z[1]), Complex64::new(z[2], z[3])).normalize();
        let lhs = u.adjoint() * Vector4::new(phi[0], phi[1], re(0.0), re(0.0));
        let sp = sx * re(p.0.x) + sy * re(p.0.y) + sz * re(p.0.z);
        let lower = sp * phi / re(e + m);
        let k = re(((e + m) / (2.0 * e)).sqrt());
        let rhs = Vector4::new(phi[0], phi[1], lower[0], lower[1]) * k;
        spinor = spinor.max(max_abs(&(lhs - rhs)));
    }
    c.part(Check::at_most("‖U H₀ U† − γ⁰π₀‖ over 100 momenta", diag, 1e-10));
    c.part(Check::at_most("U†(Φ,0) spinor identity", spinor, 1e-10));
    c
}

pub fn criterion_3() -> Criterion {
    let mut c = Criterion::new(3, "VF block structure");
    let m = 1.0;
    let mut off = 0.0f64;
    let mut sv = 0.0f64;
    for p in sample_momenta(m) {
        let u = fw_unitary(&p, m);
        let f = vf_strength(&p, m);
        for (sign, target) in [(Sign::Plus, (0, 1)), (Sign::Minus, (1, 0))] {
            let w = u * vf_operator(sign, &p, m) * u.adjoint();
            for r in 0..2 {
                for col in 0..2 {
                    if (r, col) != target {
                        off = off.max(max_abs(&block(&w, r, col)));
                    }
                }
            }
            let svd = block(&w, target.0, target.1).singular_values();
            sv = sv.max(svd.iter().map(|s| (s - f).abs()).fold(0.0, f64::max));
        }
    }
    c.part(Check::at_most("FW V± outside the target block", off, 1e-10));
    c.part(Check::at_most("|singular values − f(p)|", sv, 1e-10));
    c
}

pub fn lindblad_table(samples: &[crate::lindblad::DemoSample]) -> Table {
    let mut t = Table::new(["t", "pop_pes", "pop_nes", "trace", "min_eig", "purity"]);
    for s in samples {
        t.rows.push(vec![s.t, s.pop_pes, s.pop_nes, s.trace, s.min_eig, s.purity]);
    }
    t
}

pub fn criterion_4() -> Result<Criterion> {
    let mut c = Criterion::new(4, "Lindblad integrity");
    let cfg = DemoConfig {
        momentum: Momentum3::new(0.0, 0.0, 1.0),
        m: 1.0,
        sigma_plus: 0.5,
        sigma_minus: 0.0,
        dt: 0.01,
        steps: 10_000,
    };
    let s = run_demo(&cfg)?;
    let drift = s.iter().map(|x| (x.trace - 1.0).abs()).fold(0.0, f64::max);
    let neg = s.iter().map(|x| -x.min_eig).fold(0.0, f64::max).max(0.0);
    let last = s.last().expect("demo returns samples");
    let rate = cfg.sigma_plus * vf_strength(&cfg.momentum, cfg.m).powi(2);
    // −ln p_NES(t)/t at t = dt and 2dt, extrapolated to t → 0.
    let r1 = -s[1].pop_nes.ln() / s[1].t;
    let r2 = -s[2].pop_nes.ln() / s[2].t;
    let r0 = 2.0 * r1 - r2;
    c.part(Check::at_most("max |Tr ρ − 1| over 10⁴ steps", drift, 1e-8));
    c.part(Check::at_most("max(−λ_min)", neg, 1e-8));
    c.part(Check::at_most("|1 − PES population| at t = 100", (1.0 - last.pop_pes).abs(), 1e-6));
    c.part(Check::at_most("initial rate vs σ₊f²", rel(r0, rate), 0.01).with_detail(format!("rate {r0} vs {rate}")));
    c.tables.push(("lindblad".into(), lindblad_table(&s)));
    Ok(c)
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))
    });
    (&a + a.adjoint()) * re(0.5)
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))
    });
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    rho / tr
}

fn purity(rho: &DMatrix<Complex64>) -> f64 {
    (rho * rho).trace().re
}

pub fn criterion_5() -> Result<Criterion> {
    let mut c = Criterion::new(5, "renormalization dissipator");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let (steps, dt) = (20, 1e-3);
    let mut rise = 0.0f64;
    let mut formula = 0.0f64;
    for _ in 0..100 {
        let n = 4;
        let v = random_hermitian(&mut rng, n);
        let gamma = rng.random_range(0.1..2.0);
        let mut rho = random_state(&mut rng, n);
        let ch = DephasingChannel::new(&v, gamma)?;
        for _ in 0..steps {
            let mid = ch.apply(&rho, 0.5 * dt);
            let next = ch.apply(&mid, 0.5 * dt);
            let (p0, p1) = (purity(&rho), purity(&next));
            rise = rise.max(p1 - p0);
            // Simpson on the exact trajectory.
            let predicted =
                dt / 6.0 * (purity_rate(&rho, &v, gamma)? + 4.0 * purity_rate(&mid, &v, gamma)? + purity_rate(&next, &v, gamma)?);
            formula = formula.max((p1 - p0 - predicted).abs());
            rho = next;
        }
    }
    c.part(Check::at_most("max per-step purity increase", rise.max(0.0), 1e-15).with_detail("100 random (V, ρ), 20 steps each"));
    c.part(Check::at_most("|ΔTr ρ² − ∫(dTr ρ²/dt)dt| per step", formula, 1e-10));
    Ok(c)
}

pub fn criterion_6() -> Criterion {
    let mut c = Criterion::new(6, "friction closed form");
    let consts = ModelConstants::physical();
    let gamma = 10.0f64;
    let speed = (1.0 - 1.0 / (gamma * gamma)).sqrt();
    let v = Vector3::new(0.0, speed, 0.0);
    let acc = Vector3::new(-1e-3, 0.0, 0.0);
    let tp = TrajectoryPoint::new(v, acc).expect("subluminal");
    let f = rr_force_lcfa(&tp, &consts);
    let larmor = 2.0 * consts.alpha / 3.0 * gamma.powi(4) * acc.norm_squared() * speed * speed;
    c.part(
        Check::at_most("|f·v| vs (2α/3)γ⁴|ẍ|²|v|²", rel(f.dot(&v).abs(), larmor), 1e-12)
            .with_detail(format!("ratio {}", f.dot(&v).abs() / larmor)),
    );

    let field = FieldConfig::uniform(Vector3::new(0.0, 0.0, 1e-3 / consts.charge()));
    let s = circular_orbit_state(gamma, &field, &consts).expect("valid orbit");
    let ft = force_terms(&s.x, &s.pi, &field, &consts);
    let xddot = ft.lorentz / (ft.gamma * consts.m);
    let f = rr_force_lcfa(&TrajectoryPoint::new(ft.v, xddot).expect("subluminal"), &consts);
    let target = consts.tau0 * ft.gamma.powi(2) * ft.lorentz.norm_squared() * ft.v.norm() / consts.m;
    c.part(
        Check::at_most("|f| vs τ₀γ²F²|v|/m on the circular orbit", rel(f.norm(), target), 1e-12)
            .with_detail(format!("ratio {}", f.norm() / target)),
    );
    c
}

pub fn criterion_7() -> Result<Criterion> {
    let mut c = Criterion::new(7, "kernel vs closed form");
    let consts = ModelConstants::physical();
    let traj = CircularTrajectory::new(10.0, 1e-3)?;
    let lcfa = rr_force_lcfa(&traj.point(0.0), &consts);
    let a = rr_kernel_numeric(&traj, 0.0, &consts, 1e-3)?;
    let b = rr_kernel_numeric(&traj, 0.0, &consts, 5e-4)?;
    c.part(Check::at_most("‖kernel − LCFA‖/‖LCFA‖", (a - lcfa).norm() / lcfa.norm(), 0.05));
    c.part(Check::at_most("regulator sensitivity (reg_eps halved)", (a - b).norm() / a.norm(), 0.01));
    Ok(c)
}

pub fn trajectory_table(states: &[ParticleState], m: f64) -> Table {
    let mut t = Table::new(["t", "x1", "x2", "x3", "pi1", "pi2", "pi3", "gamma"]);
    for s in states {
        t.rows.push(vec![s.t, s.x.x, s.x.y, s.x.z, s.pi.x, s.pi.y, s.pi.z, s.gamma(m)]);
    }
    t
}

/// π with v(π) + δv(π) = u, by fixed-point iteration.
fn matched_momentum(u: &Vector3<f64>, x: &Vector3<f64>, field: &FieldConfig, consts: &ModelConstants) -> Vector3<f64> {
    let p_of = |w: Vector3<f64>| w * (consts.m / (1.0 - w.norm_squared()).sqrt());
    let mut pi = p_of(*u);
    for _ in 0..60 {
        let dv = force_terms(x, &pi, field, consts).delta_v;
        pi = p_of(u - dv);
    }
    pi
}

fn max_deviation(a: &[ParticleState], b: &[ParticleState]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p.x - q.x).norm()).fold(0.0, f64::max)
}

pub fn criterion_8() -> Result<Criterion> {
    let mut c = Criterion::new(8, "LL vs VF-corrected equivalence");
    let base = ModelConstants::physical();
    let e = base.charge();
    let gamma0 = 10.0;
    let bz = 1e-3 * base.m / e;
    let uniform = FieldConfig::uniform(Vector3::new(0.0, 0.0, bz));
    let s0 = circular_orbit_state(gamma0, &uniform, &base)?;
    let radius = s0.x.x;
    let mut g = Matrix3::zeros();
    g[(0, 2)] = 0.1 * bz / radius;
    let field = FieldConfig::new(Vector3::new(0.0, 0.0, bz), g)?;
    let period = cyclotron_period(&s0, &field, &base)?;
    let steps = 4000;
    let dt = period / steps as f64;
    let dev = |tau0: f64| -> Result<f64> {
        let consts = base.with_tau0(tau0);
        let ll = integrate(ModelKind::LandauLifshitz, &s0, &field, &consts, dt, steps)?;
        let u0 = s0.velocity(consts.m);
        let vf0 = ParticleState::new(0.0, s0.x, matched_momentum(&u0, &s0.x, &field, &consts));
        let vf = integrate(ModelKind::VfEhrenfest, &vf0, &field, &consts, dt, steps)?;
        Ok(max_deviation(&ll, &vf))
    };
    let (d1, d2) = (dev(base.tau0)?, dev(0.5 * base.tau0)?);
    let ratio = d1 / d2;
    c.part(
        Check::at_most("|ratio − 4| of max deviation when τ₀ halves", (ratio - 4.0).abs(), 0.8)
            .with_detail(format!("ratio {ratio}, deviations {d1:e} / {d2:e}")),
    );
    Ok(c)
}

pub fn criterion_9() -> Result<Criterion> {
    let mut c = Criterion::new(9, "LL energy loss");
    let consts = ModelConstants::physical();
    let field = FieldConfig::uniform(Vector3::new(0.0, 0.0, 1e-3 * consts.m / consts.charge()));
    let s0 = circular_orbit_state(10.0, &field, &consts)?;
    let period = cyclotron_period(&s0, &field, &consts)?;
    let steps = 2000;
    let dt = 10.0 * period / steps as f64;
    let coarse = integrate(ModelKind::LandauLifshitz, &s0, &field, &consts, dt, steps)?;
    let mut fine = Vec::with_capacity(steps + 1);
    integrate_with(ModelKind::LandauLifshitz, &s0, &field, &consts, dt / 100.0, steps * 100, 100, |s| fine.push(*s))?;
    let worst = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| rel(a.gamma(consts.m), b.gamma(consts.m)))
        .fold(0.0, f64::max);
    let lorentz = integrate(ModelKind::Lorentz, &s0, &field, &consts, dt, steps)?;
    c.part(
        Check::at_most("max |γ_dt/γ_ref − 1| over 10 periods", worst, 1e-6)
            .with_detail(format!("γ: 10 → {}", coarse.last().expect("samples").gamma(consts.m))),
    );
    c.tables.push(("trajectory_ll".into(), trajectory_table(&coarse, consts.m)));
    c.tables.push(("trajectory_lorentz".into(), trajectory_table(&lorentz, consts.m)));
    Ok(c)
}

/// Moments table columns for a `dims`-dimensional kinetic run.
pub fn moments_columns(dims: usize) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    for prefix in ["mean", "var"] {
        for a in 1..=dims {
            cols.push(format!("{prefix}_x{a}"));
        }
        for a in 1..=dims {
            cols.push(format!("{prefix}_pi{a}"));
        }
    }
    cols
}

pub fn moments_row(t: f64, m: &Moments, dims: usize) -> Vec<f64> {
    let mut row = vec![t];
    for a in 0..dims {
        row.push(m.mean(a));
    }
    for a in 0..dims {
        row.push(m.mean(3 + a));
    }
    for a in 0..dims {
        row.push(m.var(a));
    }
    for a in 0..dims {
        row.push(m.var(3 + a));
    }
    row
}

/// Grid dump rows (t, x.., pi.., f).
pub fn grid_rows(table: &mut Table, t: f64, f: &PhaseSpaceScalarField) {
    let g = f.grid();
    for (idx, v) in f.values().iter().enumerate() {
        let y = g.center(idx);
        let mut row = vec![t];
        row.extend_from_slice(&y[..2 * g.dims()]);
        row.push(*v);
        table.rows.push(row);
    }
}

pub fn grid_columns(dims: usize) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    if dims == 1 {
        cols.extend(["x".to_string(), "pi".to_string()]);
    } else {
        cols.extend((1..=dims).map(|a| format!("x{a}")));
        cols.extend((1..=dims).map(|a| format!("pi{a}")));
    }
    cols.push("f".into());
    cols
}

/// FP run to time `t_end`, returning moments sampled every `every` steps.
fn fp_run(
    grid: &PhaseSpaceGrid,
    model: &KineticModel,
    mean: &[f64; 6],
    std: &[f64; 6],
    t_end: f64,
) -> Result<(PhaseSpaceScalarField, PhaseSpaceScalarField, Moments, Moments)> {
    let op = FokkerPlanck::new(grid, model)?;
    let mut f = PhaseSpaceScalarField::gaussian(grid.clone(), mean, std)?;
    let f0 = f.clone();
    let m0 = f.moments(model)?;
    let steps = (t_end / (0.5 * op.max_stable_dt())).ceil() as usize;
    let dt = t_end / steps as f64;
    for _ in 0..steps {
        op.step(&mut f, dt)?;
    }
    let m1 = f.moments(model)?;
    Ok((f0, f, m0, m1))
}

pub fn criterion_10() -> Result<Criterion> {
    let mut c = Criterion::new(10, "FP and MC equivalence");
    let none = FieldConfig::uniform(Vector3::zeros());

    // Frozen coefficients.
    let (v, force, gamma, tau0, t_end) = (0.5, 0.8, 2.0, 0.05, 2.0);
    let model = KineticModel::new(1, none, ModelConstants::physical().with_tau0(tau0))?.with_frozen(FrozenCoefficients {
        v: Vector3::new(v, 0.0, 0.0),
        force: Vector3::new(force, 0.0, 0.0),
        gamma,
    });
    let grid = PhaseSpaceGrid::new(&[Axis::new(-4.0, 4.0, 160)?], &[Axis::new(-4.0, 4.0, 160)?])?;
    let (mean, std) = ([-1.0, -1.0, 0., 0., 0., 0.], [0.5, 0.5, 0., 0., 0., 0.]);
    let (_, _, m0, m1) = fp_run(&grid, &model, &mean, &std, t_end)?;
    let exp_pp = gamma * tau0 * force * force;
    let exp_xp = gamma * tau0 * v * force;
    let slope_pp = (m1.var(3) - m0.var(3)) / t_end;
    let slope_xp = (m1.cov[(0, 3)] - m0.cov[(0, 3)]) / t_end;
    c.part(Check::at_most("FP Var[π] slope vs γτ₀F² (relative)", rel(slope_pp, exp_pp), 0.02));
    c.part(Check::at_most("FP Cov[x,π] slope vs γτ₀vF (relative)", rel(slope_xp, exp_xp), 0.02));

    let ens = Ensemble::gaussian(&model, 100_000, &[0.0; 6], &[0.0; 6], SEED)?;
    let out = langevin_ensemble(&ens, &model, 0.02, 100)?;
    let mm = out.moments()?;
    let t_mc = 2.0;
    c.part(Check::at_most(
        "MC Var[π] − γτ₀F²t in standard errors",
        (mm.var(3) - exp_pp * t_mc).abs() / mm.stderr_cov(3, 3),
        3.0,
    ));
    c.part(Check::at_most(
        "MC Cov[x,π] − γτ₀vFt in standard errors",
        (mm.cov[(0, 3)] - exp_xp * t_mc).abs() / mm.stderr_cov(0, 3),
        3.0,
    ));

    // Non-frozen 1x + 1π: B_z(x) = g·x with fixed π_y, harmonic in x.
    let (model, grids, mean, std, t_end) = full_scenario()?;
    let (f0, f_fine, _, fine) = fp_run(&grids[0], &model, &mean, &std, t_end)?;
    let (_, _, _, coarse) = fp_run(&grids[1], &model, &mean, &std, t_end)?;
    let ens = Ensemble::gaussian(&model, 100_000, &mean, &std, SEED ^ 10)?;
    let mc_dt = 2.5e-3;
    let mc_steps = (t_end / mc_dt).round() as usize;
    let out = langevin_ensemble(&ens, &model, t_end / mc_steps as f64, mc_steps)?;
    let mc = out.moments()?;
    let ode = reduced_ode(&model, &mean, t_end / 2000.0, 2000)?;
    let y_ode = ode.last().expect("samples");
    for (name, i, k) in [("x", 0, 0), ("π", 3, 1)] {
        let grid_err = (fine.mean(i) - coarse.mean(i)).abs();
        let tol = (2.0 * grid_err).max(3.0 * mc.stderr_mean(i));
        let (a, b, o) = (fine.mean(i), mc.mean(i), y_ode[k]);
        let worst = (a - b).abs().max((a - o).abs()).max((b - o).abs());
        c.part(
            Check::at_most(format!("first moment ⟨{name}⟩: FP, MC, ODE spread"), worst, tol)
                .with_detail(format!("FP {a}, MC {b}, ODE {o}, grid error {grid_err:e}")),
        );
    }

    let mut fp_tab = Table::new(moments_columns(1));
    fp_tab.rows.push(moments_row(0.0, &f0.moments(&model)?, 1));
    fp_tab.rows.push(moments_row(t_end, &fine, 1));
    let mut mc_tab = Table::new(moments_columns(1));
    mc_tab.rows.push(moments_row(0.0, &ens.moments()?, 1));
    mc_tab.rows.push(moments_row(t_end, &mc, 1));
    let mut dump = Table::new(grid_columns(1));
    grid_rows(&mut dump, 0.0, &f0);
    grid_rows(&mut dump, t_end, &f_fine);
    c.tables.push(("moments_fp".into(), fp_tab));
    c.tables.push(("moments_mc".into(), mc_tab));
    c.tables.push(("grid_dump".into(), dump));
    Ok(c)
}

type FullScenario = (KineticModel, [PhaseSpaceGrid; 2], [f64; 6], [f64; 6], f64);

/// Harmonic x-motion in B_z = g·x with π_y held at √99 (γ ≈ 10),
/// ω = 0.5 and an enlarged τ₀, on a fine grid and one with half the cells.
pub fn full_scenario() -> Result<FullScenario> {
    let base = ModelConstants::physical().with_tau0(1e-3);
    let e = base.charge();
    let py = 99f64.sqrt();
    let gamma = 10.0;
    let vy = py / gamma;
    let omega = 0.5;
    let g_abs = omega * omega * gamma * base.m / (e * vy);
    let mut grad = Matrix3::zeros();
    // F_x = e v_y B_z = e v_y g x must be restoring.
    grad[(0, 2)] = -g_abs;
    let field = FieldConfig::new(Vector3::zeros(), grad)?;
    let model = KineticModel::new(1, field, base)?.with_fixed(Vector3::zeros(), Vector3::new(0.0, py, 0.0));
    let mk = |nx: usize, np: usize| -> Result<PhaseSpaceGrid> {
        PhaseSpaceGrid::new(&[Axis::new(-0.6, 0.6, nx)?], &[Axis::new(-2.0, 1.0, np)?])
    };
    let grids = [mk(240, 120)?, mk(120, 60)?];
    Ok((model, grids, [0.2, 0.0, 0., 0., 0., 0.], [0.03, 0.15, 0., 0., 0., 0.], 3.0))
}

pub fn criterion_11() -> Result<Criterion> {
    let mut c = Criterion::new(11, "diffusion ratio estimates");
    let consts = ModelConstants::physical();
    let r = estimate_ratios(1e-3, 10.0, 1.0, &consts)?;
    let want = [1.0, consts.alpha * 0.1, 0.1];
    let got = [r.dq_over_dc, r.frad_over_f, r.rr_over_diff];
    let worst = got.iter().zip(&want).map(|(a, b)| rel(*a, *b)).fold(0.0, f64::max);
    c.part(
        Check::at_most("relative deviation from (1, α/10, 1/10)", worst, 1e-12)
            .with_detail(format!("({}, {}, {})", got[0], got[1], got[2])),
    );
    Ok(c)
}

pub fn wigner_table(w: &crate::wigner::WignerField) -> Table {
    let mut t = Table::new(["x", "pi", "W0"]);
    t.rows.extend(w.rows().map(|(x, p, v)| vec![x, p, v]));
    t
}

pub fn criterion_12() -> Result<Criterion> {
    let mut c = Criterion::new(12, "Wigner marginals and Moyal product");
    let grid = Grid1::new(-12.0, 12.0, 192)?;
    let up = Spinor::new(re(1.0), re(0.0), re(0.0), re(0.0));
    let single = [GaussianPacket {
        center: 0.5,
        width: 1.0,
        momentum: 0.7,
        weight: 1.0,
    }];
    let double = [
        GaussianPacket {
            center: -3.0,
            width: 0.8,
            momentum: 1.0,
            weight: 1.0,
        },
        GaussianPacket {
            center: 2.5,
            width: 1.1,
            momentum: -0.5,
            weight: 0.7,
        },
    ];
    let mut keep = None;
    for (label, packets) in [("Gaussian", &single[..]), ("two-Gaussian", &double[..])] {
        let psi = SpinorWavefunction::gaussian_sum(grid, packets, up)?;
        let w = wigner_transform(&psi, |_| 0.0, 0.0)?;
        let r = marginal_residuals(&psi, &w);
        c.part(Check::at_most(format!("{label}: ∫W⁰dπ − |ψ|²"), r.x_marginal, 1e-6));
        c.part(Check::at_most(format!("{label}: ∫W⁰dx − |ψ̃|²"), r.pi_marginal, 1e-6));
        keep = Some(w);
    }

    let b = Vector3::new(0.2, -0.1, 0.4);
    let field = FieldConfig::uniform(b);
    let (e, hbar) = (0.3, 0.05);
    let x = Vector3::new(0.3, -1.2, 2.0);
    let pi = Vector3::new(1.5, 0.2, -0.7);
    let comm = |f: &PhaseSpaceSymbol, g: &PhaseSpaceSymbol, field: &FieldConfig, h: f64| -> Result<Complex64> {
        let fg = moyal_star(f, g, field, e, h, 1)?.eval(&x, &pi)[(0, 0)];
        let gf = moyal_star(g, f, field, e, h, 1)?.eval(&x, &pi)[(0, 0)];
        Ok(fg - gf)
    };
    let mut canon = 0.0f64;
    let mut kin = 0.0f64;
    for k in 0..3 {
        let z = comm(&PhaseSpaceSymbol::position(k), &PhaseSpaceSymbol::momentum(k), &field, hbar)?;
        canon = canon.max((z - Complex64::new(0.0, hbar)).norm());
    }
    for (a, bb, r) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let z = comm(&PhaseSpaceSymbol::momentum(a), &PhaseSpaceSymbol::momentum(bb), &field, hbar)?;
        kin = kin.max((z - Complex64::new(0.0, hbar * e * b[r])).norm());
    }
    c.part(Check::at_most("x⋆π − π⋆x − iħ", canon, 0.0));
    c.part(Check::at_most("[π_a,π_b]⋆ − iħε_{abr}eB_r", kin, 1e-12));

    // e^{ax}⋆e^{bπ} commutator is exactly 2i sin(ħab/2)e^{ax+bπ}.
    let (a, bb) = (1.3, 0.9);
    let f = PhaseSpaceSymbol::exponential(Vector3::new(re(a), re(0.0), re(0.0)), Vector3::zeros());
    let g = PhaseSpaceSymbol::exponential(Vector3::zeros(), Vector3::new(re(bb), re(0.0), re(0.0)));
    let zero = FieldConfig::uniform(Vector3::zeros());
    let err = |h: f64| -> Result<f64> {
        let trunc = comm(&f, &g, &zero, h)? / Complex64::new(0.0, h);
        let exact = 2.0 * (h * a * bb / 2.0).sin() / h * (a * x.x + bb * pi.x).exp();
        Ok((trunc - re(exact)).norm())
    };
    let ratio = err(0.2)? / err(0.1)?;
    c.part(Check::at_most("|Richardson ratio − 4| halving ħ", (ratio - 4.0).abs(), 0.2).with_detail(format!("ratio {ratio}")));
    if let Some(w) = keep {
        c.tables.push(("wigner".into(), wigner_table(&w)));
    }
    Ok(c)
}

/// Runs criteria 1–12. A criterion whose computation errors is reported
/// as failed with the error message.
pub fn run_all() -> Vec<Criterion> {
    let wrap = |id: u8, name: &'static str, r: Result<Criterion>| match r {
        Ok(c) => c,
        Err(e) => {
            let mut c = Criterion::new(id, name);
            c.part(Check {
                name: "computation".into(),
                measured: f64::INFINITY,
                tolerance: 0.0,
                passed: false,
                detail: e.to_string(),
            });
            c
        }
    };
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        wrap(4, "Lindblad integrity", criterion_4()),
        wrap(5, "renormalization dissipator", criterion_5()),
        criterion_6(),
        wrap(7, "kernel vs closed form", criterion_7()),
        wrap(8, "LL vs VF-corrected equivalence", criterion_8()),
        wrap(9, "LL energy loss", criterion_9()),
        wrap(10, "FP and MC equivalence", criterion_10()),
        wrap(11, "diffusion ratio estimates", criterion_11()),
        wrap(12, "Wigner marginals and Moyal product", criterion_12()),
    ]
}
