// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario dispatch and output bookkeeping.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde_json::{json, Value};

use super::config::{ScenarioConfig, ScenarioKind};
use super::{write_table, Check, Format, RunReport, Table, VERSION};
use crate::classical::{circular_orbit_state, integrate_with, ParticleState};
use crate::dirac::Momentum3;
use crate::error::{Error, Result};
use crate::kinetics::{estimate_ratios, langevin_ensemble, Axis, Ensemble, FokkerPlanck, KineticModel, PhaseSpaceGrid, PhaseSpaceScalarField};
use crate::lindblad::{run_demo, DemoConfig};
use crate::validation::{self, grid_columns, grid_rows, lindblad_table, moments_columns, moments_row};
use crate::wigner::{marginal_residuals, wigner_transform, GaussianPacket, Grid1, Spinor, SpinorWavefunction};

/// Files written by one run; removed again if the run fails.
#[derive(Debug)]
pub struct OutputSet {
    dir: PathBuf,
    format: Format,
    created: Vec<PathBuf>,
}

impl OutputSet {
    pub fn new(dir: &Path, format: Format) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(OutputSet {
            dir: dir.to_path_buf(),
            format,
            created: Vec::new(),
        })
    }

    fn track(&mut self, path: PathBuf) -> PathBuf {
        if !self.created.contains(&path) {
            self.created.push(path.clone());
        }
        path
    }

    /// Writes `<stem>.csv` or `<stem>.json` in the configured format.
    pub fn table(&mut self, stem: &str, table: &Table) -> Result<PathBuf> {
        let path = self.track(self.dir.join(format!("{stem}.{}", self.format.extension())));
        write_table(table, self.format, &path)?;
        Ok(path)
    }

    pub fn json(&mut self, name: &str, value: &Value) -> Result<PathBuf> {
        let path = self.track(self.dir.join(name));
        let mut text = serde_json::to_string_pretty(value).expect("values serialize");
        text.push('\n');
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.created
    }

    fn discard(&mut self) {
        for p in self.created.drain(..) {
            let _ = fs::remove_file(p);
        }
    }
}

/// Runs the configured scenario, writes its outputs and `report.json` under
/// the output directory and returns the report.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunReport> {
    let kind = cfg.kind.unwrap_or(ScenarioKind::Trajectory);
    let start = Instant::now();
    let mut out = OutputSet::new(&cfg.output.directory, cfg.output.format)?;
    let result = dispatch(kind, cfg, &mut out);
    let (checks, results) = match result {
        Ok(v) => v,
        Err(e) => {
            out.discard();
            return Err(e);
        }
    };
    let mut echo = serde_json::to_value(cfg).expect("config serializes");
    echo["kind"] = json!(kind.name());
    echo["numerics"]["dt"] = json!(cfg.numerics.dt(kind));
    echo["numerics"]["steps"] = json!(cfg.numerics.steps(kind));
    let report_path = cfg.output.directory.join("report.json");
    let mut outputs = out.files().to_vec();
    outputs.push(report_path.clone());
    let report = RunReport {
        scenario: kind.name().into(),
        version: VERSION.into(),
        wall_time_s: start.elapsed().as_secs_f64(),
        config: echo,
        checks,
        results,
        outputs,
    };
    if let Err(e) = report.write(&report_path) {
        out.discard();
        return Err(e);
    }
    Ok(report)
}

type Outcome = (Vec<Check>, Value);

fn dispatch(kind: ScenarioKind, cfg: &ScenarioConfig, out: &mut OutputSet) -> Result<Outcome> {
    match kind {
        ScenarioKind::Trajectory => trajectory(cfg, out),
        ScenarioKind::LindbladDemo => lindblad(cfg, out),
        ScenarioKind::Kinetic => kinetic(cfg, out),
        ScenarioKind::WignerDemo => wigner(cfg, out),
        ScenarioKind::Estimate => estimate(cfg, out),
        ScenarioKind::Validate => validate(out),
    }
}

fn initial_state(cfg: &ScenarioConfig) -> Result<ParticleState> {
    let consts = cfg.constants.resolve()?;
    let field = cfg.field.resolve()?;
    match (cfg.initial.gamma0, cfg.initial.pi) {
        (_, Some(pi)) => Ok(ParticleState::new(0.0, Vector3::from(cfg.initial.x), Vector3::from(pi))),
        (Some(g), None) => circular_orbit_state(g, &field, &consts),
        (None, None) => circular_orbit_state(10.0, &field, &consts),
    }
}

fn trajectory(cfg: &ScenarioConfig, out: &mut OutputSet) -> Result<Outcome> {
    let kind = ScenarioKind::Trajectory;
    let consts = cfg.constants.resolve()?;
    let field = cfg.field.resolve()?;
    let s0 = initial_state(cfg)?;
    let mut states = Vec::new();
    let last = integrate_with(
        cfg.initial.model,
        &s0,
        &field,
        &consts,
        cfg.numerics.dt(kind),
        cfg.numerics.steps(kind),
        cfg.numerics.stride,
        |s| states.push(*s),
    )?;
    out.table("trajectory", &validation::trajectory_table(&states, consts.m))?;
    let results = json!({
        "model": cfg.initial.model.name(),
        "gamma_initial": s0.gamma(consts.m),
        "gamma_final": last.gamma(consts.m),
        "t_final": last.t,
    });
    Ok((Vec::new(), results))
}

fn lindblad(cfg: &ScenarioConfig, out: &mut OutputSet) -> Result<Outcome> {
    let kind = ScenarioKind::LindbladDemo;
    let consts = cfg.constants.resolve()?;
    let demo = DemoConfig {
        momentum: Momentum3(Vector3::from(cfg.lindblad.p)),
        m: consts.m,
        sigma_plus: cfg.lindblad.sigma_plus,
        sigma_minus: cfg.lindblad.sigma_minus,
        dt: cfg.numerics.dt(kind),
        steps: cfg.numerics.steps(kind),
    };
    let samples = run_demo(&demo)?;
    let mut table = lindblad_table(&samples);
    let stride = cfg.numerics.stride;
    let n = table.rows.len();
    table.rows = table
        .rows
        .into_iter()
        .enumerate()
        .filter(|(k, _)| k % stride == 0 || k + 1 == n)
        .map(|(_, r)| r)
        .collect();
    out.table("lindblad", &table)?;
    let drift = samples.iter().map(|s| (s.trace - 1.0).abs()).fold(0.0, f64::max);
    let neg = samples.iter().map(|s| -s.min_eig).fold(0.0, f64::max).max(0.0);
    let last = samples.last().expect("demo returns samples");
    let checks = vec![
        Check::at_most("max |Tr ρ − 1|", drift, 1e-8),
        Check::at_most("max(−λ_min)", neg, 1e-8),
    ];
    Ok((checks, json!({ "pop_pes_final": last.pop_pes, "purity_final": last.purity })))
}

fn kinetic(cfg: &ScenarioConfig, out: &mut OutputSet) -> Result<Outcome> {
    let kind = ScenarioKind::Kinetic;
    let k = &cfg.kinetic;
    let d = k.dims;
    let consts = cfg.constants.resolve()?;
    let mut model = KineticModel::new(d, cfg.field.resolve()?, consts)?
        .with_fixed(Vector3::from(k.fixed_x), Vector3::from(k.fixed_pi));
    if let Some(fr) = k.frozen {
        model = model.with_frozen(fr);
    }
    let mut mean = [0.0; 6];
    let mut std = [0.0; 6];
    mean[..2 * d].copy_from_slice(&k.mean);
    std[..2 * d].copy_from_slice(&k.std);
    let dt = cfg.numerics.dt(kind);
    let steps = cfg.numerics.steps(kind);
    let stride = cfg.numerics.stride;
    let mut checks = Vec::new();
    let mut results = json!({});

    if k.mode.fp() {
        let x_axes = (0..d).map(|a| Axis::new(k.x_min[a], k.x_max[a], k.cells[a])).collect::<Result<Vec<_>>>()?;
        let p_axes = (0..d).map(|a| Axis::new(k.pi_min[a], k.pi_max[a], k.cells[d + a])).collect::<Result<Vec<_>>>()?;
        let grid = PhaseSpaceGrid::new(&x_axes, &p_axes)?;
        let op = FokkerPlanck::new(&grid, &model)?;
        let mut f = PhaseSpaceScalarField::gaussian(grid, &mean, &std)?;
        // Sub-steps keep each FP step inside its stability bound.
        let sub = (dt / (0.9 * op.max_stable_dt())).ceil().max(1.0) as usize;
        let mut table = Table::new(moments_columns(d));
        let mut dump = Table::new(grid_columns(d));
        table.rows.push(moments_row(0.0, &f.moments(&model)?, d));
        if k.grid_dump {
            grid_rows(&mut dump, 0.0, &f);
        }
        for n in 1..=steps {
            for _ in 0..sub {
                op.step(&mut f, dt / sub as f64)?;
            }
            if n % stride == 0 || n == steps {
                table.rows.push(moments_row(n as f64 * dt, &f.moments(&model)?, d));
            }
        }
        if k.grid_dump {
            grid_rows(&mut dump, steps as f64 * dt, &f);
            out.table("grid_dump", &dump)?;
        }
        out.table("moments_fp", &table)?;
        checks.push(Check::at_most("FP |mass − 1|", (f.mass() - 1.0).abs(), 1e-10));
        checks.push(Check::at_most("FP mass in boundary cells", f.boundary_mass(), 1e-3));
        results["fp_clipped_mass"] = json!(f.clipped_mass());
        results["fp_substeps"] = json!(sub);
    }
    if k.mode.mc() {
        let mut ens = Ensemble::gaussian(&model, k.particles, &mean, &std, cfg.numerics.seed)?;
        let mut table = Table::new(moments_columns(d));
        table.rows.push(moments_row(0.0, &ens.moments()?, d));
        let mut done = 0;
        while done < steps {
            let chunk = stride.min(steps - done);
            ens = langevin_ensemble(&ens, &model, dt, chunk)?;
            done += chunk;
            table.rows.push(moments_row(done as f64 * dt, &ens.moments()?, d));
        }
        out.table("moments_mc", &table)?;
        results["mc_particles"] = json!(k.particles);
    }
    Ok((checks, results))
}

/// ψ built from the configured packets, (1, 0, 0, 0) spinor.
fn wigner(cfg: &ScenarioConfig, out: &mut OutputSet) -> Result<Outcome> {
    let w = &cfg.wigner;
    let consts = cfg.constants.resolve()?;
    let charge = w.charge.unwrap_or_else(|| consts.charge());
    let grid = Grid1::new(w.x_min, w.x_max, w.points)?;
    let packets: Vec<GaussianPacket> = (0..w.centers.len())
        .map(|k| GaussianPacket {
            center: w.centers[k],
            width: w.widths[k],
            momentum: w.momenta[k],
            weight: w.weights[k],
        })
        .collect();
    let up = Spinor::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let psi = SpinorWavefunction::gaussian_sum(grid, &packets, up)?;
    // Landau gauge on the line y = y_line: constant A_x, so the state in
    // this gauge carries the phase e^{ieA_x x}.
    let a_x = -w.b * w.y_line;
    let gauged = SpinorWavefunction::new(
        grid,
        psi.values
            .iter()
            .enumerate()
            .map(|(j, s)| s * Complex64::from_polar(1.0, charge * a_x * grid.x(j)))
            .collect(),
    )?;
    let wf = wigner_transform(&gauged, |_| a_x, charge)?;
    let reference = wigner_transform(&psi, |_| 0.0, charge)?;
    let mut gauge = 0.0f64;
    for j in 0..grid.len {
        for k in 0..wf.pi_grid().len() {
            gauge = gauge.max(crate::dirac::max_abs(&(wf.block(j, k) - reference.block(j, k))));
        }
    }
    // W is a function of kinetic momentum π = p − eA; with constant A_x its
    // π-marginal is the momentum density of the ungauged state.
    let r = marginal_residuals(&psi, &wf);
    out.table("wigner", &validation::wigner_table(&wf))?;
    let checks = vec![
        Check::at_most("∫W⁰dπ − |ψ|²", r.x_marginal, 1e-6),
        Check::at_most("∫W⁰dx − |ψ̃|²", r.pi_marginal, 1e-6),
        Check::at_most("|∫W⁰ − 1|", r.normalization, 1e-6),
        Check::at_most("block Hermiticity", r.hermiticity, 1e-12),
        Check::at_most("gauge invariance (A_x vs 0)", gauge, 1e-10),
    ];
    let report = json!({
        "x_marginal": r.x_marginal,
        "pi_marginal": r.pi_marginal,
        "normalization": r.normalization,
        "hermiticity": r.hermiticity,
        "gauge": gauge,
        "a_x": a_x,
        "dpi": wf.dpi(),
    });
    out.json("wigner_report.json", &report)?;
    Ok((checks, report))
}

fn estimate(cfg: &ScenarioConfig, out: &mut OutputSet) -> Result<Outcome> {
    let consts = cfg.constants.resolve()?;
    let e = &cfg.estimate;
    let r = estimate_ratios(e.e_ratio, e.gamma, e.dp, &consts)?;
    let value = serde_json::to_value(r).expect("ratios serialize");
    out.json("estimate.json", &value)?;
    Ok((Vec::new(), value))
}

fn validate(out: &mut OutputSet) -> Result<Outcome> {
    let criteria = validation::run_all();
    for c in &criteria {
        for (stem, table) in &c.tables {
            out.table(stem, table)?;
        }
    }
    let checks: Vec<Check> = criteria.iter().map(|c| c.summary()).collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    Ok((checks, json!({ "passed": passed, "total": criteria.len() })))
}
