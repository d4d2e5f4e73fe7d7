// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! `lindrad` command-line driver. Exit codes: 0 success, 1 physics or
//! acceptance failure, 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lindrad::classical::ModelKind;
use lindrad::io::{parse_config, run_scenario, Format, KineticMode, ScenarioConfig, ScenarioKind};
use lindrad::Error;

#[derive(Parser, Debug)]
#[command(name = "lindrad", version, about = "Radiating-electron Lindblad laboratory")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Scenario configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Print nothing on success.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the model constants as JSON.
    Constants,
    /// Integrate one classical trajectory.
    Trajectory {
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        gamma0: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Relax a negative-energy state under the VF jump operators.
    LindbladDemo {
        /// Momentum as px,py,pz.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long)]
        sigma_plus: Option<f64>,
        #[arg(long)]
        sigma_minus: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Fokker–Planck and/or Langevin run of the kinetic equation.
    Kinetic {
        #[arg(long, value_parser = ["fp", "mc", "both"])]
        mode: Option<String>,
        #[arg(long)]
        particles: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Wigner transform of Gaussian packets with marginal residuals.
    WignerDemo {
        /// center,width,momentum[,weight]; repeat for superpositions.
        #[arg(long, allow_hyphen_values = true)]
        packet: Vec<String>,
        /// Magnetic field B_z.
        #[arg(long = "B")]
        b: Option<f64>,
    },
    /// Diffusion and radiation-reaction ratio estimates as JSON.
    Estimate {
        #[arg(long)]
        e_ratio: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        dp: Option<f64>,
    },
    /// Run acceptance criteria 1–12 and write their artifacts.
    Validate,
}

fn list(s: &str, what: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|f| f.trim().parse::<f64>().map_err(|_| Error::Domain(format!("--{what}: `{s}` is not a list of numbers"))))
        .collect()
}

fn apply(cli: &Cli, cfg: &mut ScenarioConfig) -> Result<Option<ScenarioKind>, Error> {
    let kind = match &cli.command {
        Command::Constants => None,
        Command::Trajectory { model, gamma0, dt, steps } => {
            if let Some(m) = model {
                cfg.initial.model = m.parse::<ModelKind>()?;
            }
            if let Some(g) = gamma0 {
                cfg.initial.gamma0 = Some(*g);
                cfg.initial.pi = None;
            }
            cfg.numerics.dt = dt.or(cfg.numerics.dt);
            cfg.numerics.steps = steps.or(cfg.numerics.steps);
            Some(ScenarioKind::Trajectory)
        }
        Command::LindbladDemo { p, sigma_plus, sigma_minus, dt, steps } => {
            if let Some(p) = p {
                let v = list(p, "p")?;
                cfg.lindblad.p = v.try_into().map_err(|_| Error::Domain("--p needs three numbers".into()))?;
            }
            cfg.lindblad.sigma_plus = sigma_plus.unwrap_or(cfg.lindblad.sigma_plus);
            cfg.lindblad.sigma_minus = sigma_minus.unwrap_or(cfg.lindblad.sigma_minus);
            cfg.numerics.dt = dt.or(cfg.numerics.dt);
            cfg.numerics.steps = steps.or(cfg.numerics.steps);
            Some(ScenarioKind::LindbladDemo)
        }
        Command::Kinetic { mode, particles, dt, steps } => {
            if let Some(m) = mode {
                cfg.kinetic.mode = m.parse::<KineticMode>()?;
            }
            cfg.kinetic.particles = particles.unwrap_or(cfg.kinetic.particles);
            cfg.numerics.dt = dt.or(cfg.numerics.dt);
            cfg.numerics.steps = steps.or(cfg.numerics.steps);
            Some(ScenarioKind::Kinetic)
        }
        Command::WignerDemo { packet, b } => {
            if !packet.is_empty() {
                let w = &mut cfg.wigner;
                w.centers.clear();
                w.widths.clear();
                w.momenta.clear();
                w.weights.clear();
                for p in packet {
                    let v = list(p, "packet")?;
                    if !(3..=4).contains(&v.len()) || !(v[1] > 0.0) {
                        return Err(Error::Domain(format!("--packet `{p}`: expected center,width>0,momentum[,weight]")));
                    }
                    w.centers.push(v[0]);
                    w.widths.push(v[1]);
                    w.momenta.push(v[2]);
                    w.weights.push(v.get(3).copied().unwrap_or(1.0));
                }
            }
            cfg.wigner.b = b.unwrap_or(cfg.wigner.b);
            Some(ScenarioKind::WignerDemo)
        }
        Command::Estimate { e_ratio, gamma, dp } => {
            let e = &mut cfg.estimate;
            e.e_ratio = e_ratio.unwrap_or(e.e_ratio);
            e.gamma = gamma.unwrap_or(e.gamma);
            e.dp = dp.unwrap_or(e.dp);
            Some(ScenarioKind::Estimate)
        }
        Command::Validate => Some(ScenarioKind::Validate),
    };
    let g = &cli.global;
    if let Some(dir) = &g.out {
        cfg.output.directory = dir.clone();
    }
    if let Some(f) = &g.format {
        cfg.output.format = f.parse::<Format>()?;
    }
    if let Some(s) = g.seed {
        cfg.numerics.seed = s;
    }
    if let (Some(want), Some(file)) = (kind, cfg.kind) {
        if want != file {
            return Err(Error::Domain(format!(
                "config declares scenario `{}` but the command is `{}`",
                file.name(),
                want.name()
            )));
        }
    }
    cfg.kind = kind;
    Ok(kind)
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let mut cfg = match &cli.global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            parse_config(&text)?
        }
        None => ScenarioConfig::default(),
    };
    let Some(kind) = apply(cli, &mut cfg)? else {
        let c = cfg.constants.resolve()?;
        println!("{}", serde_json::to_string_pretty(&c).expect("constants serialize"));
        return Ok(true);
    };
    let report = run_scenario(&cfg)?;
    if !cli.global.quiet {
        if kind == ScenarioKind::Estimate {
            println!("{}", serde_json::to_string_pretty(&report.results).expect("results serialize"));
        } else {
            for c in &report.checks {
                println!("[{}] {}: {:e} (tol {:e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.measured, c.tolerance);
            }
            println!("wrote {} files to {}", report.outputs.len(), cfg.output.directory.display());
        }
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("lindrad: {e}");
            ExitCode::from(if e.is_physics_failure() { 1 } else { 2 })
        }
    }
}
