// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Line-oriented scenario configuration.
//!
//! ```text
//! # comment
//! [section]
//! key = value          # numbers, comma-separated lists, words, true/false
//! ```
//!
//! Unknown sections or keys, duplicates, type mismatches and invariant
//! violations are errors naming the line and `section.key`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::Format;
use crate::classical::{FieldConfig, ModelKind};
use crate::error::{Error, Result};
use crate::kinetics::FrozenCoefficients;
use crate::units::{derived_constants, ModelConstants, FINE_STRUCTURE};

const SCHEMA: &[(&str, &[&str])] = &[
    ("scenario", &["kind"]),
    ("constants", &["alpha", "m", "tau0", "sigma", "sigma_minus"]),
    ("field", &["b0", "grad_b", "x0"]),
    ("initial", &["model", "gamma0", "x", "pi"]),
    ("numerics", &["dt", "steps", "stride", "seed"]),
    ("lindblad", &["p", "sigma_plus", "sigma_minus"]),
    (
        "kinetic",
        &[
            "mode", "dims", "x_min", "x_max", "pi_min", "pi_max", "cells", "particles", "mean", "std", "fixed_x",
            "fixed_pi", "frozen_v", "frozen_force", "frozen_gamma", "grid_dump",
        ],
    ),
    (
        "wigner",
        &["x_min", "x_max", "points", "centers", "widths", "momenta", "weights", "charge", "b", "y_line"],
    ),
    ("estimate", &["e_ratio", "gamma", "dp"]),
    ("output", &["directory", "format"]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Trajectory,
    LindbladDemo,
    Kinetic,
    WignerDemo,
    Estimate,
    Validate,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Trajectory => "trajectory",
            ScenarioKind::LindbladDemo => "lindblad-demo",
            ScenarioKind::Kinetic => "kinetic",
            ScenarioKind::WignerDemo => "wigner-demo",
            ScenarioKind::Estimate => "estimate",
            ScenarioKind::Validate => "validate",
        }
    }

    fn default_numerics(self) -> (f64, usize) {
        match self {
            ScenarioKind::LindbladDemo => (0.01, 10_000),
            ScenarioKind::Kinetic => (0.01, 200),
            _ => (1.0, 1000),
        }
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            ScenarioKind::Trajectory,
            ScenarioKind::LindbladDemo,
            ScenarioKind::Kinetic,
            ScenarioKind::WignerDemo,
            ScenarioKind::Estimate,
            ScenarioKind::Validate,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::domain(format!("unknown scenario kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KineticMode {
    Fp,
    Mc,
    #[default]
    Both,
}

impl KineticMode {
    pub fn fp(self) -> bool {
        self != KineticMode::Mc
    }

    pub fn mc(self) -> bool {
        self != KineticMode::Fp
    }
}

impl FromStr for KineticMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fp" => Ok(KineticMode::Fp),
            "mc" => Ok(KineticMode::Mc),
            "both" => Ok(KineticMode::Both),
            other => Err(Error::domain(format!("unknown kinetic mode `{other}` (fp, mc or both)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsBlock {
    pub alpha: f64,
    pub m: f64,
    pub tau0: Option<f64>,
    pub sigma: Option<f64>,
    pub sigma_minus: Option<f64>,
}

impl Default for ConstantsBlock {
    fn default() -> Self {
        ConstantsBlock {
            alpha: FINE_STRUCTURE,
            m: 1.0,
            tau0: None,
            sigma: None,
            sigma_minus: None,
        }
    }
}

impl ConstantsBlock {
    pub fn resolve(&self) -> Result<ModelConstants> {
        let mut c = derived_constants(self.alpha, self.m)?;
        if let Some(v) = self.tau0 {
            c = c.with_tau0(v);
        }
        if let Some(v) = self.sigma {
            c = c.with_sigma(v);
        }
        if let Some(v) = self.sigma_minus {
            c = c.with_sigma_minus(v);
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldBlock {
    pub b0: [f64; 3],
    /// Row-major ∂_i B_j.
    pub grad_b: [f64; 9],
    pub x0: [f64; 3],
}

impl Default for FieldBlock {
    fn default() -> Self {
        FieldBlock {
            b0: [0.0, 0.0, 0.01],
            grad_b: [0.0; 9],
            x0: [0.0; 3],
        }
    }
}

impl FieldBlock {
    pub fn resolve(&self) -> Result<FieldConfig> {
        let g = Matrix3::from_row_slice(&self.grad_b);
        Ok(FieldConfig::new(Vector3::from(self.b0), g)?.with_origin(Vector3::from(self.x0)))
    }
}

/// Initial particle state. With `gamma0` the particle starts on the
/// circular Lorentz orbit of B0 (requires B0 along z); otherwise `x` and
/// `pi` are used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialBlock {
    pub model: ModelKind,
    pub gamma0: Option<f64>,
    pub x: [f64; 3],
    pub pi: Option<[f64; 3]>,
}

impl Default for InitialBlock {
    fn default() -> Self {
        InitialBlock {
            model: ModelKind::Lorentz,
            gamma0: Some(10.0),
            x: [0.0; 3],
            pi: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericsBlock {
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub stride: usize,
    pub seed: u64,
}

impl Default for NumericsBlock {
    fn default() -> Self {
        NumericsBlock {
            dt: None,
            steps: None,
            stride: 1,
            seed: 0,
        }
    }
}

impl NumericsBlock {
    pub fn dt(&self, kind: ScenarioKind) -> f64 {
        self.dt.unwrap_or(kind.default_numerics().0)
    }

    pub fn steps(&self, kind: ScenarioKind) -> usize {
        self.steps.unwrap_or(kind.default_numerics().1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LindbladBlock {
    pub p: [f64; 3],
    pub sigma_plus: f64,
    pub sigma_minus: f64,
}

impl Default for LindbladBlock {
    fn default() -> Self {
        LindbladBlock {
            p: [0.0, 0.0, 1.0],
            sigma_plus: 0.5,
            sigma_minus: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KineticBlock {
    pub mode: KineticMode,
    pub dims: usize,
    pub x_min: Vec<f64>,
    pub x_max: Vec<f64>,
    pub pi_min: Vec<f64>,
    pub pi_max: Vec<f64>,
    /// Cells per grid coordinate, x axes first.
    pub cells: Vec<usize>,
    pub particles: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub fixed_x: [f64; 3],
    pub fixed_pi: [f64; 3],
    pub frozen: Option<FrozenCoefficients>,
    pub grid_dump: bool,
}

impl Default for KineticBlock {
    fn default() -> Self {
        Self::defaults_for(1)
    }
}

impl KineticBlock {
    fn defaults_for(dims: usize) -> Self {
        let mut mean = vec![0.0; 2 * dims];
        mean[..dims].fill(0.0);
        KineticBlock {
            mode: KineticMode::Both,
            dims,
            x_min: vec![-1.0; dims],
            x_max: vec![1.0; dims],
            pi_min: vec![-1.0; dims],
            pi_max: vec![1.0; dims],
            cells: vec![64; 2 * dims],
            particles: 10_000,
            mean,
            std: vec![0.1; 2 * dims],
            fixed_x: [0.0; 3],
            fixed_pi: [0.0; 3],
            frozen: None,
            grid_dump: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerBlock {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub centers: Vec<f64>,
    pub widths: Vec<f64>,
    pub momenta: Vec<f64>,
    pub weights: Vec<f64>,
    /// Defaults to e = √α.
    pub charge: Option<f64>,
    /// B_z; the 1D line sits at y = `y_line` in the Landau gauge A_x = −B_z·y.
    pub b: f64,
    pub y_line: f64,
}

impl Default for WignerBlock {
    fn default() -> Self {
        WignerBlock {
            x_min: -10.0,
            x_max: 10.0,
            points: 256,
            centers: vec![0.0],
            widths: vec![1.0],
            momenta: vec![0.0],
            weights: vec![1.0],
            charge: None,
            b: 0.0,
            y_line: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateBlock {
    pub e_ratio: f64,
    pub gamma: f64,
    pub dp: f64,
}

impl Default for EstimateBlock {
    fn default() -> Self {
        EstimateBlock {
            e_ratio: 1e-3,
            gamma: 10.0,
            dp: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputBlock {
    pub directory: PathBuf,
    pub format: Format,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock {
            directory: PathBuf::from("out"),
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ScenarioConfig {
    /// None when the document leaves the choice to the caller.
    pub kind: Option<ScenarioKind>,
    pub constants: ConstantsBlock,
    pub field: FieldBlock,
    pub initial: InitialBlock,
    pub numerics: NumericsBlock,
    pub lindblad: LindbladBlock,
    pub kinetic: KineticBlock,
    pub wigner: WignerBlock,
    pub estimate: EstimateBlock,
    pub output: OutputBlock,
}

struct Entry {
    line: usize,
    value: String,
}

struct Doc {
    entries: BTreeMap<(&'static str, &'static str), Entry>,
}

fn err(line: usize, key: &str, msg: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        msg: msg.into(),
    }
}

impl Doc {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut section: Option<(&'static str, &'static [&'static str])> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(name) = body.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err(line, body, "malformed section header"))?
                    .trim();
                let found = SCHEMA
                    .iter()
                    .find(|(s, _)| *s == name)
                    .ok_or_else(|| err(line, name, "unknown section"))?;
                section = Some(*found);
                continue;
            }
            let (k, v) = body.split_once('=').ok_or_else(|| err(line, body, "expected `key = value`"))?;
            let k = k.trim();
            let Some((sec, keys)) = section else {
                return Err(err(line, k, "key outside of any [section]"));
            };
            let full = format!("{sec}.{k}");
            let key = *keys.iter().find(|x| **x == k).ok_or_else(|| err(line, &full, "unknown key"))?;
            let v = v.trim();
            if v.is_empty() {
                return Err(err(line, &full, "missing value"));
            }
            if let Some(prev) = entries.insert(
                (sec, key),
                Entry {
                    line,
                    value: v.to_string(),
                },
            ) {
                return Err(err(line, &full, format!("duplicate key (first set on line {})", prev.line)));
            }
        }
        Ok(Doc { entries })
    }

    fn get(&self, sec: &'static str, key: &'static str) -> Option<(&Entry, String)> {
        self.entries.get(&(sec, key)).map(|e| (e, format!("{sec}.{key}")))
    }

    fn line(&self, sec: &'static str, key: &'static str) -> usize {
        self.entries.get(&(sec, key)).map_or(0, |e| e.line)
    }

    fn parsed<T: FromStr>(&self, sec: &'static str, key: &'static str, what: &str) -> Result<Option<T>> {
        let Some((e, full)) = self.get(sec, key) else {
            return Ok(None);
        };
        e.value
            .parse::<T>()
            .map(Some)
            .map_err(|_| err(e.line, &full, format!("expected {what}, got `{}`", e.value)))
    }

    fn f64(&self, sec: &'static str, key: &'static str) -> Result<Option<f64>> {
        let v: Option<f64> = self.parsed(sec, key, "a number")?;
        if let Some(x) = v {
            if !x.is_finite() {
                return Err(err(self.line(sec, key), &format!("{sec}.{key}"), "value must be finite"));
            }
        }
        Ok(v)
    }

    fn list(&self, sec: &'static str, key: &'static str) -> Result<Option<Vec<f64>>> {
        let Some((e, full)) = self.get(sec, key) else {
            return Ok(None);
        };
        let out = e
            .value
            .split(',')
            .map(|f| match f.trim().parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                Ok(_) => Err(err(e.line, &full, "values must be finite")),
                Err(_) => Err(err(e.line, &full, format!("expected a list of numbers, got `{}`", e.value))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(out))
    }

    fn fixed<const N: usize>(&self, sec: &'static str, key: &'static str) -> Result<Option<[f64; N]>> {
        let Some(v) = self.list(sec, key)? else {
            return Ok(None);
        };
        let n = v.len();
        v.try_into()
            .map(Some)
            .map_err(|_| err(self.line(sec, key), &format!("{sec}.{key}"), format!("expected {N} numbers, got {n}")))
    }

    fn usize_list(&self, sec: &'static str, key: &'static str) -> Result<Option<Vec<usize>>> {
        let Some((e, full)) = self.get(sec, key) else {
            return Ok(None);
        };
        e.value
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<usize>()
                    .map_err(|_| err(e.line, &full, format!("expected a list of integers, got `{}`", e.value)))
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn word<T: FromStr<Err = Error>>(&self, sec: &'static str, key: &'static str) -> Result<Option<T>> {
        let Some((e, full)) = self.get(sec, key) else {
            return Ok(None);
        };
        e.value.parse::<T>().map(Some).map_err(|x| err(e.line, &full, x.to_string()))
    }

    fn invariant(&self, sec: &'static str, key: &'static str, msg: impl Into<String>) -> Error {
        err(self.line(sec, key), &format!("{sec}.{key}"), msg)
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let d = Doc::parse(text)?;
    let mut cfg = ScenarioConfig {
        kind: d.word("scenario", "kind")?,
        ..Default::default()
    };

    let c = &mut cfg.constants;
    set(&mut c.alpha, d.f64("constants", "alpha")?);
    set(&mut c.m, d.f64("constants", "m")?);
    c.tau0 = d.f64("constants", "tau0")?;
    c.sigma = d.f64("constants", "sigma")?;
    c.sigma_minus = d.f64("constants", "sigma_minus")?;
    cfg.constants
        .resolve()
        .map_err(|e| d.invariant("constants", "alpha", e.to_string()))?;

    set(&mut cfg.field.b0, d.fixed("field", "b0")?);
    set(&mut cfg.field.grad_b, d.fixed("field", "grad_b")?);
    set(&mut cfg.field.x0, d.fixed("field", "x0")?);
    cfg.field.resolve().map_err(|e| d.invariant("field", "grad_b", e.to_string()))?;

    let ini = &mut cfg.initial;
    if let Some(m) = d.get("initial", "model") {
        ini.model = m
            .0
            .value
            .parse::<ModelKind>()
            .map_err(|e| err(m.0.line, &m.1, e.to_string()))?;
    }
    let gamma0 = d.f64("initial", "gamma0")?;
    let pi = d.fixed("initial", "pi")?;
    set(&mut ini.x, d.fixed("initial", "x")?);
    match (gamma0, pi) {
        (Some(_), Some(_)) => return Err(d.invariant("initial", "pi", "give either gamma0 or pi, not both")),
        (None, Some(p)) => {
            ini.gamma0 = None;
            ini.pi = Some(p);
        }
        (g, None) => {
            if d.get("initial", "x").is_some() {
                return Err(d.invariant("initial", "x", "x needs pi; gamma0 starts on the circular orbit"));
            }
            if let Some(g) = g {
                ini.gamma0 = Some(g);
            }
        }
    }
    if let Some(g) = ini.gamma0 {
        if !(g >= 1.0) {
            return Err(d.invariant("initial", "gamma0", "gamma0 must be >= 1"));
        }
        // The default gamma0 only matters for trajectory runs.
        let used = gamma0.is_some() || cfg.kind == Some(ScenarioKind::Trajectory);
        if used && cfg.field.b0[2] == 0.0 {
            return Err(d.invariant("field", "b0", "gamma0 needs B0 with a nonzero z component"));
        }
    }

    let n = &mut cfg.numerics;
    n.dt = d.f64("numerics", "dt")?;
    if let Some(dt) = n.dt {
        if !(dt > 0.0) {
            return Err(d.invariant("numerics", "dt", "dt must be positive"));
        }
    }
    n.steps = d.parsed("numerics", "steps", "a positive integer")?;
    if n.steps == Some(0) {
        return Err(d.invariant("numerics", "steps", "steps must be positive"));
    }
    n.stride = d.parsed("numerics", "stride", "a positive integer")?.unwrap_or(1);
    if n.stride == 0 {
        return Err(d.invariant("numerics", "stride", "stride must be positive"));
    }
    n.seed = d.parsed("numerics", "seed", "an unsigned integer")?.unwrap_or(0);

    let l = &mut cfg.lindblad;
    set(&mut l.p, d.fixed("lindblad", "p")?);
    set(&mut l.sigma_plus, d.f64("lindblad", "sigma_plus")?);
    set(&mut l.sigma_minus, d.f64("lindblad", "sigma_minus")?);
    for (key, v) in [("sigma_plus", l.sigma_plus), ("sigma_minus", l.sigma_minus)] {
        if v < 0.0 {
            return Err(d.invariant("lindblad", key, "weights must be non-negative"));
        }
    }

    parse_kinetic(&d, &mut cfg)?;
    parse_wigner(&d, &mut cfg.wigner)?;

    let e = &mut cfg.estimate;
    set(&mut e.e_ratio, d.f64("estimate", "e_ratio")?);
    set(&mut e.gamma, d.f64("estimate", "gamma")?);
    set(&mut e.dp, d.f64("estimate", "dp")?);
    if !(e.gamma >= 1.0) {
        return Err(d.invariant("estimate", "gamma", "gamma must be >= 1"));
    }
    if !(e.e_ratio > 0.0 && e.dp > 0.0) {
        return Err(d.invariant("estimate", "e_ratio", "e_ratio and dp must be positive"));
    }

    if let Some((e, _)) = d.get("output", "directory") {
        cfg.output.directory = PathBuf::from(&e.value);
    }
    set(&mut cfg.output.format, d.word("output", "format")?);
    Ok(cfg)
}

fn parse_kinetic(d: &Doc, cfg: &mut ScenarioConfig) -> Result<()> {
    const S: &str = "kinetic";
    let dims: usize = d.parsed(S, "dims", "1, 2 or 3")?.unwrap_or(1);
    if !(1..=3).contains(&dims) {
        return Err(d.invariant(S, "dims", "dims must be 1, 2 or 3"));
    }
    let mut k = KineticBlock::defaults_for(dims);
    set(&mut k.mode, d.word(S, "mode")?);
    let sized = |key: &'static str, want: usize, slot: &mut Vec<f64>| -> Result<()> {
        if let Some(v) = d.list(S, key)? {
            if v.len() != want {
                return Err(d.invariant(S, key, format!("expected {want} numbers for dims = {dims}")));
            }
            *slot = v;
        }
        Ok(())
    };
    sized("x_min", dims, &mut k.x_min)?;
    sized("x_max", dims, &mut k.x_max)?;
    sized("pi_min", dims, &mut k.pi_min)?;
    sized("pi_max", dims, &mut k.pi_max)?;
    sized("mean", 2 * dims, &mut k.mean)?;
    sized("std", 2 * dims, &mut k.std)?;
    for a in 0..dims {
        if !(k.x_max[a] > k.x_min[a]) {
            return Err(d.invariant(S, "x_max", "x_max must exceed x_min"));
        }
        if !(k.pi_max[a] > k.pi_min[a]) {
            return Err(d.invariant(S, "pi_max", "pi_max must exceed pi_min"));
        }
    }
    if k.std.iter().any(|s| *s < 0.0) {
        return Err(d.invariant(S, "std", "widths must be non-negative"));
    }
    if let Some(c) = d.usize_list(S, "cells")? {
        k.cells = match c.len() {
            1 => vec![c[0]; 2 * dims],
            n if n == 2 * dims => c,
            _ => return Err(d.invariant(S, "cells", format!("expected 1 or {} integers", 2 * dims))),
        };
    }
    if k.cells.iter().any(|c| *c < 3) {
        return Err(d.invariant(S, "cells", "each axis needs at least 3 cells"));
    }
    set(&mut k.particles, d.parsed(S, "particles", "a positive integer")?);
    if k.particles == 0 {
        return Err(d.invariant(S, "particles", "particles must be positive"));
    }
    set(&mut k.fixed_x, d.fixed(S, "fixed_x")?);
    set(&mut k.fixed_pi, d.fixed(S, "fixed_pi")?);
    let fv = d.fixed::<3>(S, "frozen_v")?;
    let ff = d.fixed::<3>(S, "frozen_force")?;
    let fg = d.f64(S, "frozen_gamma")?;
    k.frozen = match (fv, ff, fg) {
        (None, None, None) => None,
        (Some(v), Some(f), Some(g)) => {
            if !(g >= 1.0) {
                return Err(d.invariant(S, "frozen_gamma", "frozen_gamma must be >= 1"));
            }
            Some(FrozenCoefficients {
                v: Vector3::from(v),
                force: Vector3::from(f),
                gamma: g,
            })
        }
        _ => {
            return Err(d.invariant(
                S,
                "frozen_gamma",
                "frozen coefficients need all of frozen_v, frozen_force and frozen_gamma",
            ))
        }
    };
    if let Some(b) = d.parsed::<bool>(S, "grid_dump", "true or false")? {
        k.grid_dump = b;
    }
    cfg.kinetic = k;
    Ok(())
}

fn parse_wigner(d: &Doc, w: &mut WignerBlock) -> Result<()> {
    const S: &str = "wigner";
    set(&mut w.x_min, d.f64(S, "x_min")?);
    set(&mut w.x_max, d.f64(S, "x_max")?);
    set(&mut w.points, d.parsed(S, "points", "an integer >= 8")?);
    if !(w.x_max > w.x_min) {
        return Err(d.invariant(S, "x_max", "x_max must exceed x_min"));
    }
    if w.points < 8 {
        return Err(d.invariant(S, "points", "points must be at least 8"));
    }
    set(&mut w.centers, d.list(S, "centers")?);
    let n = w.centers.len();
    w.widths = d.list(S, "widths")?.unwrap_or_else(|| vec![1.0; n]);
    w.momenta = d.list(S, "momenta")?.unwrap_or_else(|| vec![0.0; n]);
    w.weights = d.list(S, "weights")?.unwrap_or_else(|| vec![1.0; n]);
    for (key, len) in [("widths", w.widths.len()), ("momenta", w.momenta.len()), ("weights", w.weights.len())] {
        if len != n {
            return Err(d.invariant(S, key, format!("expected {n} values, one per packet")));
        }
    }
    if w.widths.iter().any(|s| !(*s > 0.0)) {
        return Err(d.invariant(S, "widths", "widths must be positive"));
    }
    w.charge = d.f64(S, "charge")?;
    set(&mut w.b, d.f64(S, "b")?);
    set(&mut w.y_line, d.f64(S, "y_line")?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config_err(text: &str) -> (usize, String, String) {
        match parse_config(text) {
            Err(Error::Config { line, key, msg }) => (line, key, msg),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_trajectory_fills_defaults() {
        let cfg = parse_config(
            "[initial]\nmodel = landau-lifshitz\ngamma0 = 10\n[field]\nb0 = 0, 0, 0.0117\n[numerics]\ndt = 5\nsteps = 100\n",
        )
        .unwrap();
        assert_eq!(cfg.initial.model, ModelKind::LandauLifshitz);
        assert_eq!(cfg.numerics.steps, Some(100));
        assert_eq!(cfg.numerics.stride, 1);
        assert_eq!(cfg.constants, ConstantsBlock::default());
        assert_eq!(cfg.output.format, Format::Csv);
        assert_eq!(cfg.kind, None);
    }

    #[test]
    fn trace_of_gradient_is_rejected() {
        let (line, key, msg) = config_err("[field]\ngrad_b = 1, 0, 0, 0, 0, 0, 0, 0, 0\n");
        assert_eq!((line, key.as_str()), (2, "field.grad_b"));
        assert!(msg.contains("divergence-free violation"), "{msg}");
    }

    #[test]
    fn duplicates_and_unknown_keys() {
        let (line, key, _) = config_err("[numerics]\ndt = 1\n\ndt = 2\n");
        assert_eq!((line, key.as_str()), (4, "numerics.dt"));
        let (line, key, _) = config_err("[numerics]\nsteps = 3\nfoo = 1\n");
        assert_eq!((line, key.as_str()), (3, "numerics.foo"));
        let (line, _, _) = config_err("dt = 1\n");
        assert_eq!(line, 1);
        let (line, key, _) = config_err("[nope]\n");
        assert_eq!((line, key.as_str()), (1, "nope"));
    }

    #[test]
    fn type_mismatch_names_line() {
        let (line, key, msg) = config_err("# header\n[numerics]\nsteps = many\n");
        assert_eq!((line, key.as_str()), (3, "numerics.steps"));
        assert!(msg.contains("many"));
        let (_, key, _) = config_err("[field]\nb0 = 1, 2\n");
        assert_eq!(key, "field.b0");
        let (_, key, _) = config_err("[numerics]\ndt = inf\n");
        assert_eq!(key, "numerics.dt");
    }

    #[test]
    fn kinetic_block() {
        let cfg = parse_config(
            "[kinetic]\ndims = 1\nmode = mc\ncells = 40\nfrozen_v = 0.1, 0, 0\nfrozen_force = 1, 0, 0\nfrozen_gamma = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.kinetic.cells, vec![40, 40]);
        assert_eq!(cfg.kinetic.mode, KineticMode::Mc);
        assert!(cfg.kinetic.frozen.is_some());
        let (_, key, _) = config_err("[kinetic]\nfrozen_v = 0.1, 0, 0\n");
        assert_eq!(key, "kinetic.frozen_gamma");
        let (_, key, _) = config_err("[kinetic]\ndims = 2\nmean = 0, 0\n");
        assert_eq!(key, "kinetic.mean");
    }

    #[test]
    fn default_gamma0_ignored_without_trajectory() {
        let cfg = parse_config("[scenario]\nkind = kinetic\n[field]\nb0 = 0, 0, 0\n").unwrap();
        assert_eq!(cfg.field.b0, [0.0; 3]);
        let (_, key, _) = config_err("[scenario]\nkind = trajectory\n[field]\nb0 = 0, 0, 0\n");
        assert_eq!(key, "field.b0");
        let (_, key, _) = config_err("[field]\nb0 = 0, 0, 0\n[initial]\ngamma0 = 3\n");
        assert_eq!(key, "field.b0");
    }
}
