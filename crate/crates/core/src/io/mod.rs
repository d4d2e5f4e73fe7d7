// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Configuration, tables, run reports and scenario dispatch.

mod config;
mod scenario;

pub use config::{
    parse_config, ConstantsBlock, EstimateBlock, FieldBlock, InitialBlock, KineticBlock, KineticMode, LindbladBlock,
    NumericsBlock, OutputBlock, ScenarioConfig, ScenarioKind, WignerBlock,
};
pub use scenario::{run_scenario, OutputSet};

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::domain(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// Homogeneous numeric records.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::domain(format!(
                "record has {} fields, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                write_number(&mut s, *v);
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.clone(), serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number)))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::domain("empty CSV"))?;
        let mut table = Table::new(header.split(','));
        for (n, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|f| f.parse::<f64>().map_err(|e| Error::domain(format!("CSV row {}: {e}", n + 2))))
                .collect::<Result<Vec<_>>>()?;
            table.push(row)?;
        }
        Ok(table)
    }

    /// Inverse of [`Table::to_json`]; null reads back as NaN. An empty array
    /// yields a table without columns.
    pub fn from_json(value: &Value) -> Result<Self> {
        let arr = value.as_array().ok_or_else(|| Error::domain("JSON table must be an array"))?;
        let Some(first) = arr.first() else {
            return Ok(Table::default());
        };
        let cols: Vec<String> = first
            .as_object()
            .ok_or_else(|| Error::domain("JSON records must be objects"))?
            .keys()
            .cloned()
            .collect();
        let mut table = Table::new(cols.clone());
        for rec in arr {
            let obj = rec.as_object().ok_or_else(|| Error::domain("JSON records must be objects"))?;
            if obj.len() != cols.len() || !obj.keys().zip(&cols).all(|(a, b)| a == b) {
                return Err(Error::domain("JSON records do not share the same keys"));
            }
            let row = obj
                .values()
                .map(|v| match v {
                    Value::Null => Ok(f64::NAN),
                    v => v.as_f64().ok_or_else(|| Error::domain("JSON table values must be numbers")),
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row)?;
        }
        Ok(table)
    }
}

/// Shortest representation that parses back to the same f64. Plain
/// notation for moderate magnitudes, exponent notation otherwise.
fn write_number(s: &mut String, v: f64) {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        let _ = write!(s, "{v}");
    } else {
        let _ = write!(s, "{v:e}");
    }
}

pub fn write_table(table: &Table, format: Format, path: &Path) -> Result<()> {
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut t = serde_json::to_string_pretty(&table.to_json()).expect("tables serialize");
            t.push('\n');
            t
        }
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_table(path: &Path) -> Result<Table> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => {
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::domain(format!("{}: {e}", path.display())))?;
            Table::from_json(&v)
        }
        _ => Table::from_csv(&text),
    }
}

/// One named check with its measured value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
}

impl Check {
    /// Passes when `measured <= tolerance`.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            detail: String::new(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub version: String,
    pub wall_time_s: f64,
    pub config: Value,
    pub checks: Vec<Check>,
    /// Scenario-specific summary values.
    pub results: Value,
    pub outputs: Vec<PathBuf>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_shape() {
        let mut t = Table::new(["t", "gamma"]);
        t.push(vec![0.0, 10.0]).unwrap();
        assert_eq!(t.to_csv(), "t,gamma\n0,10\n");
        assert_eq!(Table::new(["a", "b"]).to_csv(), "a,b\n");
        assert!(t.push(vec![1.0]).is_err());
    }

    #[test]
    fn small_and_large_numbers_use_exponents() {
        let mut s = String::new();
        write_number(&mut s, 1.5e-300);
        assert_eq!(s, "1.5e-300");
        s.clear();
        write_number(&mut s, 0.1);
        assert_eq!(s, "0.1");
    }

    proptest! {
        #[test]
        fn round_trips(rows in prop::collection::vec(prop::array::uniform3(any::<f64>().prop_filter("finite", |v| v.is_finite())), 0..20)) {
            let mut t = Table::new(["a", "b", "c"]);
            for r in &rows {
                t.push(r.to_vec()).unwrap();
            }
            let back = Table::from_csv(&t.to_csv()).unwrap();
            prop_assert_eq!(&back, &t);
            let text = serde_json::to_string(&t.to_json()).unwrap();
            let back = Table::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            if rows.is_empty() {
                prop_assert!(back.rows.is_empty());
            } else {
                prop_assert_eq!(&back, &t);
            }
        }
    }
}
