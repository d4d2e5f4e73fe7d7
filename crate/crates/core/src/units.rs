// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Natural units (ħ = c = 1, e² = α) and the model parameters derived from
//! the fine-structure constant and the electron mass.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 fine-structure constant.
pub const FINE_STRUCTURE: f64 = 1.0 / 137.035_999_084;

/// Constants of the radiating-electron model.
///
/// `tau0`, `sigma` and `sigma_minus` are tied to `alpha` and `m` by
/// [`derived_constants`]; [`ModelConstants::with_tau0`] and friends break that
/// link on purpose for limit studies such as `tau0 -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConstants {
    /// Fine-structure constant, equal to e² in these units.
    pub alpha: f64,
    /// Electron mass (energy units).
    pub m: f64,
    /// Reduced Compton wavelength 1/m.
    pub lambda_bar: f64,
    /// Radiation-reaction time 2α/(3m).
    pub tau0: f64,
    /// Weight of the radiation-reaction jump operators, 2πα/3.
    pub sigma: f64,
    /// Weight of the vacuum-fluctuation jump operators, 2α/(3λ̄).
    pub sigma_minus: f64,
    /// Critical field m²/e.
    #[serde(rename = "E_cr")]
    pub e_cr: f64,
}

/// Builds the model constants for a given coupling and mass.
pub fn derived_constants(alpha: f64, m: f64) -> Result<ModelConstants> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::domain(format!("mass must be positive, got {m}")));
    }
    let lambda_bar = 1.0 / m;
    Ok(ModelConstants {
        alpha,
        m,
        lambda_bar,
        tau0: 2.0 * alpha / (3.0 * m),
        sigma: 2.0 * PI * alpha / 3.0,
        sigma_minus: 2.0 * alpha / (3.0 * lambda_bar),
        e_cr: m * m / alpha.sqrt(),
    })
}

impl ModelConstants {
    /// Physical electron: α = [`FINE_STRUCTURE`], m = 1.
    pub fn physical() -> Self {
        derived_constants(FINE_STRUCTURE, 1.0).expect("physical constants are valid")
    }

    /// Elementary charge e = √α.
    pub fn charge(&self) -> f64 {
        self.alpha.sqrt()
    }

    /// Replaces the radiation-reaction time, keeping everything else.
    /// Zero is allowed and switches off every τ₀-proportional correction.
    pub fn with_tau0(mut self, tau0: f64) -> Self {
        self.tau0 = tau0;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_sigma_minus(mut self, sigma_minus: f64) -> Self {
        self.sigma_minus = sigma_minus;
        self
    }

    /// Checks the value-level invariants: finite, positive mass and coupling,
    /// non-negative rates.
    pub fn validate(&self) -> Result<()> {
        let positive = [("alpha", self.alpha), ("m", self.m), ("E_cr", self.e_cr)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        let rates = [
            ("tau0", self.tau0),
            ("sigma", self.sigma),
            ("sigma_minus", self.sigma_minus),
        ];
        for (name, v) in rates {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for ModelConstants {
    fn default() -> Self {
        Self::physical()
    }
}
