// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A density-matrix step violated trace or positivity bounds.
    #[error("integration failure at t = {t}: {reason}; reduce the step size")]
    Integration { t: f64, reason: String },

    /// The recoiled energy `pi0 - eta*omega/2` fell to or below the mass shell.
    #[error("recoil out of range: pi0' = {pi0_prime} <= m = {m}")]
    RecoilOutOfRange { pi0_prime: f64, m: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// Step rejected by an explicit stability bound.
    #[error("step rejected: dt = {dt} exceeds the {bound} bound; use dt <= {suggested}")]
    Cfl {
        dt: f64,
        suggested: f64,
        bound: &'static str,
    },

    #[error("resolution error: {0}")]
    Resolution(String),

    /// A classical state reached |v| >= 1.
    #[error("integration blow-up at t = {t}: |v| = {speed} >= 1")]
    BlowUp { t: f64, speed: f64 },

    #[error("config error at line {line}, key `{key}`: {msg}")]
    Config {
        line: usize,
        key: String,
        msg: String,
    },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error signals a violated physical invariant rather than
    /// bad input. The CLI maps these to exit code 1.
    pub fn is_physics_failure(&self) -> bool {
        matches!(
            self,
            Error::Integration { .. }
                | Error::BlowUp { .. }
                | Error::Quadrature(_)
                | Error::Cfl { .. }
                | Error::RecoilOutOfRange { .. }
                | Error::Resolution(_)
        )
    }
}
