// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Open-system dynamics of a Dirac particle with vacuum-fluctuation jump
//! operators, the radiation-reaction force that follows from them, and the
//! classical, kinetic and phase-space models built on top.

pub mod classical;
pub mod dirac;
pub mod error;
pub mod io;
pub mod kinetics;
pub mod lindblad;
pub mod radiation;
pub mod units;
pub mod validation;
pub mod wigner;

pub use error::{Error, Result};
