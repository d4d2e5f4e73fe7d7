// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Double-commutator dissipator D[ρ] = −(γ/2)[V,[V,ρ]] for Hermitian V.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::Operator;
use crate::dirac::max_abs;
use crate::error::{Error, Result};

fn check_hermitian(v: &Operator) -> Result<()> {
    let err = max_abs(&(v - v.adjoint()));
    if err > 1e-12 * (1.0 + max_abs(v)) {
        return Err(Error::domain(format!(
            "double-commutator dissipator needs Hermitian V (defect {err:e})"
        )));
    }
    Ok(())
}

pub fn double_commutator_dissipator(rho: &Operator, v: &Operator, gamma: f64) -> Result<Operator> {
    check_hermitian(v)?;
    let inner = v * rho - rho * v;
    let outer = v * &inner - &inner * v;
    Ok(outer * Complex64::new(-0.5 * gamma, 0.0))
}

/// d/dt Tr ρ² under the dissipator alone: 2γ·Tr[(ρV)² − ρ²V²] ≤ 0.
pub fn purity_rate(rho: &Operator, v: &Operator, gamma: f64) -> Result<f64> {
    check_hermitian(v)?;
    let rv = rho * v;
    let r2 = rho * rho;
    let v2 = v * v;
    Ok(2.0 * gamma * ((&rv * &rv).trace() - (r2 * v2).trace()).re)
}

/// Exact propagator of dρ/dt = −(γ/2)[V,[V,ρ]]: in the eigenbasis of V,
/// ρ_ij decays by exp(−(γ/2)(v_i − v_j)²t).
#[derive(Debug, Clone)]
pub struct DephasingChannel {
    eigenvectors: Operator,
    eigenvalues: Vec<f64>,
    gamma: f64,
}

impl DephasingChannel {
    pub fn new(v: &Operator, gamma: f64) -> Result<Self> {
        check_hermitian(v)?;
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
        }
        let eig = SymmetricEigen::new((v + v.adjoint()) * Complex64::new(0.5, 0.0));
        Ok(DephasingChannel {
            eigenvectors: eig.eigenvectors,
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            gamma,
        })
    }

    pub fn apply(&self, rho: &Operator, dt: f64) -> Operator {
        let q = &self.eigenvectors;
        let mut r = q.adjoint() * rho * q;
        let n = self.eigenvalues.len();
        for i in 0..n {
            for j in 0..n {
                let d = self.eigenvalues[i] - self.eigenvalues[j];
                r[(i, j)] *= (-0.5 * self.gamma * d * d * dt).exp();
            }
        }
        q * r * q.adjoint()
    }
}
