// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Phase-space symbols, the first-order gauge-invariant Moyal product for
//! uniform B, and the phase-space FW Hamiltonian and energy projectors.

use std::sync::Arc;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use crate::classical::FieldConfig;
use crate::dirac::{alpha_dot, gamma_basis, spin_dot, Momentum3, SpinorMatrix};
use crate::error::{Error, Result};

pub type SymbolFn = Arc<dyn Fn(&Vector3<f64>, &Vector3<f64>) -> DMatrix<Complex64> + Send + Sync>;
/// Returns the three partial derivatives.
pub type SymbolGrad = Arc<dyn Fn(&Vector3<f64>, &Vector3<f64>) -> [DMatrix<Complex64>; 3] + Send + Sync>;

/// Matrix-valued function of (x, π). Scalars are 1×1.
#[derive(Clone)]
pub struct PhaseSpaceSymbol {
    pub dim: usize,
    value: SymbolFn,
    grad_x: Option<SymbolGrad>,
    grad_pi: Option<SymbolGrad>,
}

impl std::fmt::Debug for PhaseSpaceSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhaseSpaceSymbol")
            .field("dim", &self.dim)
            .field("grad_x", &self.grad_x.is_some())
            .field("grad_pi", &self.grad_pi.is_some())
            .finish()
    }
}

fn scalar(z: Complex64) -> DMatrix<Complex64> {
    DMatrix::from_element(1, 1, z)
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

impl PhaseSpaceSymbol {
    pub fn new(dim: usize, value: SymbolFn) -> Self {
        PhaseSpaceSymbol {
            dim,
            value,
            grad_x: None,
            grad_pi: None,
        }
    }

    pub fn with_gradients(mut self, grad_x: SymbolGrad, grad_pi: SymbolGrad) -> Self {
        self.grad_x = Some(grad_x);
        self.grad_pi = Some(grad_pi);
        self
    }

    pub fn has_gradients(&self) -> bool {
        self.grad_x.is_some() && self.grad_pi.is_some()
    }

    pub fn eval(&self, x: &Vector3<f64>, pi: &Vector3<f64>) -> DMatrix<Complex64> {
        (self.value)(x, pi)
    }

    pub fn grad_x(&self, x: &Vector3<f64>, pi: &Vector3<f64>) -> Result<[DMatrix<Complex64>; 3]> {
        let g = self.grad_x.as_ref().ok_or_else(|| Error::domain("symbol has no x-derivative callback"))?;
        Ok(g(x, pi))
    }

    pub fn grad_pi(&self, x: &Vector3<f64>, pi: &Vector3<f64>) -> Result<[DMatrix<Complex64>; 3]> {
        let g = self.grad_pi.as_ref().ok_or_else(|| Error::domain("symbol has no π-derivative callback"))?;
        Ok(g(x, pi))
    }

    /// Coordinate x_k.
    pub fn position(k: usize) -> Self {
        Self::linear(unit(k), Vector3::zeros())
    }

    /// Kinetic momentum π_k.
    pub fn momentum(k: usize) -> Self {
        Self::linear(Vector3::zeros(), unit(k))
    }

    /// a·x + b·π.
    pub fn linear(a: Vector3<f64>, b: Vector3<f64>) -> Self {
        let value: SymbolFn = Arc::new(move |x, pi| scalar(re(a.dot(x) + b.dot(pi))));
        let gx: SymbolGrad = Arc::new(move |_, _| [0, 1, 2].map(|k| scalar(re(a[k]))));
        let gp: SymbolGrad = Arc::new(move |_, _| [0, 1, 2].map(|k| scalar(re(b[k]))));
        Self::new(1, value).with_gradients(gx, gp)
    }

    /// exp(a·x + b·π) for complex a, b.
    pub fn exponential(a: Vector3<Complex64>, b: Vector3<Complex64>) -> Self {
        let phase = move |x: &Vector3<f64>, pi: &Vector3<f64>| {
            (0..3).map(|k| a[k] * x[k] + b[k] * pi[k]).sum::<Complex64>().exp()
        };
        let value: SymbolFn = Arc::new(move |x, pi| scalar(phase(x, pi)));
        let gx: SymbolGrad = Arc::new(move |x, pi| {
            let e = phase(x, pi);
            [0, 1, 2].map(|k| scalar(a[k] * e))
        });
        let gp: SymbolGrad = Arc::new(move |x, pi| {
            let e = phase(x, pi);
            [0, 1, 2].map(|k| scalar(b[k] * e))
        });
        Self::new(1, value).with_gradients(gx, gp)
    }

    /// Pointwise adjoint f†, derivatives included.
    pub fn adjoint(&self) -> Self {
        let v = self.value.clone();
        let value: SymbolFn = Arc::new(move |x, pi| v(x, pi).adjoint());
        let lift = |g: &Option<SymbolGrad>| {
            g.clone().map(|g| -> SymbolGrad { Arc::new(move |x, pi| g(x, pi).map(|m| m.adjoint())) })
        };
        PhaseSpaceSymbol {
            dim: self.dim,
            value,
            grad_x: lift(&self.grad_x),
            grad_pi: lift(&self.grad_pi),
        }
    }

    /// Largest deviation between the derivative callbacks and central
    /// differences with step `h` at one point.
    pub fn derivative_mismatch(&self, x: &Vector3<f64>, pi: &Vector3<f64>, h: f64) -> Result<f64> {
        let gx = self.grad_x(x, pi)?;
        let gp = self.grad_pi(x, pi)?;
        let mut worst = 0.0f64;
        for k in 0..3 {
            let e = unit(k) * h;
            let fx = (self.eval(&(x + e), pi) - self.eval(&(x - e), pi)) / re(2.0 * h);
            let fp = (self.eval(x, &(pi + e)) - self.eval(x, &(pi - e))) / re(2.0 * h);
            worst = worst.max(crate::dirac::max_abs(&(fx - &gx[k])));
            worst = worst.max(crate::dirac::max_abs(&(fp - &gp[k])));
        }
        Ok(worst)
    }
}

fn unit(k: usize) -> Vector3<f64> {
    let mut e = Vector3::zeros();
    e[k] = 1.0;
    e
}

/// f⋆g truncated at `order` (0 or 1) in ħ, with the uniform-B magnetic
/// term (iħ/2)ε^{jlr}eB_r ∂_{π_j}f ∂_{π_l}g at first order. The result
/// carries no derivative callbacks.
pub fn moyal_star(
    f: &PhaseSpaceSymbol,
    g: &PhaseSpaceSymbol,
    field: &FieldConfig,
    charge: f64,
    hbar: f64,
    order: u32,
) -> Result<PhaseSpaceSymbol> {
    if f.dim != g.dim {
        return Err(Error::domain(format!("symbol dimensions differ: {} vs {}", f.dim, g.dim)));
    }
    if order > 1 {
        return Err(Error::domain(format!("star products above first order are not implemented (order {order})")));
    }
    if !field.is_uniform() {
        return Err(Error::domain("the magnetic star term is implemented for uniform B only"));
    }
    let (fv, gv) = (f.value.clone(), g.value.clone());
    if order == 0 {
        return Ok(PhaseSpaceSymbol::new(f.dim, Arc::new(move |x, pi| fv(x, pi) * gv(x, pi))));
    }
    if !(f.has_gradients() && g.has_gradients()) {
        return Err(Error::domain("first-order star product needs derivative callbacks"));
    }
    let fx = f.grad_x.clone().unwrap();
    let fp = f.grad_pi.clone().unwrap();
    let gx = g.grad_x.clone().unwrap();
    let gp = g.grad_pi.clone().unwrap();
    let eb = field.b0 * charge;
    let half = Complex64::new(0.0, 0.5 * hbar);
    let value: SymbolFn = Arc::new(move |x, pi| {
        let (dfx, dfp, dgx, dgp) = (fx(x, pi), fp(x, pi), gx(x, pi), gp(x, pi));
        let mut bracket = DMatrix::zeros(dfx[0].nrows(), dgx[0].ncols());
        for k in 0..3 {
            bracket += &dfx[k] * &dgp[k] - &dfp[k] * &dgx[k];
        }
        // ε^{jlr}B_r ∂_j f ∂_l g over the three cyclic (j, l, r) with antisymmetry.
        for (j, l, r) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            if eb[r] != 0.0 {
                bracket += (&dfp[j] * &dgp[l] - &dfp[l] * &dgp[j]) * re(eb[r]);
            }
        }
        fv(x, pi) * gv(x, pi) + bracket * half
    });
    Ok(PhaseSpaceSymbol::new(f.dim, value))
}

/// γ⁰E − (eħ/2E)γ⁰Σ·B(x), E = √(π² + m²).
pub fn ps_fw_hamiltonian(
    p: &Momentum3,
    x: &Vector3<f64>,
    field: &FieldConfig,
    m: f64,
    charge: f64,
    hbar: f64,
) -> SpinorMatrix {
    let e = p.energy(m);
    let g0 = gamma_basis().gamma[0];
    g0 * re(e) - g0 * spin_dot(&field.b_at(x)) * re(charge * hbar / (2.0 * e))
}

/// (𝒫₊, 𝒫₋, H_A) with H_A = −γ⁰γ^kπ_k + γ⁰m. Lowering π_k = −π^k makes
/// H_A = α·π + βm.
pub fn ps_projectors(p: &Momentum3, m: f64) -> (SpinorMatrix, SpinorMatrix, SpinorMatrix) {
    let h = alpha_dot(&p.0) + gamma_basis().gamma[0] * re(m);
    let sign = h / re(p.energy(m));
    let half = re(0.5);
    let id = SpinorMatrix::identity();
    ((id + sign) * half, (id - sign) * half, h)
}
