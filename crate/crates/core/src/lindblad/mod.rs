// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Finite-dimensional Lindblad dynamics on a list of momentum modes, each
//! carrying a 4-component Dirac spinor.
//!
//! Normalization: Tr ρ = 1 and ⟨O⟩ = Tr[ρO]. The spin-trace convention
//! ⟨O⟩ = ¼Tr[P̂O] corresponds to P̂ = 4ρ, see
//! [`DensityMatrix::spin_trace_operator`].

mod renormalization;
mod vacuum;

pub use renormalization::{double_commutator_dissipator, purity_rate, DephasingChannel};
pub use vacuum::{
    vf_operator, vf_operator_derivative, vf_position_drift, vf_position_drift_at_rest,
    vf_position_drift_with, vf_strength, Sign, Stencil,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::dirac::{energy_projectors, free_hamiltonian, max_abs, Momentum3, SpinorMatrix};
use crate::error::{Error, Result};

pub type Operator = DMatrix<Complex64>;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-8;

/// Post-step bounds that trigger [`Error::Integration`].
const STEP_TRACE_DRIFT: f64 = 1e-8;
const STEP_MIN_EIGENVALUE: f64 = -1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    basis: Vec<Momentum3>,
    matrix: Operator,
}

impl DensityMatrix {
    /// Wraps a matrix over (mode ⊗ spinor) indices after checking
    /// Hermiticity, unit trace and positivity.
    pub fn new(basis: Vec<Momentum3>, matrix: Operator) -> Result<Self> {
        let dim = 4 * basis.len();
        if basis.is_empty() || matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::domain(format!(
                "density matrix must be {dim}x{dim} for {} modes, got {}x{}",
                basis.len(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let rho = DensityMatrix { basis, matrix };
        let herm = rho.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::domain(format!(
                "density matrix not Hermitian ({herm:e})"
            )));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::domain(format!("density matrix trace {tr} != 1")));
        }
        let min = rho.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::domain(format!(
                "density matrix has eigenvalue {min}"
            )));
        }
        Ok(rho)
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalized) state vector.
    pub fn pure(basis: Vec<Momentum3>, state: &DVector<Complex64>) -> Result<Self> {
        let norm = state.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("state vector has zero norm"));
        }
        let psi = state / Complex64::new(norm, 0.0);
        let matrix = &psi * psi.adjoint();
        Self::new(basis, matrix)
    }

    /// I/(4N).
    pub fn maximally_mixed(basis: Vec<Momentum3>) -> Self {
        let dim = 4 * basis.len();
        let matrix = Operator::identity(dim, dim) / Complex64::new(dim as f64, 0.0);
        DensityMatrix { basis, matrix }
    }

    /// Equal-weight mixture of the negative-energy states of every mode.
    pub fn negative_energy_mixture(basis: Vec<Momentum3>, m: f64) -> Result<Self> {
        let proj = block_diagonal(&basis, |p| energy_projectors(p, m).1);
        let n = basis.len() as f64;
        Self::new(basis, proj / Complex64::new(2.0 * n, 0.0))
    }

    /// A pure negative-energy state of mode `mode` (spin chosen along the
    /// largest column of 𝒫₋).
    pub fn negative_energy_state(basis: Vec<Momentum3>, mode: usize, m: f64) -> Result<Self> {
        let p = basis
            .get(mode)
            .ok_or_else(|| Error::domain(format!("mode {mode} out of range")))?;
        let (_, pm) = energy_projectors(p, m);
        let col = (0..4)
            .max_by(|&a, &b| pm.column(a).norm().total_cmp(&pm.column(b).norm()))
            .unwrap_or(0);
        let mut state = DVector::zeros(4 * basis.len());
        for r in 0..4 {
            state[4 * mode + r] = pm[(r, col)];
        }
        Self::pure(basis, &state)
    }

    pub fn basis(&self) -> &[Momentum3] {
        &self.basis
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Tr[ρO].
    pub fn expectation(&self, op: &Operator) -> Complex64 {
        (&self.matrix * op).trace()
    }

    /// Summed positive-energy population over all modes.
    pub fn positive_energy_population(&self, m: f64) -> f64 {
        let proj = block_diagonal(&self.basis, |p| energy_projectors(p, m).0);
        self.expectation(&proj).re
    }

    pub fn negative_energy_population(&self, m: f64) -> f64 {
        let proj = block_diagonal(&self.basis, |p| energy_projectors(p, m).1);
        self.expectation(&proj).re
    }

    /// P̂ = 4ρ, the operator for which ¼Tr[P̂O] = Tr[ρO].
    pub fn spin_trace_operator(&self) -> Operator {
        &self.matrix * Complex64::new(4.0, 0.0)
    }
}

pub fn hermitian_eigenvalues(m: &Operator) -> Vec<f64> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut vals: Vec<f64> = nalgebra::SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// A jump operator with its non-negative rate.
#[derive(Debug, Clone)]
pub struct JumpOperator {
    pub matrix: Operator,
    pub weight: f64,
}

impl JumpOperator {
    pub fn new(matrix: Operator, weight: f64) -> Result<Self> {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::domain(format!(
                "jump weight must be >= 0, got {weight}"
            )));
        }
        Ok(JumpOperator { matrix, weight })
    }

    /// Block-diagonal VF jump V_s over all modes with weight `weight`.
    pub fn vacuum(basis: &[Momentum3], sign: Sign, m: f64, weight: f64) -> Result<Self> {
        Self::new(block_diagonal(basis, |p| vf_operator(sign, p, m)), weight)
    }
}

/// Direct sum of one spinor matrix per mode.
pub fn block_diagonal(basis: &[Momentum3], f: impl Fn(&Momentum3) -> SpinorMatrix) -> Operator {
    let dim = 4 * basis.len();
    let mut out = Operator::zeros(dim, dim);
    for (k, p) in basis.iter().enumerate() {
        out.view_mut((4 * k, 4 * k), (4, 4)).copy_from(&f(p));
    }
    out
}

/// Free Dirac Hamiltonian on every mode.
pub fn free_hamiltonian_on(basis: &[Momentum3], m: f64) -> Operator {
    block_diagonal(basis, |p| free_hamiltonian(p, m))
}

/// dρ/dt = −i[H,ρ] + Σ w (VρV† − ½{V†V, ρ}).
pub fn lindblad_rhs(rho: &Operator, h: &Operator, jumps: &[JumpOperator]) -> Operator {
    let i = Complex64::new(0.0, 1.0);
    let mut out = (h * rho - rho * h) * (-i);
    for jump in jumps.iter().filter(|j| j.weight > 0.0) {
        let v = &jump.matrix;
        let vd = v.adjoint();
        let vdv = &vd * v;
        let term = v * rho * &vd - (&vdv * rho + rho * &vdv) * Complex64::new(0.5, 0.0);
        out += term * Complex64::new(jump.weight, 0.0);
    }
    out
}

/// Fixed-step propagator.
///
/// Each step is the Strang composition U(dt/2) ∘ K(dt) ∘ U(dt/2): the
/// Hamiltonian part is the exact unitary, the dissipative part is the Kraus
/// map with M₀ = I − ½Σ wV†V dt and M_s = √(w dt) V_s, renormalized to unit
/// trace. Completely positive for any dt. Steps whose Kraus trace defect
/// exceeds `max_trace_defect` are split in halves.
#[derive(Debug, Clone)]
pub struct LindbladPropagator {
    dt: f64,
    half_unitary: Operator,
    no_jump: Operator,
    kraus: Vec<Operator>,
    max_trace_defect: f64,
    max_halvings: u32,
    hamiltonian: Operator,
    jumps: Vec<JumpOperator>,
}

impl LindbladPropagator {
    pub fn new(h: &Operator, jumps: &[JumpOperator], dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::domain(format!("dt must be positive, got {dt}")));
        }
        let herm = max_abs(&(h - h.adjoint()));
        if herm > 1e-12 * (1.0 + max_abs(h)) {
            return Err(Error::domain(format!(
                "Hamiltonian not Hermitian ({herm:e})"
            )));
        }
        let dim = h.nrows();
        for j in jumps {
            if j.matrix.nrows() != dim || j.matrix.ncols() != dim {
                return Err(Error::domain("jump operator dimension mismatch"));
            }
        }
        let half_unitary = unitary_exp(h, 0.5 * dt);
        let mut generator = Operator::zeros(dim, dim);
        let mut kraus = Vec::new();
        for j in jumps.iter().filter(|j| j.weight > 0.0) {
            generator += j.matrix.adjoint() * &j.matrix * Complex64::new(j.weight, 0.0);
            kraus.push(&j.matrix * Complex64::new((j.weight * dt).sqrt(), 0.0));
        }
        let no_jump = Operator::identity(dim, dim) - generator * Complex64::new(0.5 * dt, 0.0);
        Ok(LindbladPropagator {
            dt,
            half_unitary,
            no_jump,
            kraus,
            max_trace_defect: 1e-4,
            max_halvings: 12,
            hamiltonian: h.clone(),
            jumps: jumps.to_vec(),
        })
    }

    pub fn with_max_trace_defect(mut self, limit: f64) -> Self {
        self.max_trace_defect = limit;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn apply(&self, rho: &Operator) -> (Operator, f64) {
        let u = &self.half_unitary;
        let ud = u.adjoint();
        let r = u * rho * &ud;
        let mut next = &self.no_jump * &r * self.no_jump.adjoint();
        for k in &self.kraus {
            next += k * &r * k.adjoint();
        }
        let next = u * next * &ud;
        let tr = next.trace().re;
        (next, tr)
    }

    /// Advances ρ by one step. `t` only labels errors.
    pub fn step(&self, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        let next = self.advance(&rho.matrix, 0, t)?;
        let next = (&next + next.adjoint()) * Complex64::new(0.5, 0.0);
        let out = DensityMatrix {
            basis: rho.basis.clone(),
            matrix: next,
        };
        let drift = (out.trace() - 1.0).abs();
        if !(drift <= STEP_TRACE_DRIFT) {
            return Err(Error::Integration {
                t,
                reason: format!("trace drift {drift:e}"),
            });
        }
        let min = out.min_eigenvalue();
        if min < STEP_MIN_EIGENVALUE {
            return Err(Error::Integration {
                t,
                reason: format!("eigenvalue {min:e}"),
            });
        }
        Ok(out)
    }

    fn advance(&self, rho: &Operator, depth: u32, t: f64) -> Result<Operator> {
        let (next, tr) = self.apply(rho);
        let defect = (tr - rho.trace().re).abs();
        if defect <= self.max_trace_defect {
            return Ok(next / Complex64::new(tr, 0.0));
        }
        if depth >= self.max_halvings {
            return Err(Error::Integration {
                t,
                reason: format!("Kraus trace defect {defect:e} after {depth} halvings"),
            });
        }
        let half = LindbladPropagator::new(&self.hamiltonian, &self.jumps, 0.5 * self.dt)?
            .with_max_trace_defect(self.max_trace_defect);
        let mid = half.advance(rho, depth + 1, t)?;
        half.advance(&mid, depth + 1, t + 0.5 * self.dt)
    }
}

/// exp(−iHt) for Hermitian H.
pub fn unitary_exp(h: &Operator, t: f64) -> Operator {
    let herm = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(herm);
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|e| Complex64::from_polar(1.0, -e * t)),
    );
    let q = &eig.eigenvectors;
    q * Operator::from_diagonal(&phases) * q.adjoint()
}

/// Single-step convenience wrapper around [`LindbladPropagator`].
pub fn lindblad_step(
    rho: &DensityMatrix,
    h: &Operator,
    jumps: &[JumpOperator],
    dt: f64,
) -> Result<DensityMatrix> {
    LindbladPropagator::new(h, jumps, dt)?.step(rho, 0.0)
}

/// One row of the `lindblad-demo` trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DemoSample {
    pub t: f64,
    pub pop_pes: f64,
    pub pop_nes: f64,
    pub trace: f64,
    pub min_eig: f64,
    pub purity: f64,
}

/// Parameters of the single-mode VF stabilization demo.
#[derive(Debug, Clone)]
pub struct DemoConfig {
    pub momentum: Momentum3,
    pub m: f64,
    pub sigma_plus: f64,
    pub sigma_minus: f64,
    pub dt: f64,
    pub steps: usize,
}

/// Evolves a pure negative-energy state under H₀ with both VF channels and
/// returns `steps + 1` samples including t = 0.
pub fn run_demo(cfg: &DemoConfig) -> Result<Vec<DemoSample>> {
    let basis = vec![cfg.momentum];
    let h = free_hamiltonian_on(&basis, cfg.m);
    let jumps = [
        JumpOperator::vacuum(&basis, Sign::Plus, cfg.m, cfg.sigma_plus)?,
        JumpOperator::vacuum(&basis, Sign::Minus, cfg.m, cfg.sigma_minus)?,
    ];
    let prop = LindbladPropagator::new(&h, &jumps, cfg.dt)?;
    let mut rho = DensityMatrix::negative_energy_state(basis, 0, cfg.m)?;
    let sample = |t: f64, rho: &DensityMatrix| DemoSample {
        t,
        pop_pes: rho.positive_energy_population(cfg.m),
        pop_nes: rho.negative_energy_population(cfg.m),
        trace: rho.trace(),
        min_eig: rho.min_eigenvalue(),
        purity: rho.purity(),
    };
    let mut out = Vec::with_capacity(cfg.steps + 1);
    out.push(sample(0.0, &rho));
    for n in 0..cfg.steps {
        let t = n as f64 * cfg.dt;
        rho = prop.step(&rho, t)?;
        out.push(sample(t + cfg.dt, &rho));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> Operator {
        let mut a = Operator::zeros(dim, rank);
        for z in a.iter_mut() {
            *z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let rho = &a * a.adjoint();
        let tr = rho.trace();
        rho / tr
    }

    #[test]
    fn unitary_step_preserves_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let basis = vec![
            Momentum3::new(0.3, -0.2, 1.1),
            Momentum3::new(0.0, 2.0, 0.0),
        ];
        let rho = DensityMatrix::new(basis.clone(), random_state(8, 3, &mut rng)).unwrap();
        let h = free_hamiltonian_on(&basis, 1.0);
        let before = rho.eigenvalues();
        let after = lindblad_step(&rho, &h, &[], 0.05).unwrap();
        assert!((after.trace() - 1.0).abs() < 1e-12);
        for (a, b) in before.iter().zip(after.eigenvalues()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_pes_rate_at_rest() {
        let sigma_plus = 0.3;
        let basis = vec![Momentum3::zero()];
        let rho = DensityMatrix::negative_energy_state(basis.clone(), 0, 1.0).unwrap();
        let h = free_hamiltonian_on(&basis, 1.0);
        let jumps = [JumpOperator::vacuum(&basis, Sign::Plus, 1.0, sigma_plus).unwrap()];
        let drho = lindblad_rhs(rho.matrix(), &h, &jumps);
        let (pp, _) = energy_projectors(&Momentum3::zero(), 1.0);
        let pp = block_diagonal(&basis, |_| pp);
        let rate = (&drho * &pp).trace().re;
        assert_relative_eq!(rate, 2.0 * sigma_plus, epsilon = 1e-14);
    }

    #[test]
    fn relaxes_to_positive_energy() {
        let sigma_plus = 0.5;
        let cfg = DemoConfig {
            momentum: Momentum3::zero(),
            m: 1.0,
            sigma_plus,
            sigma_minus: 0.0,
            dt: 0.01,
            steps: 2000,
        };
        let trace = run_demo(&cfg).unwrap();
        let last = trace.last().unwrap();
        assert!((last.pop_pes - 1.0).abs() < 1e-6, "{last:?}");
        assert!((last.trace - 1.0).abs() < 1e-12);
        assert!(trace.iter().all(|s| s.min_eig > -1e-8));
    }

    #[test]
    fn phase_of_jump_is_invisible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let basis = vec![Momentum3::new(0.4, 0.1, -0.7)];
        let rho = DensityMatrix::new(basis.clone(), random_state(4, 2, &mut rng)).unwrap();
        let h = free_hamiltonian_on(&basis, 1.0);
        let v = JumpOperator::vacuum(&basis, Sign::Plus, 1.0, 0.2).unwrap();
        let rotated =
            JumpOperator::new(&v.matrix * Complex64::from_polar(1.0, 1.234), 0.2).unwrap();
        let a = lindblad_step(&rho, &h, &[v], 0.01).unwrap();
        let b = lindblad_step(&rho, &h, &[rotated], 0.01).unwrap();
        assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-14);
    }

    #[test]
    fn oversized_step_is_split_not_rejected() {
        let basis = vec![Momentum3::zero()];
        let rho = DensityMatrix::maximally_mixed(basis.clone());
        let h = free_hamiltonian_on(&basis, 1.0);
        let v = JumpOperator::vacuum(&basis, Sign::Plus, 1.0, 5.0).unwrap();
        let out = lindblad_step(&rho, &h, &[v], 0.5).unwrap();
        assert!(out.min_eigenvalue() > -1e-12);
        assert!((out.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_inputs() {
        let basis = vec![Momentum3::zero()];
        let bad = Operator::identity(4, 4);
        assert!(DensityMatrix::new(basis.clone(), bad).is_err());
        let h = free_hamiltonian_on(&basis, 1.0);
        assert!(LindbladPropagator::new(&h, &[], 0.0).is_err());
        let mut nh = h.clone();
        nh[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(LindbladPropagator::new(&nh, &[], 0.1).is_err());
        assert!(JumpOperator::new(h, -1.0).is_err());
    }

    #[test]
    fn spin_trace_adapter() {
        let basis = vec![Momentum3::new(0.0, 0.0, 1.0)];
        let rho = DensityMatrix::maximally_mixed(basis.clone());
        let o = free_hamiltonian_on(&basis, 1.0);
        let spin_trace = (rho.spin_trace_operator() * &o).trace() * Complex64::new(0.25, 0.0);
        assert!((spin_trace - rho.expectation(&o)).norm() < 1e-15);
    }
}
