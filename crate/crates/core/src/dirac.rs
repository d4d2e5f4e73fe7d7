// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Dirac-representation gamma matrices, the free Dirac Hamiltonian, its
//! energy projectors and the exact free-particle Foldy–Wouthuysen unitary.
//!
//! Conventions: metric (+,−,−,−); γ⁰ = diag(1, 1, −1, −1);
//! γⁱ = [[0, σᵢ], [−σᵢ, 0]]. The chirality matrix is the plain product of
//! the lower-index matrices, γ₅ = γ₀γ₁γ₂γ₃, so γ₅² = −1. Dissipators only
//! see jump operators up to a global phase, so this choice never shows up
//! in the dynamics.

use std::sync::LazyLock;

use nalgebra::{Matrix2, Matrix4, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type SpinorMatrix = Matrix4<Complex64>;
pub type PauliMatrix = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Kinetic momentum π (energy units). Energy-like quantities need the mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Momentum3(pub Vector3<f64>);

impl Momentum3 {
    pub fn new(px: f64, py: f64, pz: f64) -> Self {
        Momentum3(Vector3::new(px, py, pz))
    }

    pub fn zero() -> Self {
        Momentum3(Vector3::zeros())
    }

    pub fn vector(&self) -> Vector3<f64> {
        self.0
    }

    /// π₀ = √(π² + m²).
    pub fn energy(&self, m: f64) -> f64 {
        (self.0.norm_squared() + m * m).sqrt()
    }

    pub fn gamma(&self, m: f64) -> f64 {
        self.energy(m) / m
    }

    /// v = π/π₀.
    pub fn velocity(&self, m: f64) -> Vector3<f64> {
        self.0 / self.energy(m)
    }
}

impl From<[f64; 3]> for Momentum3 {
    fn from(p: [f64; 3]) -> Self {
        Momentum3::new(p[0], p[1], p[2])
    }
}

/// The full set of Dirac-representation matrices used across the crate.
#[derive(Debug, Clone)]
pub struct GammaBasis {
    /// γ^μ, upper index.
    pub gamma: [SpinorMatrix; 4],
    /// γ₅ = γ₀γ₁γ₂γ₃.
    pub gamma5: SpinorMatrix,
    /// αᵢ = γ⁰γⁱ.
    pub alpha: [SpinorMatrix; 3],
    /// Σⱼ = −iγ₅γⱼγ₀.
    pub spin: [SpinorMatrix; 3],
}

impl GammaBasis {
    /// γ_μ = η_μν γ^ν.
    pub fn lower(&self, mu: usize) -> SpinorMatrix {
        if mu == 0 {
            self.gamma[0]
        } else {
            -self.gamma[mu]
        }
    }

    pub fn identity() -> SpinorMatrix {
        SpinorMatrix::identity()
    }
}

/// Minkowski metric diagonal.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub fn pauli() -> [PauliMatrix; 3] {
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -I, I, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// Assembles a 4×4 matrix from its four 2×2 blocks.
pub fn from_blocks(
    ul: &PauliMatrix,
    ur: &PauliMatrix,
    ll: &PauliMatrix,
    lr: &PauliMatrix,
) -> SpinorMatrix {
    let mut out = SpinorMatrix::zeros();
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(ul);
    out.fixed_view_mut::<2, 2>(0, 2).copy_from(ur);
    out.fixed_view_mut::<2, 2>(2, 0).copy_from(ll);
    out.fixed_view_mut::<2, 2>(2, 2).copy_from(lr);
    out
}

/// Block (row, col) ∈ {0, 1}² of a spinor matrix; 0 is the upper
/// (positive-energy in FW form) pair of components.
pub fn block(m: &SpinorMatrix, row: usize, col: usize) -> PauliMatrix {
    m.fixed_view::<2, 2>(2 * row, 2 * col).into_owned()
}

static BASIS: LazyLock<GammaBasis> = LazyLock::new(|| {
    let s = pauli();
    let z = PauliMatrix::zeros();
    let id = PauliMatrix::identity();
    let g0 = from_blocks(&id, &z, &z, &(-id));
    let gi = |k: usize| from_blocks(&z, &s[k], &(-s[k]), &z);
    let gamma = [g0, gi(0), gi(1), gi(2)];
    let lower = |mu: usize| if mu == 0 { gamma[0] } else { -gamma[mu] };
    let gamma5 = lower(0) * lower(1) * lower(2) * lower(3);
    let alpha = [g0 * gamma[1], g0 * gamma[2], g0 * gamma[3]];
    let spin = [1, 2, 3].map(|j| gamma5 * lower(j) * lower(0) * (-I));
    GammaBasis {
        gamma,
        gamma5,
        alpha,
        spin,
    }
});

pub fn gamma_basis() -> &'static GammaBasis {
    &BASIS
}

pub fn dagger(m: &SpinorMatrix) -> SpinorMatrix {
    m.adjoint()
}

pub fn commutator(a: &SpinorMatrix, b: &SpinorMatrix) -> SpinorMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &SpinorMatrix, b: &SpinorMatrix) -> SpinorMatrix {
    a * b + b * a
}

/// Largest entry modulus.
pub fn max_abs<R: nalgebra::Dim, C: nalgebra::Dim, S>(
    m: &nalgebra::Matrix<Complex64, R, C, S>,
) -> f64
where
    S: nalgebra::RawStorage<Complex64, R, C>,
{
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// α·p.
pub fn alpha_dot(p: &Vector3<f64>) -> SpinorMatrix {
    let b = gamma_basis();
    b.alpha[0] * real(p.x) + b.alpha[1] * real(p.y) + b.alpha[2] * real(p.z)
}

/// Σ·B.
pub fn spin_dot(v: &Vector3<f64>) -> SpinorMatrix {
    let b = gamma_basis();
    b.spin[0] * real(v.x) + b.spin[1] * real(v.y) + b.spin[2] * real(v.z)
}

/// H₀ = α·p + γ⁰m.
pub fn free_hamiltonian(p: &Momentum3, m: f64) -> SpinorMatrix {
    alpha_dot(&p.0) + gamma_basis().gamma[0] * real(m)
}

/// Free-particle FW unitary U = (π₀ + m + γ⃗·π)/√(2π₀(π₀ + m)), with
/// U H₀ U† = γ⁰π₀.
pub fn fw_unitary(p: &Momentum3, m: f64) -> SpinorMatrix {
    fw_unitary_with_energy(&p.0, p.energy(m), m)
}

/// The same matrix-valued symbol with π₀ supplied independently of π. The
/// recoil amplitudes evaluate it at a shifted energy that is not on shell.
pub fn fw_unitary_with_energy(p: &Vector3<f64>, pi0: f64, m: f64) -> SpinorMatrix {
    let b = gamma_basis();
    let gamma_dot_p = b.gamma[1] * real(p.x) + b.gamma[2] * real(p.y) + b.gamma[3] * real(p.z);
    let norm = (2.0 * pi0 * (pi0 + m)).sqrt();
    (SpinorMatrix::identity() * real(pi0 + m) + gamma_dot_p) / real(norm)
}

/// (𝒫₊, 𝒫₋) = ½(1 ± H₀/π₀).
pub fn energy_projectors(p: &Momentum3, m: f64) -> (SpinorMatrix, SpinorMatrix) {
    let sign = free_hamiltonian(p, m) / real(p.energy(m));
    let id = SpinorMatrix::identity();
    ((id + sign) * real(0.5), (id - sign) * real(0.5))
}

/// Eigenvalues of a Hermitian spinor matrix, ascending.
pub fn hermitian_eigenvalues(m: &SpinorMatrix) -> [f64; 4] {
    let eig = nalgebra::SymmetricEigen::new(*m);
    let mut vals = [0.0; 4];
    for (dst, src) in vals.iter_mut().zip(eig.eigenvalues.iter()) {
        *dst = *src;
    }
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn momentum() -> impl Strategy<Value = Momentum3> {
        (-6.0f64..6.0, -6.0f64..6.0, -6.0f64..6.0).prop_map(|(x, y, z)| Momentum3::new(x, y, z))
    }

    #[test]
    fn clifford_algebra() {
        let b = gamma_basis();
        for mu in 0..4 {
            for nu in 0..4 {
                let expected = if mu == nu {
                    SpinorMatrix::identity() * real(2.0 * METRIC[mu])
                } else {
                    SpinorMatrix::zeros()
                };
                let ac = anticommutator(&b.gamma[mu], &b.gamma[nu]);
                assert!(max_abs(&(ac - expected)) < 1e-14, "mu={mu} nu={nu}");
            }
            assert!(max_abs(&anticommutator(&b.gamma5, &b.gamma[mu])) < 1e-14);
        }
        assert!(max_abs(&(b.gamma[0] * b.gamma[0] - SpinorMatrix::identity())) < 1e-15);
    }

    #[test]
    fn gamma5_squares_to_minus_one() {
        let b = gamma_basis();
        assert!(max_abs(&(b.gamma5 * b.gamma5 + SpinorMatrix::identity())) < 1e-15);
    }

    #[test]
    fn spin_is_block_pauli() {
        let b = gamma_basis();
        let s = pauli();
        let z = PauliMatrix::zeros();
        for j in 0..3 {
            let expected = from_blocks(&s[j], &z, &z, &s[j]);
            assert!(max_abs(&(b.spin[j] - expected)) < 1e-15);
        }
    }

    #[test]
    fn rest_frame_hamiltonian_is_gamma0() {
        let h = free_hamiltonian(&Momentum3::zero(), 1.0);
        assert!(max_abs(&(h - gamma_basis().gamma[0])) < 1e-15);
        assert_eq!(hermitian_eigenvalues(&h), [-1.0, -1.0, 1.0, 1.0]);
    }

    #[test]
    fn hamiltonian_spectrum() {
        let e = hermitian_eigenvalues(&free_hamiltonian(&Momentum3::new(0.0, 0.0, 3.0), 1.0));
        let s = 10f64.sqrt();
        for (got, want) in e.iter().zip([-s, -s, s, s]) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
        let e = hermitian_eigenvalues(&free_hamiltonian(&Momentum3::new(1.0, 2.0, 2.0), 0.0));
        for (got, want) in e.iter().zip([-3.0, -3.0, 3.0, 3.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn fw_at_rest_is_identity() {
        let u = fw_unitary(&Momentum3::zero(), 1.0);
        assert!(max_abs(&(u - SpinorMatrix::identity())) < 1e-15);
    }

    #[test]
    fn fw_diagonalizes_unit_momentum() {
        let p = Momentum3::new(0.0, 0.0, 1.0);
        let u = fw_unitary(&p, 1.0);
        let d = u * free_hamiltonian(&p, 1.0) * u.adjoint();
        let s = 2f64.sqrt();
        let expected = SpinorMatrix::from_diagonal(&nalgebra::Vector4::new(
            real(s),
            real(s),
            real(-s),
            real(-s),
        ));
        assert!(max_abs(&(d - expected)) < 1e-14);
    }

    #[test]
    fn fw_spinor_identity() {
        let p = Momentum3::new(0.0, 0.0, 1.0);
        let m = 1.0;
        let pi0 = p.energy(m);
        let u = fw_unitary(&p, m);
        let psi = nalgebra::Vector4::new(ONE, ZERO, ZERO, ZERO);
        let out = u.adjoint() * psi;
        // lower pair = (σ·p/(π₀+m))Φ √((π₀+m)/2π₀)
        let s = pauli();
        let sp = s[2] * real(1.0);
        let phi = nalgebra::Vector2::new(ONE, ZERO);
        let lower = sp * phi * real(((pi0 + m) / (2.0 * pi0)).sqrt() / (pi0 + m));
        assert_relative_eq!(out[2].re, lower[0].re, epsilon = 1e-14);
        assert_relative_eq!(out[3].norm(), lower[1].norm(), epsilon = 1e-14);
        assert_relative_eq!(out[0].re, ((pi0 + m) / (2.0 * pi0)).sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn rest_frame_projector() {
        let (pp, _) = energy_projectors(&Momentum3::zero(), 1.0);
        let expected = SpinorMatrix::from_diagonal(&nalgebra::Vector4::new(ONE, ONE, ZERO, ZERO));
        assert!(max_abs(&(pp - expected)) < 1e-15);
    }

    #[test]
    fn projector_is_fw_conjugate_of_upper_block() {
        let p = Momentum3::new(0.0, 0.0, 1.0);
        let (pp, _) = energy_projectors(&p, 1.0);
        let u = fw_unitary(&p, 1.0);
        let upper = SpinorMatrix::from_diagonal(&nalgebra::Vector4::new(ONE, ONE, ZERO, ZERO));
        assert!(max_abs(&(u.adjoint() * upper * u - pp)) < 1e-14);
    }

    proptest! {
        #[test]
        fn projector_algebra(p in momentum(), m in 0.2f64..3.0) {
            let (pp, pm) = energy_projectors(&p, m);
            let id = SpinorMatrix::identity();
            let h = free_hamiltonian(&p, m);
            let e = real(p.energy(m));
            prop_assert!(max_abs(&(pp + pm - id)) < 1e-12);
            prop_assert!(max_abs(&(pp * pp - pp)) < 1e-12);
            prop_assert!(max_abs(&(pm * pm - pm)) < 1e-12);
            prop_assert!(max_abs(&(pp * pm)) < 1e-12);
            prop_assert!(max_abs(&commutator(&pp, &h)) < 1e-12 * p.energy(m));
            prop_assert!(max_abs(&(h * pp - pp * e)) < 1e-12 * p.energy(m));
            prop_assert!(max_abs(&(h * pm + pm * e)) < 1e-12 * p.energy(m));
            prop_assert!((pp.trace().re - 2.0).abs() < 1e-12);
        }

        #[test]
        fn fw_is_unitary_and_diagonalizing(p in momentum(), m in 0.5f64..2.0) {
            let u = fw_unitary(&p, m);
            prop_assert!(max_abs(&(u * u.adjoint() - SpinorMatrix::identity())) < 1e-12);
            let d = u * free_hamiltonian(&p, m) * u.adjoint();
            let g0e = gamma_basis().gamma[0] * real(p.energy(m));
            prop_assert!(max_abs(&(d - g0e)) < 1e-10);
        }

        #[test]
        fn hamiltonian_is_hermitian(p in momentum(), m in 0.0f64..2.0) {
            let h = free_hamiltonian(&p, m);
            prop_assert!(max_abs(&(h - h.adjoint())) < 1e-15);
        }
    }
}
