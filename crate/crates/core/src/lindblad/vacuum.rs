// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Vacuum-fluctuation jump operators V_s = s·i·f·γ₅γ₀𝒫₋ₛ, f = √2·π₀/m.
//!
//! V₊ lowers a negative-energy state into the positive-energy sector and V₋
//! does the reverse. In FW form they are f times the off-diagonal block
//! projectors.

use num_complex::Complex64;

use crate::dirac::{energy_projectors, gamma_basis, Momentum3, SpinorMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// f = √2·π₀/m.
pub fn vf_strength(p: &Momentum3, m: f64) -> f64 {
    std::f64::consts::SQRT_2 * p.energy(m) / m
}

pub fn vf_operator(sign: Sign, p: &Momentum3, m: f64) -> SpinorMatrix {
    let b = gamma_basis();
    let (pp, pm) = energy_projectors(p, m);
    let target = match sign {
        Sign::Plus => pm,
        Sign::Minus => pp,
    };
    let coef = Complex64::new(0.0, sign.value() * vf_strength(p, m));
    b.gamma5 * b.gamma[0] * target * coef
}

/// Finite-difference stencil for ∂V/∂p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central2,
    Central4,
}

/// ∂V_s/∂p_k by central differences.
pub fn vf_operator_derivative(
    sign: Sign,
    p: &Momentum3,
    m: f64,
    k: usize,
    h: f64,
    stencil: Stencil,
) -> SpinorMatrix {
    let at = |d: f64| {
        let mut q = *p;
        q.0[k] += d;
        vf_operator(sign, &q, m)
    };
    let c = |x: f64| Complex64::new(x, 0.0);
    match stencil {
        Stencil::Central2 => (at(h) - at(-h)) * c(0.5 / h),
        Stencil::Central4 => {
            (at(-2.0 * h) - at(-h) * c(8.0) + at(h) * c(8.0) - at(2.0 * h)) * c(1.0 / (12.0 * h))
        }
    }
}

/// δr̂_k = ½Σ_s σ_s(V_s†·i∂_kV_s − i∂_kV_s†·V_s) with fourth-order central
/// differences at step 1e−4·m.
pub fn vf_position_drift(
    p: &Momentum3,
    m: f64,
    sigma_plus: f64,
    sigma_minus: f64,
) -> [SpinorMatrix; 3] {
    vf_position_drift_with(p, m, sigma_plus, sigma_minus, 1e-4 * m, Stencil::Central4)
}

pub fn vf_position_drift_with(
    p: &Momentum3,
    m: f64,
    sigma_plus: f64,
    sigma_minus: f64,
    h: f64,
    stencil: Stencil,
) -> [SpinorMatrix; 3] {
    let i = Complex64::new(0.0, 1.0);
    let mut out = [SpinorMatrix::zeros(); 3];
    for (sign, w) in [(Sign::Plus, sigma_plus), (Sign::Minus, sigma_minus)] {
        if w == 0.0 {
            continue;
        }
        let v = vf_operator(sign, p, m);
        let vd = v.adjoint();
        for (k, slot) in out.iter_mut().enumerate() {
            let dv = vf_operator_derivative(sign, p, m, k, h, stencil);
            let term = (vd * dv - dv.adjoint() * v) * i;
            *slot += term * Complex64::new(0.5 * w, 0.0);
        }
    }
    out
}

/// Closed form at p = 0: δr̂_k = (σ₊ + σ₋)/(2m)·iγ^k.
pub fn vf_position_drift_at_rest(m: f64, sigma_plus: f64, sigma_minus: f64) -> [SpinorMatrix; 3] {
    let b = gamma_basis();
    let c = Complex64::new(0.0, (sigma_plus + sigma_minus) / (2.0 * m));
    [b.gamma[1] * c, b.gamma[2] * c, b.gamma[3] * c]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{block, energy_projectors, fw_unitary, max_abs, PauliMatrix};
    use proptest::prelude::*;

    fn momentum() -> impl Strategy<Value = Momentum3> {
        (-4.0f64..4.0, -4.0f64..4.0, -4.0f64..4.0).prop_map(|(x, y, z)| Momentum3::new(x, y, z))
    }

    #[test]
    fn at_rest_is_block_raising() {
        let v = vf_operator(Sign::Plus, &Momentum3::zero(), 1.0);
        let f = std::f64::consts::SQRT_2;
        let z = PauliMatrix::zeros();
        let id = PauliMatrix::identity() * Complex64::new(f, 0.0);
        assert!(max_abs(&(block(&v, 0, 1) - id)) < 1e-15);
        assert!(max_abs(&(block(&v, 0, 0) - z)) < 1e-15);
        assert!(max_abs(&(block(&v, 1, 0) - z)) < 1e-15);
        assert!(max_abs(&(block(&v, 1, 1) - z)) < 1e-15);
    }

    #[test]
    fn drift_at_rest_matches_closed_form() {
        let m = 1.3;
        let num = vf_position_drift(&Momentum3::zero(), m, 0.4, 0.1);
        let exact = vf_position_drift_at_rest(m, 0.4, 0.1);
        for k in 0..3 {
            assert!(max_abs(&(num[k] - exact[k])) < 1e-9, "k={k}");
        }
    }

    #[test]
    fn second_order_stencil_converges_quadratically() {
        let p = Momentum3::new(0.7, -0.3, 0.5);
        for sign in [Sign::Plus, Sign::Minus] {
            for k in 0..3 {
                let reference = vf_operator_derivative(sign, &p, 1.0, k, 1e-3, Stencil::Central4);
                let err = |h: f64| {
                    max_abs(
                        &(vf_operator_derivative(sign, &p, 1.0, k, h, Stencil::Central2)
                            - reference),
                    )
                };
                let ratio = err(0.04) / err(0.02);
                assert!((ratio - 4.0).abs() < 0.2, "k={k} ratio {ratio}");
            }
        }
    }

    #[test]
    fn stencils_agree_on_drift() {
        let p = Momentum3::new(0.7, -0.3, 0.5);
        let a = vf_position_drift_with(&p, 1.0, 0.5, 0.2, 1e-3, Stencil::Central2);
        let b = vf_position_drift(&p, 1.0, 0.5, 0.2);
        for k in 0..3 {
            assert!(max_abs(&(a[k] - b[k])) < 1e-8);
        }
    }

    #[test]
    fn zero_weights_give_zero_drift() {
        let d = vf_position_drift(&Momentum3::new(0.2, 0.0, 1.0), 1.0, 0.0, 0.0);
        assert!(d.iter().all(|m| max_abs(m) == 0.0));
    }

    #[test]
    fn singular_values_at_unit_momentum() {
        let p = Momentum3::new(0.0, 0.0, 1.0);
        assert!((vf_strength(&p, 1.0) - 2.0).abs() < 1e-15);
        let v = vf_operator(Sign::Plus, &p, 1.0);
        let sv = nalgebra::SVD::new(v, false, false).singular_values;
        let mut sv: Vec<f64> = sv.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        assert!((sv[0] - 2.0).abs() < 1e-12 && (sv[1] - 2.0).abs() < 1e-12);
        assert!(sv[2].abs() < 1e-12 && sv[3].abs() < 1e-12);
    }

    #[test]
    fn minus_annihilates_negative_energy() {
        let p = Momentum3::zero();
        let (_, pm) = energy_projectors(&p, 1.0);
        assert!(max_abs(&(vf_operator(Sign::Minus, &p, 1.0) * pm)) < 1e-15);
    }

    proptest! {
        #[test]
        fn fw_form_is_pure_block(p in momentum()) {
            let m = 1.0;
            let u = fw_unitary(&p, m);
            let f = vf_strength(&p, m);
            let id = PauliMatrix::identity() * Complex64::new(f, 0.0);
            let vp = u * vf_operator(Sign::Plus, &p, m) * u.adjoint();
            let vm = u * vf_operator(Sign::Minus, &p, m) * u.adjoint();
            let tol = 1e-12 * f;
            prop_assert!(max_abs(&(block(&vp, 0, 1) - id)) < tol);
            prop_assert!(max_abs(&block(&vp, 0, 0)) < tol);
            prop_assert!(max_abs(&block(&vp, 1, 1)) < tol);
            prop_assert!(max_abs(&block(&vp, 1, 0)) < tol);
            prop_assert!(max_abs(&(block(&vm, 1, 0) - id)) < tol);
            prop_assert!(max_abs(&block(&vm, 0, 1)) < tol);
        }

        #[test]
        fn vdagger_v_is_scaled_projector(p in momentum()) {
            let m = 1.0;
            let f2 = vf_strength(&p, m).powi(2);
            let (pp, pm) = energy_projectors(&p, m);
            let vp = vf_operator(Sign::Plus, &p, m);
            let vm = vf_operator(Sign::Minus, &p, m);
            let c = Complex64::new(f2, 0.0);
            prop_assert!(max_abs(&(vp.adjoint() * vp - pm * c)) < 1e-11 * f2);
            prop_assert!(max_abs(&(vm.adjoint() * vm - pp * c)) < 1e-11 * f2);
            // V₊ maps into the positive-energy sector.
            prop_assert!(max_abs(&(pm * vp)) < 1e-11 * f2.sqrt());
        }

        #[test]
        fn drift_is_hermitian(p in momentum()) {
            let d = vf_position_drift(&p, 1.0, 0.3, 0.2);
            for k in 0..3 {
                prop_assert!(max_abs(&(d[k] - d[k].adjoint())) < 1e-8);
            }
        }
    }
}
