// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! C interface to `lindrad`.
//!
//! Objects are opaque handles created by `*_new`/`*_run` functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`LindradStatus`]; on failure the message is available from
//! [`lindrad_last_error`] on the same thread. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lindrad::classical::{integrate, FieldConfig, ModelKind, ParticleState};
use lindrad::dirac::Momentum3;
use lindrad::kinetics::estimate_ratios;
use lindrad::lindblad::{run_demo, DemoConfig, DemoSample};
use lindrad::radiation::{rr_force_lcfa, TrajectoryPoint};
use lindrad::units::{derived_constants, ModelConstants};
use lindrad::Error;
use nalgebra::{Matrix3, Vector3};

/// Result of every fallible call. Zero means success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LindradStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside the domain of the operation.
    Domain = 2,
    Integration = 3,
    RecoilOutOfRange = 4,
    Quadrature = 5,
    /// Step size above a stability bound.
    Cfl = 6,
    Resolution = 7,
    BlowUp = 8,
    Config = 9,
    Io = 10,
    IndexOutOfRange = 11,
    Panic = 12,
}

impl From<&Error> for LindradStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => LindradStatus::Domain,
            Error::Integration { .. } => LindradStatus::Integration,
            Error::RecoilOutOfRange { .. } => LindradStatus::RecoilOutOfRange,
            Error::Quadrature(_) => LindradStatus::Quadrature,
            Error::Cfl { .. } => LindradStatus::Cfl,
            Error::Resolution(_) => LindradStatus::Resolution,
            Error::BlowUp { .. } => LindradStatus::BlowUp,
            Error::Config { .. } => LindradStatus::Config,
            Error::Io { .. } => LindradStatus::Io,
        }
    }
}

/// Classical trajectory models.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LindradModel {
    Lorentz = 0,
    LandauLifshitz = 1,
    VfEhrenfest = 2,
    SokolovVariant = 3,
}

impl From<LindradModel> for ModelKind {
    fn from(m: LindradModel) -> Self {
        match m {
            LindradModel::Lorentz => ModelKind::Lorentz,
            LindradModel::LandauLifshitz => ModelKind::LandauLifshitz,
            LindradModel::VfEhrenfest => ModelKind::VfEhrenfest,
            LindradModel::SokolovVariant => ModelKind::SokolovVariant,
        }
    }
}

/// Plain copy of the model constants.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LindradConstantValues {
    pub alpha: f64,
    pub m: f64,
    pub lambda_bar: f64,
    pub tau0: f64,
    pub sigma: f64,
    pub sigma_minus: f64,
    pub e_cr: f64,
}

/// Classical state; `pi` is the kinetic momentum.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LindradState {
    pub t: f64,
    pub x: [f64; 3],
    pub pi: [f64; 3],
    pub gamma: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LindradRatios {
    pub dq_over_dc: f64,
    pub frad_over_f: f64,
    pub rr_over_diff: f64,
}

/// One row of the Lindblad demo output.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LindradDemoSample {
    pub t: f64,
    pub pop_pes: f64,
    pub pop_nes: f64,
    pub trace: f64,
    pub min_eig: f64,
    pub purity: f64,
}

pub struct LindradConstants(ModelConstants);

pub struct LindradField(FieldConfig);

pub struct LindradTrajectory {
    states: Vec<ParticleState>,
    m: f64,
}

pub struct LindradLindbladDemo(Vec<DemoSample>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (LindradStatus, String)>) -> LindradStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LindradStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            LindradStatus::Panic
        }
    }
}

fn lift(e: Error) -> (LindradStatus, String) {
    ((&e).into(), e.to_string())
}

fn null(what: &str) -> (LindradStatus, String) {
    (LindradStatus::NullPointer, format!("{what} is null"))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, (LindradStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn vec3(p: *const f64, what: &str) -> Result<Vector3<f64>, (LindradStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(Vector3::from_column_slice(std::slice::from_raw_parts(p, 3)))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), (LindradStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or NULL after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lindrad_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lindrad_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Constants derived from `alpha` and `m`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn lindrad_constants_new(alpha: f64, m: f64, out: *mut *mut LindradConstants) -> LindradStatus {
    guard(|| {
        let c = derived_constants(alpha, m).map_err(lift)?;
        put(out, LindradConstants(c))
    })
}

/// Physical electron constants (α = 1/137.035999084, m = 1).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn lindrad_constants_physical(out: *mut *mut LindradConstants) -> LindradStatus {
    guard(|| put(out, LindradConstants(ModelConstants::physical())))
}

/// Overrides τ₀ (zero switches off radiation-reaction corrections).
///
/// # Safety
/// `c` must be a live handle from `lindrad_constants_new`.
#[no_mangle]
pub unsafe extern "C" fn lindrad_constants_set_tau0(c: *mut LindradConstants, tau0: f64) -> LindradStatus {
    guard(|| {
        let c = c.as_mut().ok_or_else(|| null("constants"))?;
        let next = c.0.with_tau0(tau0);
        next.validate().map_err(lift)?;
        c.0 = next;
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lindrad_constants_get(c: *const LindradConstants, out: *mut LindradConstantValues) -> LindradStatus {
    guard(|| {
        let c = &get(c, "constants")?.0;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = LindradConstantValues {
            alpha: c.alpha,
            m: c.m,
            lambda_bar: c.lambda_bar,
            tau0: c.tau0,
            sigma: c.sigma,
            sigma_minus: c.sigma_minus,
            e_cr: c.e_cr,
        };
        Ok(())
    })
}

/// # Safety
/// `c` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lindrad_constants_free(c: *mut LindradConstants) {
    free(c)
}

/// Field B(x) = b0 + Gᵀx with `grad_b` row-major, G[i][j] = ∂ᵢB_j,
/// divergence-free. `grad_b` may be NULL for a uniform field.
///
/// # Safety
/// `b0` must point to 3 doubles, `grad_b` to 9 doubles or be NULL, `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn lindrad_field_new(b0: *const f64, grad_b: *const f64, out: *mut *mut LindradField) -> LindradStatus {
    guard(|| {
        let b0 = vec3(b0, "b0")?;
        let field = if grad_b.is_null() {
            FieldConfig::uniform(b0)
        } else {
            let g = Matrix3::from_row_slice(std::slice::from_raw_parts(grad_b, 9));
            FieldConfig::new(b0, g).map_err(lift)?
        };
        put(out, LindradField(field))
    })
}

/// # Safety
/// `f` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lindrad_field_free(f: *mut LindradField) {
    free(f)
}

/// Integrates `steps` RK4 steps of size `dt` from `initial` (its `gamma`
/// field is ignored); the result holds `steps + 1` states.
///
/// # Safety
/// All pointers must be valid; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn lindrad_trajectory_integrate(
    model: LindradModel,
    consts: *const LindradConstants,
    field: *const LindradField,
    initial: *const LindradState,
    dt: f64,
    steps: usize,
    out: *mut *mut LindradTrajectory,
) -> LindradStatus {
    guard(|| {
        let c = &get(consts, "constants")?.0;
        let f = &get(field, "field")?.0;
        let s = get(initial, "initial")?;
        let s0 = ParticleState::new(s.t, Vector3::from(s.x), Vector3::from(s.pi));
        let states = integrate(model.into(), &s0, f, c, dt, steps).map_err(lift)?;
        put(out, LindradTrajectory { states, m: c.m })
    })
}

/// Number of stored states; 0 for NULL.
///
/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lindrad_trajectory_len(t: *const LindradTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.states.len())
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lindrad_trajectory_get(t: *const LindradTrajectory, index: usize, out: *mut LindradState) -> LindradStatus {
    guard(|| {
        let t = get(t, "trajectory")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = t.states.get(index).ok_or_else(|| {
            (LindradStatus::IndexOutOfRange, format!("index {index} >= length {}", t.states.len()))
        })?;
        *out = LindradState {
            t: s.t,
            x: s.x.into(),
            pi: s.pi.into(),
            gamma: s.gamma(t.m),
        };
        Ok(())
    })
}

/// # Safety
/// `t` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lindrad_trajectory_free(t: *mut LindradTrajectory) {
    free(t)
}

/// Local radiation-reaction force for velocity `xdot` and acceleration
/// `xddot`, written to `out[3]`.
///
/// # Safety
/// `xdot`, `xddot` and `out` must each point to 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn lindrad_rr_force_lcfa(
    consts: *const LindradConstants,
    xdot: *const f64,
    xddot: *const f64,
    out: *mut f64,
) -> LindradStatus {
    guard(|| {
        let c = &get(consts, "constants")?.0;
        let tp = TrajectoryPoint::new(vec3(xdot, "xdot")?, vec3(xddot, "xddot")?).map_err(lift)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = rr_force_lcfa(&tp, c);
        std::slice::from_raw_parts_mut(out, 3).copy_from_slice(f.as_slice());
        Ok(())
    })
}

/// Order-of-magnitude ratios at field E/E_cr, Lorentz factor `gamma` and
/// momentum spread Δp/m.
///
/// # Safety
/// `consts` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lindrad_estimate_ratios(
    consts: *const LindradConstants,
    e_over_ecr: f64,
    gamma: f64,
    delta_p_over_m: f64,
    out: *mut LindradRatios,
) -> LindradStatus {
    guard(|| {
        let c = &get(consts, "constants")?.0;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = estimate_ratios(e_over_ecr, gamma, delta_p_over_m, c).map_err(lift)?;
        *out = LindradRatios {
            dq_over_dc: r.dq_over_dc,
            frad_over_f: r.frad_over_f,
            rr_over_diff: r.rr_over_diff,
        };
        Ok(())
    })
}

/// Relaxes a negative-energy state at momentum `p[3]` under the two
/// vacuum channels; the result holds `steps + 1` samples.
///
/// # Safety
/// `p` must point to 3 doubles and `out` must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn lindrad_lindblad_demo_run(
    p: *const f64,
    m: f64,
    sigma_plus: f64,
    sigma_minus: f64,
    dt: f64,
    steps: usize,
    out: *mut *mut LindradLindbladDemo,
) -> LindradStatus {
    guard(|| {
        let cfg = DemoConfig {
            momentum: Momentum3(vec3(p, "p")?),
            m,
            sigma_plus,
            sigma_minus,
            dt,
            steps,
        };
        put(out, LindradLindbladDemo(run_demo(&cfg).map_err(lift)?))
    })
}

/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lindrad_lindblad_demo_len(d: *const LindradLindbladDemo) -> usize {
    d.as_ref().map_or(0, |d| d.0.len())
}

/// # Safety
/// `d` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lindrad_lindblad_demo_get(
    d: *const LindradLindbladDemo,
    index: usize,
    out: *mut LindradDemoSample,
) -> LindradStatus {
    guard(|| {
        let d = get(d, "demo")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = d.0.get(index).ok_or_else(|| {
            (LindradStatus::IndexOutOfRange, format!("index {index} >= length {}", d.0.len()))
        })?;
        *out = LindradDemoSample {
            t: s.t,
            pop_pes: s.pop_pes,
            pop_nes: s.pop_nes,
            trace: s.trace,
            min_eig: s.min_eig,
            purity: s.purity,
        };
        Ok(())
    })
}

/// # Safety
/// `d` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lindrad_lindblad_demo_free(d: *mut LindradLindbladDemo) {
    free(d)
}
