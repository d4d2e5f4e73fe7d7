// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::CStr;
use std::ptr;

use lindrad_ffi::*;

fn last_error() -> String {
    let p = lindrad_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn constants_roundtrip() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(lindrad_constants_new(0.01, 2.0, &mut c), LindradStatus::Ok);
        let mut v = LindradConstantValues::default();
        assert_eq!(lindrad_constants_get(c, &mut v), LindradStatus::Ok);
        assert!((v.tau0 - 2.0 * 0.01 / 6.0).abs() < 1e-16);
        assert!((v.sigma_minus - 2.0 * 0.01 * 2.0 / 3.0).abs() < 1e-16);
        assert_eq!(lindrad_constants_set_tau0(c, 0.0), LindradStatus::Ok);
        assert_eq!(lindrad_constants_get(c, &mut v), LindradStatus::Ok);
        assert_eq!(v.tau0, 0.0);
        assert!(lindrad_last_error().is_null());
        assert_eq!(lindrad_constants_set_tau0(c, -1.0), LindradStatus::Domain);
        lindrad_constants_free(c);
    }
}

#[test]
fn domain_and_null_errors() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(lindrad_constants_new(-1.0, 1.0, &mut c), LindradStatus::Domain);
        assert!(c.is_null());
        assert!(last_error().contains("alpha"));
        assert_eq!(lindrad_constants_physical(ptr::null_mut()), LindradStatus::NullPointer);
        let mut v = LindradConstantValues::default();
        assert_eq!(lindrad_constants_get(ptr::null(), &mut v), LindradStatus::NullPointer);
        assert_eq!(lindrad_trajectory_len(ptr::null()), 0);
        lindrad_constants_free(ptr::null_mut());
    }
}

#[test]
fn trajectory_matches_core() {
    use lindrad::classical::{integrate, FieldConfig, ModelKind, ParticleState};
    use lindrad::units::ModelConstants;
    use nalgebra::Vector3;
    unsafe {
        let mut c = ptr::null_mut();
        lindrad_constants_physical(&mut c);
        let b0 = [0.0, 0.0, 0.02];
        let mut f = ptr::null_mut();
        assert_eq!(lindrad_field_new(b0.as_ptr(), ptr::null(), &mut f), LindradStatus::Ok);
        let s0 = LindradState {
            t: 0.0,
            x: [0.0; 3],
            pi: [0.0, 9.95, 0.0],
            gamma: 0.0,
        };
        let mut t = ptr::null_mut();
        let st = lindrad_trajectory_integrate(LindradModel::LandauLifshitz, c, f, &s0, 1.0, 100, &mut t);
        assert_eq!(st, LindradStatus::Ok);
        let reference = integrate(
            ModelKind::LandauLifshitz,
            &ParticleState::new(0.0, Vector3::zeros(), Vector3::new(0.0, 9.95, 0.0)),
            &FieldConfig::uniform(Vector3::from(b0)),
            &ModelConstants::physical(),
            1.0,
            100,
        )
        .unwrap();
        assert_eq!(lindrad_trajectory_len(t), reference.len());
        let mut s = LindradState::default();
        for (k, r) in reference.iter().enumerate() {
            assert_eq!(lindrad_trajectory_get(t, k, &mut s), LindradStatus::Ok);
            assert_eq!(s.x, <[f64; 3]>::from(r.x));
            assert_eq!(s.pi, <[f64; 3]>::from(r.pi));
        }
        assert!(s.gamma < (1.0f64 + 9.95 * 9.95).sqrt());
        lindrad_trajectory_free(t);
        lindrad_field_free(f);
        lindrad_constants_free(c);
    }
}

#[test]
fn negative_dt_is_rejected() {
    unsafe {
        let mut c = ptr::null_mut();
        lindrad_constants_physical(&mut c);
        let mut f = ptr::null_mut();
        lindrad_field_new([0.0, 0.0, 1.0].as_ptr(), ptr::null(), &mut f);
        let s0 = LindradState {
            pi: [0.0, 1.0, 0.0],
            ..Default::default()
        };
        let mut t = ptr::null_mut();
        let st = lindrad_trajectory_integrate(LindradModel::Lorentz, c, f, &s0, -1.0, 10, &mut t);
        assert_eq!(st, LindradStatus::Domain);
        assert!(t.is_null());
        lindrad_field_free(f);
        lindrad_constants_free(c);
    }
}

#[test]
fn rr_force_and_ratios() {
    unsafe {
        let mut c = ptr::null_mut();
        lindrad_constants_physical(&mut c);
        let mut f = [0.0; 3];
        let xdot = [0.5, 0.0, 0.0];
        let zero = [0.0; 3];
        assert_eq!(lindrad_rr_force_lcfa(c, xdot.as_ptr(), zero.as_ptr(), f.as_mut_ptr()), LindradStatus::Ok);
        assert_eq!(f, [0.0; 3]);
        let fast = [1.0, 0.0, 0.0];
        assert_eq!(lindrad_rr_force_lcfa(c, fast.as_ptr(), zero.as_ptr(), f.as_mut_ptr()), LindradStatus::Domain);

        let mut r = LindradRatios::default();
        assert_eq!(lindrad_estimate_ratios(c, 1e-3, 10.0, 1.0, &mut r), LindradStatus::Ok);
        assert!((r.dq_over_dc - 1.0).abs() < 1e-12);
        assert!((r.rr_over_diff - 0.1).abs() < 1e-12);
        lindrad_constants_free(c);
    }
}

#[test]
fn lindblad_demo_relaxes() {
    unsafe {
        let p = [0.0, 0.0, 1.0];
        let mut d = ptr::null_mut();
        assert_eq!(lindrad_lindblad_demo_run(p.as_ptr(), 1.0, 0.5, 0.0, 0.01, 500, &mut d), LindradStatus::Ok);
        assert_eq!(lindrad_lindblad_demo_len(d), 501);
        let mut first = LindradDemoSample::default();
        let mut last = LindradDemoSample::default();
        lindrad_lindblad_demo_get(d, 0, &mut first);
        lindrad_lindblad_demo_get(d, 500, &mut last);
        assert!((first.pop_nes - 1.0).abs() < 1e-12);
        assert!(last.pop_nes < first.pop_nes);
        assert!((last.trace - 1.0).abs() < 1e-10);
        lindrad_lindblad_demo_free(d);
    }
}

#[test]
fn header_is_checked_in_and_complete() {
    let header = include_str!("../include/lindrad.h");
    for name in [
        "lindrad_constants_new",
        "lindrad_field_new",
        "lindrad_trajectory_integrate",
        "lindrad_rr_force_lcfa",
        "lindrad_estimate_ratios",
        "lindrad_lindblad_demo_run",
        "lindrad_last_error",
        "typedef struct LindradTrajectory LindradTrajectory;",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Compiles the C smoke program against the generated header and the
/// static library, then runs it.
#[test]
fn c_program_links_and_runs() {
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("liblindrad_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = std::process::Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
