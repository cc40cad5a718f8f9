//! Exercises the C ABI through its Rust declarations: handle lifecycles,
//! status codes, error messages and agreement with the core crate.

use std::ffi::{CStr, CString};
use std::ptr;

use conemod::conformal_flow::nu;
use conemod::spinor_algebra::FourVector;
use conemod_ffi::*;

const STATE: &str = r#"{
    "majorana": true,
    "terms": [{"type": "bump", "center": [0.0, 0.1, 0.0], "radius": 0.7, "degree": 5, "taper": 6.0,
               "spinor": [[1.0, 0.0], [0.2, 0.3]]}]
}"#;

fn last_error() -> String {
    unsafe { CStr::from_ptr(conemod_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(conemod_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn flow_matches_the_core_crate() {
    let x = [0.2, -0.3, 0.1, 0.25];
    let mut y = [0.0; 4];
    assert_eq!(
        unsafe { conemod_flow(0.7, x.as_ptr(), y.as_mut_ptr()) },
        ConemodStatus::Ok
    );
    let want = nu(0.7, &FourVector::new(x[0], x[1], x[2], x[3])).unwrap();
    assert_eq!(y, [want.x0, want.x[0], want.x[1], want.x[2]]);
    let mut t = 0.0;
    assert_eq!(unsafe { conemod_tau(0.0, x.as_ptr(), &mut t) }, ConemodStatus::Ok);
    assert_eq!(t, 1.0);
}

#[test]
fn singular_points_and_null_pointers_are_reported() {
    // τ(λ, (0, 2, 0, 0)) vanishes at λ = 2 artanh(1/2).
    let lambda = 2.0 * 0.5f64.atanh();
    let x = [0.0, 2.0, 0.0, 0.0];
    let mut y = [0.0; 4];
    assert_eq!(
        unsafe { conemod_flow(lambda, x.as_ptr(), y.as_mut_ptr()) },
        ConemodStatus::SingularPoint
    );
    assert!(last_error().contains("singular"));
    assert_eq!(
        unsafe { conemod_flow(0.0, ptr::null(), y.as_mut_ptr()) },
        ConemodStatus::NullPointer
    );
    assert_eq!(
        unsafe { conemod_tau(0.0, x.as_ptr(), ptr::null_mut()) },
        ConemodStatus::NullPointer
    );
    assert_eq!(last_error(), "out is null");
}

#[test]
fn invalid_grids_are_rejected() {
    let mut grid = ptr::null_mut();
    assert_eq!(
        unsafe { conemod_grid_new(-1.0, 32, &mut grid) },
        ConemodStatus::InvalidGrid
    );
    assert!(grid.is_null());
    assert!(!last_error().is_empty());
    unsafe { conemod_grid_free(ptr::null_mut()) };
}

#[test]
fn entropy_of_a_state_through_handles() {
    unsafe {
        let mut grid = ptr::null_mut();
        assert_eq!(conemod_grid_new(2.0, 32, &mut grid), ConemodStatus::Ok);
        let json = CString::new(STATE).unwrap();
        let mut state = ptr::null_mut();
        assert_eq!(
            conemod_state_from_json(grid, json.as_ptr(), &mut state),
            ConemodStatus::Ok
        );
        assert!(conemod_state_normalization_factor(state) > 0.0);
        let mut values = ConemodEntropy::default();
        assert_eq!(conemod_entropy(state, &mut values), ConemodStatus::Ok);
        assert!(values.s_generator > 0.0);
        assert!(values.dev_generator_fourier < 1e-3);
        assert_eq!(last_error(), "");
        conemod_state_free(state);
        conemod_grid_free(grid);
    }
}

#[test]
fn malformed_and_oversized_states() {
    unsafe {
        let mut grid = ptr::null_mut();
        assert_eq!(conemod_grid_new(2.0, 24, &mut grid), ConemodStatus::Ok);
        let mut state = ptr::null_mut();
        let bad = CString::new(r#"{"terms": [{"type": "cube"}]}"#).unwrap();
        assert_eq!(
            conemod_state_from_json(grid, bad.as_ptr(), &mut state),
            ConemodStatus::InvalidInput
        );
        assert!(state.is_null());
        let wide = CString::new(STATE.replace("0.7", "1.3")).unwrap();
        assert_eq!(
            conemod_state_from_json(grid, wide.as_ptr(), &mut state),
            ConemodStatus::Ok
        );
        let mut values = ConemodEntropy::default();
        assert_eq!(conemod_entropy(state, &mut values), ConemodStatus::SupportViolation);
        conemod_state_free(state);
        conemod_grid_free(grid);
    }
}

#[test]
fn suite_reports_through_handles() {
    unsafe {
        let config = CString::new(r#"{"suite": "spinor", "instances": 200}"#).unwrap();
        let mut report = ptr::null_mut();
        assert_eq!(conemod_run_suite(config.as_ptr(), &mut report), ConemodStatus::Ok);
        assert!(conemod_report_pass(report));
        let json = CStr::from_ptr(conemod_report_json(report)).to_str().unwrap();
        let value: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(value["suite"], "spinor");
        conemod_report_free(report);

        let unknown = CString::new(r#"{"suite": "nope"}"#).unwrap();
        assert_eq!(
            conemod_run_suite(unknown.as_ptr(), &mut report),
            ConemodStatus::InvalidInput
        );
        assert!(last_error().contains("suite"));
        assert!(!conemod_report_pass(ptr::null()));
        assert!(conemod_report_json(ptr::null()).is_null());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/conemod.h")).unwrap();
    for name in [
        "conemod_version",
        "conemod_last_error",
        "conemod_tau",
        "conemod_flow",
        "conemod_grid_new",
        "conemod_grid_free",
        "conemod_state_from_json",
        "conemod_state_normalization_factor",
        "conemod_state_free",
        "conemod_entropy",
        "conemod_run_suite",
        "conemod_report_pass",
        "conemod_report_json",
        "conemod_report_free",
        "CONEMOD_STATUS_SUPPORT_VIOLATION",
        "typedef struct ConemodGrid ConemodGrid",
    ] {
        assert!(header.contains(name), "{name} missing from the header");
    }
}
