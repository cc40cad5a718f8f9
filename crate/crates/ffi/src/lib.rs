//! C ABI for `conemod`.
//!
//! Grids, states and reports cross the boundary as opaque handles that are
//! created by a `*_new`/`*_from_*` function and released with the matching
//! `*_free`. Every fallible function returns a [`ConemodStatus`]; on failure
//! a message is stored per thread and can be read with
//! [`conemod_last_error`]. Panics are caught at the boundary and reported as
//! [`ConemodStatus::Panic`].
//!
//! Strings returned by the library are owned by the handle or by the
//! library and must not be freed by the caller.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conemod::cli_harness::{run_suite, to_json_string, CheckReport, RunConfig};
use conemod::conformal_flow::{nu, tau};
use conemod::dirac_majorana::{majorana_embed, MajoranaState};
use conemod::entropy::{check_admissible, entropy_report, EntropyReport};
use conemod::error::{Error, FlowError};
use conemod::spinor_algebra::FourVector;
use conemod::wave_space::{synthesize_cauchy, GridSpec, StateSpec};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConemodStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed input: bad JSON, invalid UTF-8, unknown fields.
    InvalidInput = 2,
    /// Grid parameters out of range.
    InvalidGrid = 3,
    /// The state does not have unit norm.
    NotNormalized = 4,
    /// The state is not supported in the unit ball.
    SupportViolation = 5,
    /// The point lies on the singular set of the flow.
    SingularPoint = 6,
    /// File-system error.
    Io = 7,
    /// Any other numerical error.
    Numerical = 8,
    /// A panic was caught at the boundary.
    Panic = 9,
}

/// Opaque grid handle.
pub struct ConemodGrid(GridSpec);

/// Opaque handle of a unit-norm Majorana state.
pub struct ConemodState {
    state: MajoranaState,
    factor: f64,
}

/// Opaque handle of a suite report together with its JSON text.
pub struct ConemodReport {
    report: CheckReport,
    json: CString,
}

/// Entropy values of one state.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ConemodEntropy {
    /// Route through the modular generator.
    pub s_generator: f64,
    /// Momentum-space route.
    pub s_fourier: f64,
    /// Route through the weighted energy density.
    pub s_energy: f64,
    /// Relative deviation between the generator and Fourier routes.
    pub dev_generator_fourier: f64,
    /// Relative deviation between the generator and energy routes.
    pub dev_generator_energy: f64,
    /// Relative deviation between the Fourier and energy routes.
    pub dev_fourier_energy: f64,
}

impl From<&EntropyReport> for ConemodEntropy {
    fn from(r: &EntropyReport) -> Self {
        Self {
            s_generator: r.s_generator,
            s_fourier: r.s_fourier,
            s_energy: r.s_energy,
            dev_generator_fourier: r.dev_generator_fourier,
            dev_generator_energy: r.dev_generator_energy,
            dev_fourier_energy: r.dev_fourier_energy,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(error: &Error) -> ConemodStatus {
    match error {
        Error::InvalidGrid(_) | Error::SupportOverflow { .. } => ConemodStatus::InvalidGrid,
        Error::NotNormalized { .. } => ConemodStatus::NotNormalized,
        Error::SupportViolation { .. } => ConemodStatus::SupportViolation,
        Error::Flow(FlowError::SingularPoint { .. }) => ConemodStatus::SingularPoint,
        Error::InvalidInput(_) | Error::Json(_) => ConemodStatus::InvalidInput,
        Error::Io(_) => ConemodStatus::Io,
        _ => ConemodStatus::Numerical,
    }
}

/// Runs `f`, records failures and converts panics.
fn guard<F>(f: F) -> ConemodStatus
where
    F: FnOnce() -> Result<(), (ConemodStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            ConemodStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("panic inside conemod");
            ConemodStatus::Panic
        }
    }
}

fn fail(e: Error) -> (ConemodStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (ConemodStatus, String) {
    (ConemodStatus::NullPointer, format!("{name} is null"))
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, (ConemodStatus, String)> {
    if s.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| (ConemodStatus::InvalidInput, format!("{name}: {e}")))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn conemod_version() -> *const c_char {
    static VERSION: &[u8] = concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes();
    VERSION.as_ptr().cast()
}

/// Message of the last failed call on this thread (empty after a success).
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn conemod_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The conformal factor `τ(λ, x)` for `x = (x0, x1, x2, x3)`.
///
/// # Safety
/// `x` must point to four doubles and `out` to one writable double.
#[no_mangle]
pub unsafe extern "C" fn conemod_tau(lambda: f64, x: *const f64, out: *mut f64) -> ConemodStatus {
    guard(|| {
        if x.is_null() {
            return Err(null("x"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let c = std::slice::from_raw_parts(x, 4);
        *out = tau(lambda, &FourVector::new(c[0], c[1], c[2], c[3]));
        Ok(())
    })
}

/// The image `ν_λ(x)` of `x = (x0, x1, x2, x3)` under the conformal flow.
///
/// # Safety
/// `x` must point to four doubles and `out` to four writable doubles.
#[no_mangle]
pub unsafe extern "C" fn conemod_flow(lambda: f64, x: *const f64, out: *mut f64) -> ConemodStatus {
    guard(|| {
        if x.is_null() {
            return Err(null("x"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let c = std::slice::from_raw_parts(x, 4);
        let y = nu(lambda, &FourVector::new(c[0], c[1], c[2], c[3])).map_err(|e| fail(e.into()))?;
        let o = std::slice::from_raw_parts_mut(out, 4);
        o.copy_from_slice(&[y.x0, y.x[0], y.x[1], y.x[2]]);
        Ok(())
    })
}

/// Creates a grid of `points` nodes per axis on `[−half_width, half_width)³`.
///
/// # Safety
/// `out` must point to a writable handle pointer.
#[no_mangle]
pub unsafe extern "C" fn conemod_grid_new(half_width: f64, points: usize, out: *mut *mut ConemodGrid) -> ConemodStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let grid = GridSpec::new(half_width, points).map_err(fail)?;
        *out = Box::into_raw(Box::new(ConemodGrid(grid)));
        Ok(())
    })
}

/// Releases a grid handle. Null is ignored.
///
/// # Safety
/// `grid` must be null or a handle returned by [`conemod_grid_new`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn conemod_grid_free(grid: *mut ConemodGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Samples a JSON state description on `grid`, embeds it as a Majorana
/// state and rescales it to unit norm.
///
/// # Safety
/// `grid` must be a live grid handle, `json` a NUL-terminated string and
/// `out` a writable handle pointer.
#[no_mangle]
pub unsafe extern "C" fn conemod_state_from_json(
    grid: *const ConemodGrid,
    json: *const c_char,
    out: *mut *mut ConemodState,
) -> ConemodStatus {
    guard(|| {
        if grid.is_null() {
            return Err(null("grid"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let spec = StateSpec::from_json_str(text).map_err(fail)?;
        let field = synthesize_cauchy(&(*grid).0, &spec).map_err(fail)?;
        let (state, factor) = majorana_embed(&field).normalized().map_err(fail)?;
        *out = Box::into_raw(Box::new(ConemodState { state, factor }));
        Ok(())
    })
}

/// The factor applied to reach unit norm, or NaN for a null handle.
///
/// # Safety
/// `state` must be null or a live state handle.
#[no_mangle]
pub unsafe extern "C" fn conemod_state_normalization_factor(state: *const ConemodState) -> f64 {
    if state.is_null() {
        f64::NAN
    } else {
        (*state).factor
    }
}

/// Releases a state handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle returned by [`conemod_state_from_json`]
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn conemod_state_free(state: *mut ConemodState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Evaluates the three entropy routes on a state.
///
/// # Safety
/// `state` must be a live state handle and `out` a writable struct.
#[no_mangle]
pub unsafe extern "C" fn conemod_entropy(state: *const ConemodState, out: *mut ConemodEntropy) -> ConemodStatus {
    guard(|| {
        if state.is_null() {
            return Err(null("state"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = &(*state).state;
        check_admissible(s).map_err(fail)?;
        let report = entropy_report(s).map_err(fail)?;
        *out = ConemodEntropy::from(&report);
        Ok(())
    })
}

/// Runs a verification suite described by a JSON run configuration.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a writable
/// handle pointer.
#[no_mangle]
pub unsafe extern "C" fn conemod_run_suite(config_json: *const c_char, out: *mut *mut ConemodReport) -> ConemodStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(config_json, "config_json")?;
        let config = RunConfig::from_json_str(text).map_err(fail)?;
        let report = run_suite(&config).map_err(fail)?;
        let json = to_json_string(&report).map_err(fail)?;
        let json = CString::new(json).map_err(|e| (ConemodStatus::Numerical, e.to_string()))?;
        *out = Box::into_raw(Box::new(ConemodReport { report, json }));
        Ok(())
    })
}

/// Whether every check of the report passed; false for a null handle.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn conemod_report_pass(report: *const ConemodReport) -> bool {
    !report.is_null() && (*report).report.pass
}

/// The report as JSON, owned by the handle; null for a null handle.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn conemod_report_json(report: *const ConemodReport) -> *const c_char {
    if report.is_null() {
        ptr::null()
    } else {
        (*report).json.as_ptr()
    }
}

/// Releases a report handle. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle returned by [`conemod_run_suite`] that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn conemod_report_free(report: *mut ConemodReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
