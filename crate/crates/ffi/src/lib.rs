//! C ABI for admlab.
//!
//! Every function returns an [`AdmStatus`]; results go through out-pointers.
//! On failure, [`adm_last_error`] describes the most recent error on the calling thread.
//! Manifolds are opaque [`AdmManifold`] handles released with [`adm_manifold_free`];
//! strings returned by the library are released with [`adm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use admlab::experiments::{run_scenario, ExperimentError, RunOptions, Scenario};
use admlab::families::{FamilySpec, GeneratedManifold};
use admlab::geometry::{
    adm_mass_limit, hawking_mass_profile, minimal_sphere_scan, scalar_curvature, validate_rotsym,
};
use admlab::numerics::LimitValue;

/// Result codes of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidSpec = 4,
    ComputationFailed = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// A generated manifold with its metadata.
pub struct AdmManifold {
    inner: GeneratedManifold,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(status: AdmStatus, msg: impl Into<String>) -> AdmStatus {
    set_error(msg);
    status
}

fn guard<F: FnOnce() -> AdmStatus>(f: F) -> AdmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(AdmStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, AdmStatus> {
    if s.is_null() {
        return Err(fail(AdmStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(AdmStatus::InvalidUtf8, e.to_string()))
}

unsafe fn manifold<'a>(h: *const AdmManifold) -> Result<&'a GeneratedManifold, AdmStatus> {
    h.as_ref().map(|m| &m.inner).ok_or_else(|| fail(AdmStatus::NullPointer, "null manifold handle"))
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! out {
    ($p:expr) => {
        match $p.as_mut() {
            Some(p) => p,
            None => return fail(AdmStatus::NullPointer, "null output pointer"),
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn adm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf`, NUL-terminated.
///
/// `*needed` receives the buffer size required, including the terminator.
///
/// # Safety
/// `buf` must point to `len` writable bytes or be null with `len == 0`; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn adm_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> AdmStatus {
    LAST_ERROR.with(|e| {
        let bytes = e.borrow();
        let bytes = bytes.as_bytes_with_nul();
        if let Some(n) = needed.as_mut() {
            *n = bytes.len();
        }
        if buf.is_null() || len < bytes.len() {
            return AdmStatus::BufferTooSmall;
        }
        ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, bytes.len());
        AdmStatus::Ok
    })
}

/// Builds a manifold from a family spec in JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adm_manifold_from_json(json: *const c_char, out: *mut *mut AdmManifold) -> AdmStatus {
    guard(|| {
        let out = out!(out);
        *out = ptr::null_mut();
        let text = try_status!(read_str(json));
        let spec: FamilySpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => return fail(AdmStatus::ParseError, format!("{}:{}: {e}", e.line(), e.column())),
        };
        match spec.build() {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(AdmManifold { inner }));
                AdmStatus::Ok
            }
            Err(e) => fail(AdmStatus::InvalidSpec, e.to_string()),
        }
    })
}

/// Releases a manifold; null is ignored.
///
/// # Safety
/// `h` must come from [`adm_manifold_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn adm_manifold_free(h: *mut AdmManifold) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adm_manifold_dimension(h: *const AdmManifold, out: *mut usize) -> AdmStatus {
    guard(|| {
        let out = out!(out);
        *out = try_status!(manifold(h)).geometry.n();
        AdmStatus::Ok
    })
}

/// ADM mass as the limit of Hawking masses; `+∞` is reported as `INFINITY`.
///
/// # Safety
/// `h` must be a live handle; `value` must be valid; `error` may be null.
#[no_mangle]
pub unsafe extern "C" fn adm_mass(h: *const AdmManifold, value: *mut f64, error: *mut f64) -> AdmStatus {
    guard(|| {
        let value = out!(value);
        let gm = try_status!(manifold(h));
        match adm_mass_limit(&gm.geometry) {
            Ok(e) => {
                *value = e.value.as_f64();
                if let Some(err) = error.as_mut() {
                    *err = e.error;
                }
                AdmStatus::Ok
            }
            Err(e) => fail(AdmStatus::ComputationFailed, e.to_string()),
        }
    })
}

/// Expected ADM mass from the family metadata; `NAN` when undefined.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adm_expected_mass(h: *const AdmManifold, out: *mut f64) -> AdmStatus {
    guard(|| {
        let out = out!(out);
        *out = match try_status!(manifold(h)).expected_adm {
            Some(LimitValue::Finite(v)) => v,
            Some(LimitValue::Infinite) => f64::INFINITY,
            None => f64::NAN,
        };
        AdmStatus::Ok
    })
}

/// Hawking mass of the symmetric sphere at arclength `s`.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adm_hawking_mass(h: *const AdmManifold, s: f64, out: *mut f64) -> AdmStatus {
    guard(|| {
        let out = out!(out);
        let gm = try_status!(manifold(h));
        match gm.profile().map_err(|e| e.to_string()).and_then(|p| hawking_mass_profile(&p, s).map_err(|e| e.to_string())) {
            Ok(v) => {
                *out = v;
                AdmStatus::Ok
            }
            Err(e) => fail(AdmStatus::ComputationFailed, e),
        }
    })
}

/// Scalar curvature at arclength `s`.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adm_scalar_curvature(h: *const AdmManifold, s: f64, out: *mut f64) -> AdmStatus {
    guard(|| {
        let out = out!(out);
        let gm = try_status!(manifold(h));
        match gm.profile().map_err(|e| e.to_string()).and_then(|p| scalar_curvature(&p, s).map_err(|e| e.to_string())) {
            Ok(v) => {
                *out = v;
                AdmStatus::Ok
            }
            Err(e) => fail(AdmStatus::ComputationFailed, e),
        }
    })
}

/// Membership in the rotationally symmetric class and the minimum scalar curvature.
///
/// # Safety
/// `h` must be a live handle; `in_class` and `min_curvature` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adm_validate(h: *const AdmManifold, in_class: *mut bool, min_curvature: *mut f64) -> AdmStatus {
    guard(|| {
        let in_class = out!(in_class);
        let min_curvature = out!(min_curvature);
        let gm = try_status!(manifold(h));
        match gm.profile() {
            Ok(p) => {
                let rep = validate_rotsym(&p);
                *in_class = rep.in_rotsym;
                *min_curvature = rep.min_scalar_curvature;
                AdmStatus::Ok
            }
            Err(e) => fail(AdmStatus::ComputationFailed, e.to_string()),
        }
    })
}

/// Number of interior minimal spheres.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adm_minimal_sphere_count(h: *const AdmManifold, out: *mut usize) -> AdmStatus {
    guard(|| {
        let out = out!(out);
        let gm = try_status!(manifold(h));
        match gm.profile().map_err(|e| e.to_string()).and_then(|p| minimal_sphere_scan(&p).map_err(|e| e.to_string())) {
            Ok(v) => {
                *out = v.len();
                AdmStatus::Ok
            }
            Err(e) => fail(AdmStatus::ComputationFailed, e),
        }
    })
}

/// Runs a scenario given as JSON and returns the run result as JSON.
///
/// `*passed` reports whether every probe met its expectations.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_json` and `passed` must be valid.
/// The returned string must be released with [`adm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn adm_run_scenario(json: *const c_char, out_json: *mut *mut c_char, passed: *mut bool) -> AdmStatus {
    guard(|| {
        let out_json = out!(out_json);
        let passed = out!(passed);
        *out_json = ptr::null_mut();
        let text = try_status!(read_str(json));
        let scenario = match Scenario::parse(text, "scenario") {
            Ok(s) => s,
            Err(e @ ExperimentError::Parse { .. }) => return fail(AdmStatus::ParseError, e.to_string()),
            Err(e) => return fail(AdmStatus::InvalidSpec, e.to_string()),
        };
        let options = match RunOptions::from_env() {
            Ok(o) => o,
            Err(e) => return fail(AdmStatus::ParseError, e.to_string()),
        };
        match run_scenario(&scenario, options) {
            Ok(result) => {
                *passed = result.passed;
                let text = serde_json::to_string(&result).unwrap_or_default();
                *out_json = CString::new(text).unwrap_or_default().into_raw();
                AdmStatus::Ok
            }
            Err(e) => fail(AdmStatus::ComputationFailed, e.to_string()),
        }
    })
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn adm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
