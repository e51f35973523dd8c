use std::ffi::{c_char, CStr, CString};
use std::ptr;

use admlab_ffi::*;

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe { adm_last_error(ptr::null_mut(), 0, &mut needed) };
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(unsafe { adm_last_error(buf.as_mut_ptr(), buf.len(), &mut needed) }, AdmStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn build(json: &str) -> Result<*mut AdmManifold, AdmStatus> {
    let text = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    match unsafe { adm_manifold_from_json(text.as_ptr(), &mut h) } {
        AdmStatus::Ok => Ok(h),
        s => Err(s),
    }
}

#[test]
fn schwarzschild_through_the_abi() {
    let h = build(r#"{"family": "schwarzschild", "params": {"m": 1}}"#).unwrap();
    let (mut n, mut mass, mut err, mut expected) = (0usize, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(adm_manifold_dimension(h, &mut n), AdmStatus::Ok);
        assert_eq!(adm_mass(h, &mut mass, &mut err), AdmStatus::Ok);
        assert_eq!(adm_expected_mass(h, &mut expected), AdmStatus::Ok);
    }
    assert_eq!(n, 3);
    assert!((mass - 1.0).abs() < 1e-6 && err >= 0.0);
    assert_eq!(expected, 1.0);

    let (mut hawking, mut r) = (0.0, 1.0);
    unsafe {
        assert_eq!(adm_hawking_mass(h, 5.0, &mut hawking), AdmStatus::Ok);
        assert_eq!(adm_scalar_curvature(h, 5.0, &mut r), AdmStatus::Ok);
    }
    assert!((hawking - 1.0).abs() < 1e-9);
    assert!(r.abs() < 1e-9);

    let (mut in_class, mut min_r, mut spheres) = (false, 0.0, 7usize);
    unsafe {
        assert_eq!(adm_validate(h, &mut in_class, &mut min_r), AdmStatus::Ok);
        assert_eq!(adm_minimal_sphere_count(h, &mut spheres), AdmStatus::Ok);
        adm_manifold_free(h);
    }
    assert!(in_class);
    assert_eq!(spheres, 0);
}

#[test]
fn doubled_schwarzschild_has_a_neck() {
    let h = build(r#"{"family": "doubled_schwarzschild", "params": {"epsilon": 0.5}}"#).unwrap();
    let mut spheres = 0usize;
    unsafe {
        assert_eq!(adm_minimal_sphere_count(h, &mut spheres), AdmStatus::Ok);
        adm_manifold_free(h);
    }
    assert_eq!(spheres, 1);
}

#[test]
fn errors_are_reported() {
    assert_eq!(build("{not json").unwrap_err(), AdmStatus::ParseError);
    assert!(last_error().contains("1:"));
    assert_eq!(build(r#"{"family": "schwarzschild", "params": {"mass": 1}}"#).unwrap_err(), AdmStatus::InvalidSpec);
    assert!(last_error().contains("mass"));
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { adm_manifold_from_json(ptr::null(), &mut h) }, AdmStatus::NullPointer);
    let mut n = 0usize;
    assert_eq!(unsafe { adm_manifold_dimension(ptr::null(), &mut n) }, AdmStatus::NullPointer);
    let h = build(r#"{"family": "flat"}"#).unwrap();
    assert_eq!(unsafe { adm_manifold_dimension(h, ptr::null_mut()) }, AdmStatus::NullPointer);
    let mut small = [0 as c_char; 2];
    assert_eq!(unsafe { adm_last_error(small.as_mut_ptr(), 2, ptr::null_mut()) }, AdmStatus::BufferTooSmall);
    let mut v = 0.0;
    assert_eq!(unsafe { adm_hawking_mass(h, -1.0, &mut v) }, AdmStatus::ComputationFailed);
    unsafe {
        adm_manifold_free(h);
        adm_manifold_free(ptr::null_mut());
        adm_string_free(ptr::null_mut());
    }
}

#[test]
fn scenario_round_trip() {
    let json = CString::new(
        r#"{"schema": 1, "name": "abi", "manifold": {"family": "schwarzschild", "params": {"m": 2}},
            "probes": [{"op": "mass"}, {"op": "consistency"}]}"#,
    )
    .unwrap();
    let (mut out, mut passed) = (ptr::null_mut(), false);
    assert_eq!(unsafe { adm_run_scenario(json.as_ptr(), &mut out, &mut passed) }, AdmStatus::Ok);
    assert!(passed);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { adm_string_free(out) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["scenario"], "abi");
    assert_eq!(v["probes"].as_array().unwrap().len(), 2);
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(adm_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
