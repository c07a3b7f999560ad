use std::ffi::{CStr, CString};
use std::ptr;

use ghsteiner_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ghs_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn two_point(d: f64) -> *mut GhsSpace {
    let m = [0.0, d, d, 0.0];
    let mut out = ptr::null_mut();
    let status = unsafe { ghs_space_new(ptr::null(), m.as_ptr(), 2, &mut out) };
    assert_eq!(status, GhsStatus::Ok);
    out
}

#[test]
fn space_handle_lifecycle() {
    let name = CString::new("tri").unwrap();
    let m = [0.0, 1.0, 2.0, 1.0, 0.0, 1.5, 2.0, 1.5, 0.0];
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { ghs_space_new(name.as_ptr(), m.as_ptr(), 3, &mut s) },
        GhsStatus::Ok
    );
    assert_eq!(unsafe { ghs_space_len(s) }, 3);
    let mut diam = 0.0;
    assert_eq!(unsafe { ghs_space_diameter(s, &mut diam) }, GhsStatus::Ok);
    assert_eq!(diam, 2.0);
    unsafe { ghs_space_free(s) };
    unsafe { ghs_space_free(ptr::null_mut()) };
}

#[test]
fn gh_distance_between_handles() {
    let (a, b) = (two_point(1.0), two_point(3.0));
    let mut d = -1.0;
    assert_eq!(unsafe { ghs_gh_distance(a, b, &mut d) }, GhsStatus::Ok);
    assert_eq!(d, 1.0);
    unsafe {
        ghs_space_free(a);
        ghs_space_free(b);
    }
}

#[test]
fn invalid_matrix_sets_the_error_message() {
    let m = [0.0, 1.0, 2.0, 0.0];
    let mut s = ptr::null_mut();
    let status = unsafe { ghs_space_new(ptr::null(), m.as_ptr(), 2, &mut s) };
    assert_eq!(status, GhsStatus::InvalidInput);
    assert!(s.is_null());
    assert!(last_error().contains("Asymmetric(0,1)"), "{}", last_error());
}

#[test]
fn null_arguments_are_rejected() {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { ghs_space_new(ptr::null(), ptr::null(), 2, &mut s) },
        GhsStatus::NullPointer
    );
    let mut d = 0.0;
    assert_eq!(
        unsafe { ghs_space_diameter(ptr::null(), &mut d) },
        GhsStatus::NullPointer
    );
    assert_eq!(
        unsafe { ghs_gh_distance(ptr::null(), ptr::null(), &mut d) },
        GhsStatus::NullPointer
    );
    assert_eq!(unsafe { ghs_space_len(ptr::null()) }, 0);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ghs_solve_json(ptr::null(), ptr::null(), &mut out) },
        GhsStatus::NullPointer
    );
    assert!(!last_error().is_empty());
}

#[test]
fn solve_json_round_trip() {
    let input = CString::new(
        r#"{"spaces":[
          {"name":"a","points":["p","q"],"matrix":[[0,1],[1,0]]},
          {"name":"b","points":["p","q"],"matrix":[[0,2],[2,0]]},
          {"name":"c","points":["p","q"],"matrix":[[0,3],[3,0]]}
        ]}"#,
    )
    .unwrap();
    let config = CString::new(r#"{"restarts":2,"seed":5}"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ghs_solve_json(input.as_ptr(), config.as_ptr(), &mut out) },
        GhsStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { ghs_string_free(out) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["total_length"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn solve_json_reports_bad_input() {
    let input = CString::new("{").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ghs_solve_json(input.as_ptr(), ptr::null(), &mut out) },
        GhsStatus::InvalidInput
    );
    assert!(out.is_null());
    let bad_config = CString::new(r#"{"restarts":"many"}"#).unwrap();
    let good = CString::new(r#"{"name":"x","points":["p"],"matrix":[[0]]}"#).unwrap();
    assert_eq!(
        unsafe { ghs_solve_json(good.as_ptr(), bad_config.as_ptr(), &mut out) },
        GhsStatus::InvalidInput
    );
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(ghs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ghsteiner.h")).unwrap();
    for f in [
        "ghs_last_error_message",
        "ghs_version",
        "ghs_space_new",
        "ghs_space_free",
        "ghs_space_len",
        "ghs_space_diameter",
        "ghs_gh_distance",
        "ghs_solve_json",
        "ghs_string_free",
        "GHS_STATUS_INVALID_INPUT",
        "typedef struct GhsSpace GhsSpace",
    ] {
        assert!(header.contains(f), "missing {f}");
    }
}
