//! C ABI over `ghsteiner`.
//!
//! Spaces are opaque handles owned by the caller and released with
//! `ghs_space_free`. Strings returned by the library are released with
//! `ghs_string_free`. Every fallible call returns a [`GhsStatus`]; the
//! message for the last failure on the calling thread is available from
//! `ghs_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ghsteiner::io::{parse_boundary, SolveOutput, SpacesDocument};
use ghsteiner::{gh_distance, solve, DistanceMatrix, Error, FiniteMetricSpace, SolveConfig};

/// Status codes. `INVALID_INPUT` and `COMPUTATION` match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Computation = 3,
    Panic = 4,
}

/// Opaque finite metric space.
pub struct GhsSpace(FiniteMetricSpace);

impl GhsSpace {
    pub fn space(&self) -> &FiniteMetricSpace {
        &self.0
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> GhsStatus {
    let status = if e.is_input_error() {
        GhsStatus::InvalidInput
    } else {
        GhsStatus::Computation
    };
    set_last_error(format!("{}: {e}", e.kind()));
    status
}

fn guard(f: impl FnOnce() -> GhsStatus) -> GhsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_last_error("panic inside ghsteiner".into());
            GhsStatus::Panic
        }
    }
}

fn null() -> GhsStatus {
    set_last_error("null pointer argument".into());
    GhsStatus::NullPointer
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, GhsStatus> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(Error::Input("string is not valid UTF-8".into())))
}

/// Message for the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ghs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ghs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a space from a row-major `n * n` matrix. `name` may be NULL.
///
/// # Safety
/// `matrix` must point to `n * n` doubles, `name` must be NULL or a
/// NUL-terminated string, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ghs_space_new(
    name: *const c_char,
    matrix: *const f64,
    n: usize,
    out: *mut *mut GhsSpace,
) -> GhsStatus {
    guard(|| {
        if matrix.is_null() || out.is_null() {
            return null();
        }
        let name = if name.is_null() {
            "space".to_owned()
        } else {
            match str_arg(name) {
                Ok(s) => s.to_owned(),
                Err(s) => return s,
            }
        };
        let Some(len) = n.checked_mul(n) else {
            return fail(Error::Input("matrix size overflows".into()));
        };
        let data = std::slice::from_raw_parts(matrix, len).to_vec();
        match ghsteiner::validate(name, DistanceMatrix::from_flat(n, data), None) {
            Ok(space) => {
                *out = Box::into_raw(Box::new(GhsSpace(space)));
                GhsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `space` must be NULL or a handle from `ghs_space_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ghs_space_free(space: *mut GhsSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of points, or 0 for NULL.
///
/// # Safety
/// `space` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ghs_space_len(space: *const GhsSpace) -> usize {
    space.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `space` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ghs_space_diameter(space: *const GhsSpace, out: *mut f64) -> GhsStatus {
    guard(|| match (space.as_ref(), out.is_null()) {
        (Some(s), false) => {
            *out = s.0.diameter();
            GhsStatus::Ok
        }
        _ => null(),
    })
}

/// Exact Gromov-Hausdorff distance between two spaces.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ghs_gh_distance(a: *const GhsSpace, b: *const GhsSpace, out: *mut f64) -> GhsStatus {
    guard(|| {
        let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else {
            return null();
        };
        if out.is_null() {
            return null();
        }
        match gh_distance(&a.0, &b.0) {
            Ok(r) => {
                *out = r.distance;
                GhsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Solves a boundary set given as JSON (`{"spaces": [...]}`). `config_json`
/// may be NULL for defaults, or a JSON object with any of `restarts`,
/// `seed`, `tol`, `max_iters`, `max_steiner_size`, `topology_mode`.
/// On success `*out_json` receives the solution document, to be released
/// with `ghs_string_free`.
///
/// # Safety
/// String arguments must be NULL-terminated (or NULL where allowed) and
/// `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn ghs_solve_json(
    input_json: *const c_char,
    config_json: *const c_char,
    out_json: *mut *mut c_char,
) -> GhsStatus {
    guard(|| {
        if out_json.is_null() {
            return null();
        }
        let input = match str_arg(input_json) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let config = if config_json.is_null() {
            SolveConfig::default()
        } else {
            let text = match str_arg(config_json) {
                Ok(s) => s,
                Err(s) => return s,
            };
            match serde_json::from_str(text) {
                Ok(c) => c,
                Err(e) => return fail(e.into()),
            }
        };
        let run = || -> ghsteiner::Result<String> {
            let doc: SpacesDocument = serde_json::from_str(input)?;
            let boundary = parse_boundary(&doc.into_spaces())?;
            let report = solve(&boundary, &config)?;
            Ok(serde_json::to_string(&SolveOutput::from(&report))?)
        };
        match run() {
            Ok(json) => {
                *out_json = CString::new(json).unwrap_or_default().into_raw();
                GhsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ghs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
