//! C ABI over `ckgeom`. Reports and jets cross the boundary as opaque
//! handles; every call returns a [`CkStatus`] and leaves a message retrievable
//! with [`ckgeom_last_error_message`] on failure. Strings returned to the
//! caller are released with [`ckgeom_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ckgeom::constructions::{census, verify, BuildReport, Construction};
use ckgeom::scenario::{run_scenario, Scenario};
use ckgeom::{Error, Jet};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Input could not be parsed or has inconsistent shape.
    Malformed = 3,
    /// Mathematically inadmissible input or unsupported construction.
    Rejected = 4,
    /// The computation completed but its checks did not pass.
    VerifyFailed = 5,
    Panic = 6,
}

/// Opaque build report.
pub struct CkReport(BuildReport);

/// Opaque truncated power series.
pub struct CkJet(Jet);

thread_local! {
    static LAST_ERROR: RefCell<Option<(CString, CString)>> = const { RefCell::new(None) };
}

fn set_error(reason: &str, message: &str) {
    let clean = |s: &str| CString::new(s.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some((clean(reason), clean(message))));
}

fn status_of(e: &Error) -> CkStatus {
    set_error(e.reason(), &e.to_string());
    if e.is_precondition() || matches!(e, Error::Unsupported { .. }) {
        CkStatus::Rejected
    } else {
        CkStatus::Malformed
    }
}

/// Runs `f`, converting panics and null or non-UTF-8 arguments into status codes.
fn guard(f: impl FnOnce() -> Result<(), CkStatus>) -> CkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CkStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic", "internal panic");
            CkStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, CkStatus> {
    if p.is_null() {
        set_error("null-pointer", "string argument is null");
        return Err(CkStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("invalid-utf8", "string argument is not UTF-8");
        CkStatus::InvalidUtf8
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, CkStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null-pointer", "handle is null");
        CkStatus::NullPointer
    })
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), CkStatus> {
    if out.is_null() {
        set_error("null-pointer", "output pointer is null");
        return Err(CkStatus::NullPointer);
    }
    out.write(v);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("JSON has no interior nul")
        .into_raw()
}

fn last_error_part(pick: impl Fn(&(CString, CString)) -> &CString) -> *const c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(pair) => pick(pair).as_ptr(),
        None => ptr::null(),
    })
}

/// Human-readable message of the last failure on this thread, or null.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ckgeom_last_error_message() -> *const c_char {
    last_error_part(|p| &p.1)
}

/// Stable machine-readable reason of the last failure on this thread, or null.
#[no_mangle]
pub extern "C" fn ckgeom_last_error_reason() -> *const c_char {
    last_error_part(|p| &p.0)
}

/// Number of free functions and initial slices of construction `tag` in
/// dimension `n`.
///
/// # Safety
/// `tag` must be a nul-terminated string; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_census_counts(
    tag: *const c_char,
    n: usize,
    free_functions: *mut usize,
    initial_slices: *mut usize,
) -> CkStatus {
    guard(|| {
        let c: Construction = read_str(tag)?.parse().map_err(|e| status_of(&e))?;
        let cen = census(c, n).map_err(|e| status_of(&e))?;
        write_out(free_functions, cen.free_functions.len())?;
        write_out(initial_slices, cen.initial_slices.len())
    })
}

/// Runs a scenario given as JSON. On success `*out` owns a report to be
/// released with [`ckgeom_report_free`]. A report whose checks fail is still
/// returned, with status `VerifyFailed`.
///
/// # Safety
/// `scenario_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_run_scenario(
    scenario_json: *const c_char,
    out: *mut *mut CkReport,
) -> CkStatus {
    let mut failed = false;
    let status = guard(|| {
        let sc = Scenario::from_json(read_str(scenario_json)?).map_err(|e| status_of(&e))?;
        let rep = run_scenario(&sc).map_err(|e| status_of(&e))?;
        failed = !verify(&rep, None);
        write_out(out, Box::into_raw(Box::new(CkReport(rep))))
    });
    if status == CkStatus::Ok && failed {
        set_error("verification-failed", "report checks did not pass");
        return CkStatus::VerifyFailed;
    }
    status
}

/// Parses a report from JSON.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_report_from_json(
    json: *const c_char,
    out: *mut *mut CkReport,
) -> CkStatus {
    guard(|| {
        let rep = BuildReport::from_json(read_str(json)?).map_err(|e| status_of(&e))?;
        write_out(out, Box::into_raw(Box::new(CkReport(rep))))
    })
}

/// Serializes a report; release the string with [`ckgeom_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_report_to_json(
    report: *const CkReport,
    out: *mut *mut c_char,
) -> CkStatus {
    guard(|| {
        let json = deref(report)?.0.to_json().map_err(|e| status_of(&e))?;
        write_out(out, to_c_string(json))
    })
}

/// Recomputes the report's checks, at `order` when it is non-negative and at
/// the advertised orders otherwise.
///
/// # Safety
/// `report` must be a live handle; `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_report_verify(
    report: *const CkReport,
    order: i64,
    passed: *mut bool,
) -> CkStatus {
    guard(|| {
        let rep = &deref(report)?.0;
        let order = usize::try_from(order).ok();
        write_out(passed, verify(rep, order))
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_report_free(report: *mut CkReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Parses a jet from its JSON form.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_jet_from_json(
    json: *const c_char,
    out: *mut *mut CkJet,
) -> CkStatus {
    guard(|| {
        let j: Jet =
            serde_json::from_str(read_str(json)?).map_err(|e| status_of(&Error::from(e)))?;
        write_out(out, Box::into_raw(Box::new(CkJet(j))))
    })
}

/// Serializes a jet; release the string with [`ckgeom_string_free`].
///
/// # Safety
/// `jet` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_jet_to_json(jet: *const CkJet, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        let json = serde_json::to_string(&deref(jet)?.0).map_err(|e| status_of(&Error::from(e)))?;
        write_out(out, to_c_string(json))
    })
}

/// Truncated product of two jets of the same shape.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_jet_mul(
    a: *const CkJet,
    b: *const CkJet,
    out: *mut *mut CkJet,
) -> CkStatus {
    guard(|| {
        let p = deref(a)?
            .0
            .checked_mul(&deref(b)?.0)
            .map_err(|e| status_of(&e))?;
        write_out(out, Box::into_raw(Box::new(CkJet(p))))
    })
}

/// # Safety
/// `jet` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_jet_free(jet: *mut CkJet) {
    if !jet.is_null() {
        drop(Box::from_raw(jet));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ckgeom_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
