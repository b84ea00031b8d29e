//! C ABI over `affine_hecke`.
//!
//! Handles are opaque pointers created by `ah_*_new`/`ah_verify` and released
//! with the matching `ah_*_free`. Every fallible call returns an [`AhStatus`];
//! on failure `ah_last_error` holds a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use affine_hecke::expr::parse_element;
use affine_hecke::plancherel::{verify, Plancherel, VerifyReport};
use affine_hecke::{Config, Error, HeckeAlgebra};
use num_complex::Complex64;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownType = 3,
    InvalidParameters = 4,
    ParseError = 5,
    BoundaryParameters = 6,
    OutOfRange = 7,
    Runtime = 8,
    Panic = 9,
}

/// An algebra with fixed configuration and parameters.
pub struct AhAlgebra {
    inner: HeckeAlgebra,
}

/// The outcome of one Plancherel check.
pub struct AhReport {
    inner: VerifyReport,
    labels: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).expect("nul bytes removed"));
}

fn status_of(e: &Error) -> AhStatus {
    match e {
        Error::UnsupportedConfiguration(_) => AhStatus::UnknownType,
        Error::InvalidParameters(_) => AhStatus::InvalidParameters,
        Error::Syntax { .. } | Error::UnknownGenerator { .. } | Error::BadExponentVector { .. } => AhStatus::ParseError,
        Error::BoundaryParameters(_) => AhStatus::BoundaryParameters,
        _ => AhStatus::Runtime,
    }
}

type FfiResult<T> = Result<T, AhStatus>;

fn fail<T>(status: AhStatus, msg: impl Into<String>) -> FfiResult<T> {
    set_error(msg);
    Err(status)
}

fn lib<T>(r: affine_hecke::Result<T>) -> FfiResult<T> {
    r.or_else(|e| fail(status_of(&e), e.to_string()))
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> AhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AhStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside affine_hecke");
            AhStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return fail(AhStatus::NullPointer, format!("{what} is null"));
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(s),
        Err(_) => fail(AhStatus::InvalidUtf8, format!("{what} is not UTF-8")),
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    match p.as_ref() {
        Some(r) => Ok(r),
        None => fail(AhStatus::NullPointer, format!("{what} is null")),
    }
}

unsafe fn write_complex(z: Complex64, re: *mut f64, im: *mut f64) -> FfiResult<()> {
    if re.is_null() || im.is_null() {
        return fail(AhStatus::NullPointer, "output pointer is null");
    }
    *re = z.re;
    *im = z.im;
    Ok(())
}

/// Message for the most recent failure on this thread; empty if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ah_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds an algebra from a configuration tag (`"A1Q"`, ..., `"BC2Q"`) and
/// its parameters.
///
/// # Safety
/// `type_tag` must be a nul-terminated string, `params` must point to
/// `n_params` doubles, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ah_algebra_new(
    type_tag: *const c_char,
    params: *const f64,
    n_params: usize,
    out: *mut *mut AhAlgebra,
) -> AhStatus {
    guard(|| {
        if out.is_null() {
            return fail(AhStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let tag = str_arg(type_tag, "type_tag")?;
        let config = lib(Config::from_str(tag))?;
        if params.is_null() && n_params > 0 {
            return fail(AhStatus::NullPointer, "params is null");
        }
        let q = if n_params == 0 { &[][..] } else { std::slice::from_raw_parts(params, n_params) };
        let inner = lib(HeckeAlgebra::new(config, q))?;
        *out = Box::into_raw(Box::new(AhAlgebra { inner }));
        Ok(())
    })
}

/// Releases an algebra. Null is ignored.
///
/// # Safety
/// `alg` must come from `ah_algebra_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ah_algebra_free(alg: *mut AhAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Rank of the algebra, or 0 for a null handle.
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ah_algebra_rank(alg: *const AhAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.inner.rank())
}

/// Canonical trace of a parsed element.
///
/// # Safety
/// `alg` must be a live handle, `element` a nul-terminated string, and
/// `re`/`im` writable.
#[no_mangle]
pub unsafe extern "C" fn ah_trace(alg: *const AhAlgebra, element: *const c_char, re: *mut f64, im: *mut f64) -> AhStatus {
    guard(|| {
        let a = &deref(alg, "alg")?.inner;
        let src = str_arg(element, "element")?;
        let h = lib(parse_element(src, a.rank()))?.eval(a);
        write_complex(a.trace_bernstein(&h), re, im)
    })
}

/// Evaluates both sides of the Plancherel formula for one element on an
/// `resolution`-point grid per torus direction.
///
/// # Safety
/// `alg` must be a live handle, `element` a nul-terminated string, and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ah_verify(
    alg: *const AhAlgebra,
    element: *const c_char,
    resolution: usize,
    out: *mut *mut AhReport,
) -> AhStatus {
    guard(|| {
        if out.is_null() {
            return fail(AhStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let a = &deref(alg, "alg")?.inner;
        let src = str_arg(element, "element")?;
        let h = lib(parse_element(src, a.rank()))?.eval(a);
        let mut pl = lib(Plancherel::new(a, resolution))?;
        let inner = lib(verify(&mut pl, &h, src))?;
        let labels = inner.breakdown.iter().map(|t| CString::new(t.label.clone()).unwrap_or_default()).collect();
        *out = Box::into_raw(Box::new(AhReport { inner, labels }));
        Ok(())
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must come from `ah_verify` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ah_report_free(report: *mut AhReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// `Tr(h)`.
///
/// # Safety
/// `report` must be a live handle and `re`/`im` writable.
#[no_mangle]
pub unsafe extern "C" fn ah_report_lhs(report: *const AhReport, re: *mut f64, im: *mut f64) -> AhStatus {
    guard(|| write_complex(deref(report, "report")?.inner.lhs, re, im))
}

/// Sum of the spectral terms.
///
/// # Safety
/// `report` must be a live handle and `re`/`im` writable.
#[no_mangle]
pub unsafe extern "C" fn ah_report_rhs(report: *const AhReport, re: *mut f64, im: *mut f64) -> AhStatus {
    guard(|| write_complex(deref(report, "report")?.inner.rhs, re, im))
}

/// `|lhs − rhs| / max(|lhs|, 1)`, or NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ah_report_rel_err(report: *const AhReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.inner.rel_err)
}

/// Number of spectral terms, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ah_report_term_count(report: *const AhReport) -> usize {
    report.as_ref().map_or(0, |r| r.labels.len())
}

/// Label and value of term `index`. The label is owned by the report.
///
/// # Safety
/// `report` must be a live handle; `label`, `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ah_report_term(
    report: *const AhReport,
    index: usize,
    label: *mut *const c_char,
    re: *mut f64,
    im: *mut f64,
) -> AhStatus {
    guard(|| {
        let r = deref(report, "report")?;
        let Some(t) = r.inner.breakdown.get(index) else {
            return fail(AhStatus::OutOfRange, format!("term {index} of {}", r.labels.len()));
        };
        if label.is_null() {
            return fail(AhStatus::NullPointer, "label is null");
        }
        *label = r.labels[index].as_ptr();
        write_complex(t.value, re, im)
    })
}

/// The report as JSON; release with `ah_string_free`. Null on failure.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ah_report_to_json(report: *const AhReport) -> *mut c_char {
    let Some(r) = report.as_ref() else {
        set_error("report is null");
        return ptr::null_mut();
    };
    match serde_json::to_string(&r.inner) {
        Ok(s) => CString::new(s).map_or(ptr::null_mut(), CString::into_raw),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from `ah_report_to_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ah_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
