//! C interface to the cliffgrav identity suite.
//!
//! A caller builds a [`CgConfig`], runs it with [`cg_run_suite`] to obtain a
//! [`CgReport`], reads counts or a rendered document from the report, and
//! releases every handle and string with the matching `*_free` function.
//! Functions returning [`CgStatus`] store a message retrievable with
//! [`cg_last_error_message`] on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cliffgrav::config::exit_code;
use cliffgrav::field::{FdOrder, Point};
use cliffgrav::report::{self, Format, Report};
use cliffgrav::suite::{self, PointSource, SuiteConfig};
use cliffgrav::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Scenario = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CgFormat {
    Json = 0,
    Csv = 1,
    Text = 2,
}

/// Opaque suite configuration.
pub struct CgConfig {
    inner: SuiteConfig,
}

/// Opaque verification report.
pub struct CgReport {
    inner: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> CgStatus {
    if exit_code(e) == 2 {
        CgStatus::Config
    } else {
        CgStatus::Scenario
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CgStatus, String)>) -> CgStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CgStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (CgStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CgStatus, String)> {
    if p.is_null() {
        return Err((CgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (CgStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn config_mut<'a>(cfg: *mut CgConfig) -> Result<&'a mut CgConfig, (CgStatus, String)> {
    cfg.as_mut().ok_or((CgStatus::NullPointer, "config handle is null".into()))
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Number of identities the suite evaluates.
#[no_mangle]
pub extern "C" fn cg_identity_count() -> usize {
    suite::IDENTITIES.len()
}

/// Creates a default configuration for `scenario`. Returns NULL on error.
///
/// # Safety
/// `scenario` must be NULL or a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cg_config_new(scenario: *const c_char) -> *mut CgConfig {
    let mut out = ptr::null_mut();
    guard(|| {
        let name = read_str(scenario, "scenario")?;
        cliffgrav::scenarios::scenario_info(name).map_err(lib_err)?;
        let inner = SuiteConfig {
            scenario: name.to_string(),
            ..SuiteConfig::default()
        };
        out = Box::into_raw(Box::new(CgConfig { inner }));
        Ok(())
    });
    out
}

/// # Safety
/// `cfg` must be NULL or a handle from [`cg_config_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_config_free(cfg: *mut CgConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must be a live config handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cg_config_set_param(cfg: *mut CgConfig, name: *const c_char, value: f64) -> CgStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        config_mut(cfg)?.inner.params.insert(name.to_string(), value);
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live config handle and `id` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cg_config_set_tolerance(cfg: *mut CgConfig, id: *const c_char, value: f64) -> CgStatus {
    guard(|| {
        let id = read_str(id, "id")?;
        config_mut(cfg)?.inner.tolerances.insert(id.to_string(), value);
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn cg_config_set_n_points(cfg: *mut CgConfig, n: usize) -> CgStatus {
    guard(|| {
        config_mut(cfg)?.inner.points = PointSource::Builtin(n);
        Ok(())
    })
}

/// Replaces the sample set with `n` points read from `coords`, four doubles
/// per point.
///
/// # Safety
/// `cfg` must be a live config handle and `coords` must point to `4 * n`
/// readable doubles.
#[no_mangle]
pub unsafe extern "C" fn cg_config_set_points(cfg: *mut CgConfig, coords: *const f64, n: usize) -> CgStatus {
    guard(|| {
        let cfg = config_mut(cfg)?;
        if coords.is_null() {
            return Err((CgStatus::NullPointer, "coords is null".into()));
        }
        let flat = std::slice::from_raw_parts(coords, 4 * n);
        let pts = flat.chunks_exact(4).map(|c| Point::new(c[0], c[1], c[2], c[3])).collect();
        cfg.inner.points = PointSource::Explicit(pts);
        Ok(())
    })
}

/// Sets the finite-difference step and order (2 or 4).
///
/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn cg_config_set_fd(cfg: *mut CgConfig, step: f64, order: u32) -> CgStatus {
    guard(|| {
        let cfg = config_mut(cfg)?;
        cfg.inner.fd_order = FdOrder::from_int(order).map_err(lib_err)?;
        cfg.inner.fd_step = step;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn cg_config_set_mass(cfg: *mut CgConfig, mass: f64) -> CgStatus {
    guard(|| {
        config_mut(cfg)?.inner.mass = mass;
        Ok(())
    })
}

/// Runs the suite. On success `*out` receives a report handle owned by the
/// caller.
///
/// # Safety
/// `cfg` must be a live config handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_run_suite(cfg: *const CgConfig, out: *mut *mut CgReport) -> CgStatus {
    guard(|| {
        if out.is_null() {
            return Err((CgStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let cfg = cfg.as_ref().ok_or((CgStatus::NullPointer, "config handle is null".into()))?;
        cfg.inner.validate().map_err(lib_err)?;
        let inner = suite::run_suite(&cfg.inner).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CgReport { inner }));
        Ok(())
    })
}

/// # Safety
/// `r` must be NULL or a handle from [`cg_run_suite`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_report_free(r: *mut CgReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cg_report_pass_count(r: *const CgReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.summary.pass_count)
}

/// # Safety
/// `r` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cg_report_fail_count(r: *const CgReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.summary.fail_count)
}

/// # Safety
/// `r` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn cg_report_skip_count(r: *const CgReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.summary.skip_count)
}

/// Looks up one identity row. `*max_residual` is NaN when the identity was
/// skipped. Returns [`CgStatus::Config`] for an unknown id.
///
/// # Safety
/// `r` must be a live report handle, `id` a NUL-terminated string, and
/// `passed` and `max_residual` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn cg_report_identity(
    r: *const CgReport,
    id: *const c_char,
    passed: *mut bool,
    max_residual: *mut f64,
) -> CgStatus {
    guard(|| {
        let r = r.as_ref().ok_or((CgStatus::NullPointer, "report handle is null".into()))?;
        let id = read_str(id, "id")?;
        if passed.is_null() || max_residual.is_null() {
            return Err((CgStatus::NullPointer, "output pointer is null".into()));
        }
        let row = r
            .inner
            .identities
            .iter()
            .find(|x| x.identity_id == id)
            .ok_or((CgStatus::Config, format!("unknown identity `{id}`")))?;
        *passed = row.pass;
        *max_residual = row.max_residual.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Renders the report. On success `*out` receives a string to release with
/// [`cg_string_free`].
///
/// # Safety
/// `r` must be a live report handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_report_render(r: *const CgReport, format: CgFormat, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        if out.is_null() {
            return Err((CgStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let r = r.as_ref().ok_or((CgStatus::NullPointer, "report handle is null".into()))?;
        let f = match format {
            CgFormat::Json => Format::Json,
            CgFormat::Csv => Format::Csv,
            CgFormat::Text => Format::Text,
        };
        let body = report::render(&r.inner, f).map_err(lib_err)?;
        let s = CString::new(body).map_err(|_| (CgStatus::Panic, "report contains NUL".into()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
