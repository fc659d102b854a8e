//! C interface to the pstddm experiment drivers.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Every fallible call returns a [`PstddmStatus`];
//! on failure the message is available from [`pstddm_last_error`] on the
//! same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use num_complex::Complex64;
use pstddm::harness::{report::write_outputs, run, ExperimentConfig, ExperimentReport, Mode};
use pstddm::specfun::hankel0_first;
use pstddm::Error;

/// Status codes; 2 and 3 match the exit codes of the `pstddm` CLI.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PstddmStatus {
    Ok = 0,
    NullArgument = 1,
    ConfigError = 2,
    SolverError = 3,
    Panic = 4,
}

/// Experiment configuration.
pub struct PstddmConfig {
    inner: ExperimentConfig,
}

/// Outcome of a run.
pub struct PstddmResult {
    report: ExperimentReport,
    config: ExperimentConfig,
}

/// Numbers reported by a run. Errors a mode does not compute are NaN and
/// iteration counts it does not compute are -1.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PstddmSummary {
    pub k: f64,
    pub q: f64,
    pub layers: u32,
    /// 0 when unset.
    pub blocks: u32,
    pub gamma0: f64,
    pub e_i: f64,
    pub e_f: f64,
    pub e_s: f64,
    pub iters_plain: i64,
    pub iters_precond: i64,
    pub wall_ms: f64,
    pub nx: usize,
    pub ny: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PstddmStatus {
    set_error(&e.to_string());
    if e.is_configuration() {
        PstddmStatus::ConfigError
    } else {
        PstddmStatus::SolverError
    }
}

/// Runs `f`, turning panics into [`PstddmStatus::Panic`].
fn guard(f: impl FnOnce() -> PstddmStatus) -> PstddmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            PstddmStatus::Panic
        }
    }
}

fn null_arg(name: &str) -> PstddmStatus {
    set_error(&format!("{name} is null"));
    PstddmStatus::NullArgument
}

/// # Safety
/// `s` must be null or a valid nul-terminated string.
unsafe fn utf8<'a>(s: *const c_char, name: &str) -> Result<&'a str, PstddmStatus> {
    if s.is_null() {
        return Err(null_arg(name));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(&format!("{name} is not valid UTF-8"));
        PstddmStatus::ConfigError
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pstddm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// New configuration with the desk-scale defaults.
#[no_mangle]
pub extern "C" fn pstddm_config_new() -> *mut PstddmConfig {
    Box::into_raw(Box::new(PstddmConfig {
        inner: ExperimentConfig::default(),
    }))
}

/// Parses a JSON configuration; `*out` receives a new handle on success.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pstddm_config_from_json(json: *const c_char, out: *mut *mut PstddmConfig) -> PstddmStatus {
    guard(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let text = match utf8(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match ExperimentConfig::from_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PstddmConfig { inner }));
                PstddmStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `config` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pstddm_config_free(config: *mut PstddmConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `config` must be a live handle and `mode` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pstddm_config_set_mode(config: *mut PstddmConfig, mode: *const c_char) -> PstddmStatus {
    guard(|| {
        let Some(c) = config.as_mut() else {
            return null_arg("config");
        };
        let text = match utf8(mode, "mode") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match text.parse::<Mode>() {
            Ok(m) => {
                c.inner.mode = m;
                PstddmStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Sets the numeric parameters; `blocks = 0` clears the block count.
/// Values are checked when the configuration is run.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pstddm_config_set_parameters(
    config: *mut PstddmConfig,
    k_over_2pi: f64,
    q: f64,
    layers: u32,
    blocks: u32,
    gamma0: f64,
) -> PstddmStatus {
    let Some(c) = config.as_mut() else {
        return null_arg("config");
    };
    c.inner.k_over_2pi = k_over_2pi;
    c.inner.q = q;
    c.inner.layers = layers as usize;
    c.inner.blocks = (blocks > 0).then_some(blocks as usize);
    c.inner.gamma0 = gamma0;
    PstddmStatus::Ok
}

/// Validates and runs the configured experiment.
///
/// # Safety
/// `config` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pstddm_run(config: *const PstddmConfig, out: *mut *mut PstddmResult) -> PstddmStatus {
    guard(|| {
        let Some(c) = config.as_ref() else {
            return null_arg("config");
        };
        if out.is_null() {
            return null_arg("out");
        }
        match run(&c.inner) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(PstddmResult {
                    report,
                    config: c.inner.clone(),
                }));
                PstddmStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `result` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pstddm_result_free(result: *mut PstddmResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pstddm_result_summary(result: *const PstddmResult, out: *mut PstddmSummary) -> PstddmStatus {
    let Some(r) = result.as_ref() else {
        return null_arg("result");
    };
    let Some(out) = out.as_mut() else {
        return null_arg("out");
    };
    let rec = &r.report.record;
    let iters = |v: Option<usize>| v.map_or(-1, |n| n as i64);
    *out = PstddmSummary {
        k: rec.k,
        q: rec.q,
        layers: rec.layers as u32,
        blocks: rec.blocks.unwrap_or(0) as u32,
        gamma0: rec.gamma0,
        e_i: rec.e_i.unwrap_or(f64::NAN),
        e_f: rec.e_f.unwrap_or(f64::NAN),
        e_s: rec.e_s.unwrap_or(f64::NAN),
        iters_plain: iters(rec.iters_plain),
        iters_precond: iters(rec.iters_precond),
        wall_ms: rec.wall_ms,
        nx: r.report.grid_size[0],
        ny: r.report.grid_size[1],
    };
    PstddmStatus::Ok
}

/// Writes the CSV record, the config echo and (for GMRES studies) the
/// residual histories next to `path`.
///
/// # Safety
/// `result` must be a live handle and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pstddm_result_write_csv(result: *const PstddmResult, path: *const c_char) -> PstddmStatus {
    guard(|| {
        let Some(r) = result.as_ref() else {
            return null_arg("result");
        };
        let path = match utf8(path, "path") {
            Ok(p) => p,
            Err(s) => return s,
        };
        let histories = match (&r.report.plain, &r.report.preconditioned) {
            (Some(p), Some(q)) => Some((p.residuals.as_slice(), q.residuals.as_slice())),
            _ => None,
        };
        match write_outputs(Path::new(path), &r.report.record, &r.config, histories) {
            Ok(_) => PstddmStatus::Ok,
            Err(e) => status_of(&e),
        }
    })
}

/// `H_0^(1)(re + i im)`, with the branch cut on the negative real axis.
///
/// # Safety
/// `out_re` and `out_im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pstddm_hankel0(re: f64, im: f64, out_re: *mut f64, out_im: *mut f64) -> PstddmStatus {
    if out_re.is_null() || out_im.is_null() {
        return null_arg("output");
    }
    match hankel0_first(Complex64::new(re, im)) {
        Ok(h) => {
            *out_re = h.re;
            *out_im = h.im;
            PstddmStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
