//! C ABI over the `fetcam` simulator.
//!
//! Handles are opaque and owned by the caller between `fetcam_array_new` and
//! `fetcam_array_free`. Every fallible call returns a [`FetcamStatus`]; the
//! message of the most recent failure on the calling thread is available from
//! `fetcam_last_error`. Strings returned by the library must be released with
//! `fetcam_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fetcam::array::{self, ArrayConfig, ArrayState};
use fetcam::config::RunConfig;
use fetcam::grid;
use fetcam::report;
use fetcam::{CellDesign, TcamError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FetcamStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Config = 3,
    Dimension = 4,
    Format = 5,
    ResistanceOrder = 6,
    Io = 7,
    NotProgrammed = 8,
    Panic = 9,
}

/// Summary of one search.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FetcamSearchStats {
    pub matched_rows: usize,
    /// Rows that stopped after the first search step.
    pub step1_terminated_rows: usize,
    /// Nonzero when the second select line never rose.
    pub sel_b_suppressed: u8,
    pub latency_s: f64,
    pub energy_j: f64,
    pub precharge_j: f64,
    pub sense_amp_j: f64,
    pub divider_static_j: f64,
    pub signal_switching_j: f64,
}

/// Opaque array handle.
pub struct FetcamArray {
    config: ArrayConfig,
    state: Option<ArrayState>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &TcamError) -> FetcamStatus {
    match err {
        TcamError::InvalidInput(_) => FetcamStatus::InvalidInput,
        TcamError::Config(_) => FetcamStatus::Config,
        TcamError::Dimension(_) => FetcamStatus::Dimension,
        TcamError::Format { .. } => FetcamStatus::Format,
        TcamError::ResistanceOrder(_) => FetcamStatus::ResistanceOrder,
        TcamError::Io(_) => FetcamStatus::Io,
    }
}

fn fail(status: FetcamStatus, msg: &str) -> FetcamStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), FetcamStatus>) -> FetcamStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FetcamStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(FetcamStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: fetcam::Result<T>) -> Result<T, FetcamStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, FetcamStatus> {
    if p.is_null() {
        return Err(fail(FetcamStatus::NullPointer, &format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(FetcamStatus::InvalidInput, &format!("{name} is not UTF-8")))
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn load_config(p: *const c_char) -> Result<RunConfig, FetcamStatus> {
    if p.is_null() {
        Ok(RunConfig::default())
    } else {
        lift(RunConfig::from_json_str(str_arg(p, "config_json")?))
    }
}

/// Creates a calibrated `rows` x `cols` array of `design` (e.g. "1.5T1DG-Fe").
/// `config_json` may be null for the built-in defaults.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fetcam_array_new(
    design: *const c_char,
    rows: usize,
    cols: usize,
    config_json: *const c_char,
    out: *mut *mut FetcamArray,
) -> FetcamStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(FetcamStatus::NullPointer, "out is null"));
        }
        *out = ptr::null_mut();
        let d: CellDesign = lift(str_arg(design, "design")?.parse())?;
        let mut cfg = load_config(config_json)?;
        cfg.designs = vec![d];
        cfg.array.rows = rows;
        cfg.array.cols = cols;
        let mut model = lift(cfg.resolve())?;
        let config = model.configs.remove(&d).expect("selected design resolved");
        *out = Box::into_raw(Box::new(FetcamArray { config, state: None }));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `array` must come from `fetcam_array_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fetcam_array_free(array: *mut FetcamArray) {
    if !array.is_null() {
        drop(Box::from_raw(array));
    }
}

/// Programs the array from newline-separated words over {0,1,X}.
/// `write_energy_j` may be null.
///
/// # Safety
/// `array` must be a live handle; `contents` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn fetcam_array_program(
    array: *mut FetcamArray,
    contents: *const c_char,
    write_energy_j: *mut f64,
) -> FetcamStatus {
    guard(|| {
        let a = array.as_mut().ok_or_else(|| fail(FetcamStatus::NullPointer, "array is null"))?;
        let words = lift(grid::parse_grid(str_arg(contents, "contents")?))?;
        let r = lift(array::program(&a.config, &words))?;
        if !write_energy_j.is_null() {
            *write_energy_j = r.write_energy;
        }
        a.state = Some(r.state);
        Ok(())
    })
}

/// Searches `query` (a word over {0,1}). Writes one byte per row into
/// `match_out` (1 = match); `match_len` must equal the row count. `stats` may
/// be null.
///
/// # Safety
/// `array` must be a live handle, `query` NUL-terminated, and `match_out`
/// valid for `match_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn fetcam_array_search(
    array: *const FetcamArray,
    query: *const c_char,
    match_out: *mut u8,
    match_len: usize,
    stats: *mut FetcamSearchStats,
) -> FetcamStatus {
    guard(|| {
        let a = array.as_ref().ok_or_else(|| fail(FetcamStatus::NullPointer, "array is null"))?;
        let state = a.state.as_ref().ok_or_else(|| fail(FetcamStatus::NotProgrammed, "array not programmed"))?;
        if match_out.is_null() {
            return Err(fail(FetcamStatus::NullPointer, "match_out is null"));
        }
        if match_len != a.config.rows {
            return Err(fail(
                FetcamStatus::Dimension,
                &format!("match_len {match_len} differs from row count {}", a.config.rows),
            ));
        }
        let mut qs = lift(grid::parse_queries(str_arg(query, "query")?))?;
        if qs.len() != 1 {
            return Err(fail(FetcamStatus::Format, "query must be a single word"));
        }
        let out = lift(array::search(&a.config, state, &qs.remove(0)))?;
        let dst = std::slice::from_raw_parts_mut(match_out, match_len);
        for (d, m) in dst.iter_mut().zip(&out.match_mask) {
            *d = u8::from(*m);
        }
        if let Some(s) = stats.as_mut() {
            let e = out.total_energy;
            *s = FetcamSearchStats {
                matched_rows: out.matched_rows().len(),
                step1_terminated_rows: out.rows.iter().filter(|r| r.terminated_at_step_one(a.config.design)).count(),
                sel_b_suppressed: u8::from(out.sel_b_suppressed),
                latency_s: out.total_latency,
                energy_j: e.total,
                precharge_j: e.precharge,
                sense_amp_j: e.sense_amp,
                divider_static_j: e.divider_static,
                signal_switching_j: e.signal_switching,
            };
        }
        Ok(())
    })
}

/// Row and column counts of a handle.
///
/// # Safety
/// `array` must be a live handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn fetcam_array_shape(
    array: *const FetcamArray,
    rows: *mut usize,
    cols: *mut usize,
) -> FetcamStatus {
    guard(|| {
        let a = array.as_ref().ok_or_else(|| fail(FetcamStatus::NullPointer, "array is null"))?;
        if let Some(r) = rows.as_mut() {
            *r = a.config.rows;
        }
        if let Some(c) = cols.as_mut() {
            *c = a.config.cols;
        }
        Ok(())
    })
}

/// Figure-of-merit report as JSON. `config_json` may be null. The result must
/// be released with `fetcam_string_free`.
///
/// # Safety
/// `config_json` must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fetcam_fom_json(config_json: *const c_char, out: *mut *mut c_char) -> FetcamStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(FetcamStatus::NullPointer, "out is null"));
        }
        *out = ptr::null_mut();
        let cfg = load_config(config_json)?;
        let model = lift(cfg.resolve())?;
        let rep = lift(report::fom_report(&model.configs, model.calibration))?;
        *out = CString::new(rep.to_json()).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn fetcam_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread; empty if none. Valid until the
/// next library call on the same thread.
#[no_mangle]
pub extern "C" fn fetcam_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
