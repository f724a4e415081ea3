use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use fetcam_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(fetcam_last_error()) }.to_string_lossy().into_owned()
}

fn new_array(design: &str, rows: usize, cols: usize) -> *mut FetcamArray {
    let mut a = ptr::null_mut();
    let st = unsafe { fetcam_array_new(c(design).as_ptr(), rows, cols, ptr::null(), &mut a) };
    assert_eq!(st, FetcamStatus::Ok, "{}", last_error());
    a
}

#[test]
fn program_and_search() {
    let a = new_array("1.5T1DG-Fe", 2, 4);
    let mut energy = 0.0;
    assert_eq!(unsafe { fetcam_array_program(a, c("10X1\n0000\n").as_ptr(), &mut energy) }, FetcamStatus::Ok);
    assert!(energy > 0.0);
    let mut m = [9u8; 2];
    let mut st = FetcamSearchStats::default();
    assert_eq!(unsafe { fetcam_array_search(a, c("1001").as_ptr(), m.as_mut_ptr(), 2, &mut st) }, FetcamStatus::Ok);
    assert_eq!(m, [1, 0]);
    assert_eq!(st.matched_rows, 1);
    assert!(st.energy_j > 0.0 && st.latency_s > 0.0);
    let sum = st.precharge_j + st.sense_amp_j + st.divider_static_j + st.signal_switching_j;
    assert!((sum - st.energy_j).abs() <= 1e-12 * st.energy_j);
    // both rows miss in column 0
    assert_eq!(unsafe { fetcam_array_search(a, c("0110").as_ptr(), m.as_mut_ptr(), 2, &mut st) }, FetcamStatus::Ok);
    assert_eq!(m, [0, 0]);
    assert_eq!(st.sel_b_suppressed, 1);
    assert_eq!(st.step1_terminated_rows, 2);
    let (mut r, mut k) = (0, 0);
    assert_eq!(unsafe { fetcam_array_shape(a, &mut r, &mut k) }, FetcamStatus::Ok);
    assert_eq!((r, k), (2, 4));
    unsafe { fetcam_array_free(a) };
}

#[test]
fn error_codes() {
    let mut a = ptr::null_mut();
    let st = unsafe { fetcam_array_new(c("3T2R").as_ptr(), 2, 4, ptr::null(), &mut a) };
    assert_eq!(st, FetcamStatus::Config);
    assert!(a.is_null());
    assert!(last_error().contains("3T2R"));

    let st = unsafe { fetcam_array_new(c("2SG").as_ptr(), 2, 4, c("{oops").as_ptr(), &mut a) };
    assert_eq!(st, FetcamStatus::Format);
    assert_eq!(unsafe { fetcam_array_new(ptr::null(), 2, 4, ptr::null(), &mut a) }, FetcamStatus::NullPointer);

    let a = new_array("2SG-FeFET", 2, 3);
    let mut m = [0u8; 2];
    let q = c("101");
    assert_eq!(
        unsafe { fetcam_array_search(a, q.as_ptr(), m.as_mut_ptr(), 2, ptr::null_mut()) },
        FetcamStatus::NotProgrammed
    );
    assert_eq!(unsafe { fetcam_array_program(a, c("10X\n").as_ptr(), ptr::null_mut()) }, FetcamStatus::Dimension);
    assert_eq!(unsafe { fetcam_array_program(a, c("10X\n1Q1\n").as_ptr(), ptr::null_mut()) }, FetcamStatus::Format);
    assert_eq!(unsafe { fetcam_array_program(a, c("10X\n1X1\n").as_ptr(), ptr::null_mut()) }, FetcamStatus::Ok);
    assert_eq!(
        unsafe { fetcam_array_search(a, q.as_ptr(), m.as_mut_ptr(), 3, ptr::null_mut()) },
        FetcamStatus::Dimension
    );
    assert_eq!(
        unsafe { fetcam_array_search(a, c("1010").as_ptr(), m.as_mut_ptr(), 2, ptr::null_mut()) },
        FetcamStatus::Dimension
    );
    assert_eq!(unsafe { fetcam_array_search(a, q.as_ptr(), m.as_mut_ptr(), 2, ptr::null_mut()) }, FetcamStatus::Ok);
    assert_eq!(m, [1, 1]);
    unsafe { fetcam_array_free(a) };
    unsafe { fetcam_array_free(ptr::null_mut()) };
}

#[test]
fn fom_json_round_trip() {
    let mut s = ptr::null_mut();
    let cfg = c(r#"{"designs": ["1.5T1SG-Fe", "2SG-FeFET"]}"#);
    assert_eq!(unsafe { fetcam_fom_json(cfg.as_ptr(), &mut s) }, FetcamStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { fetcam_string_free(s) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let designs = v["designs"].as_array().unwrap();
    assert_eq!(designs.len(), 2);
    assert_eq!(v["baseline"]["cell_area_um2"], 0.286);
}

#[test]
fn c_program_links_against_header() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    // The test harness links the rlib only; build the archive into a private
    // target dir so the outer cargo lock is not contended.
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi-smoke");
    let st = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "fetcam-ffi", "--lib", "--target-dir"])
        .arg(&target)
        .status()
        .unwrap();
    assert!(st.success(), "building the static library failed");
    let lib = target.join("debug/libfetcam_ffi.a");
    let dir = std::env::temp_dir().join(format!("fetcam_ffi_smoke_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let exe = dir.join("smoke");
    let st = Command::new("cc")
        .arg(root.join("tests/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "10 1");
    let _ = std::fs::remove_dir_all(&dir);
}
