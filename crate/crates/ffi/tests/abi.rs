use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use modcalc_ffi::*;

fn context(p: u64, m: u32) -> *mut McLogContext {
    let mut ctx = ptr::null_mut();
    assert_eq!(unsafe { mc_log_context_new(p, m, &mut ctx) }, McStatus::Ok);
    assert!(!ctx.is_null());
    ctx
}

fn call(f: impl FnOnce(*mut u64) -> McStatus) -> Result<u64, McStatus> {
    let mut v = 0u64;
    match f(&mut v) {
        McStatus::Ok => Ok(v),
        s => Err(s),
    }
}

fn last_error() -> String {
    let p = mc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn anchors_through_the_abi() {
    unsafe {
        let c2 = context(3, 2);
        assert_eq!(call(|o| mc_compute_e(c2, o)), Ok(4));
        assert_eq!(call(|o| mc_generator(c2, o)), Ok(5));
        assert_eq!(call(|o| mc_lm_full(c2, -1, o)), Ok(3));
        assert_eq!(call(|o| mc_lm_full(c2, 7, o)), Ok(2));
        assert_eq!(call(|o| mc_pth_root_unit(c2, 10, o)), Ok(4));
        assert_eq!(call(|o| mc_log_context_modulus(c2, o)), Ok(9));
        mc_log_context_free(c2);

        let c3 = context(3, 3);
        assert_eq!(call(|o| mc_compute_e(c3, o)), Ok(13));
        assert_eq!(call(|o| mc_lm_principal(c3, 4, o)), Ok(7));
        assert_eq!(call(|o| mc_pow_e(c3, 1, o)), Ok(13));
        assert!(call(|o| mc_plm(c3, 2, o)).is_ok());
        mc_log_context_free(c3);
    }
}

#[test]
fn errors_map_to_codes() {
    unsafe {
        let c = context(3, 2);
        assert_eq!(call(|o| mc_lm_full(c, 3, o)), Err(McStatus::NotUnit));
        assert!(last_error().contains("not a unit"));
        assert_eq!(call(|o| mc_lm_principal(c, 2, o)), Err(McStatus::Precondition));
        assert_eq!(mc_lm_full(c, 1, ptr::null_mut()), McStatus::NullPointer);
        assert_eq!(mc_compute_e(ptr::null(), &mut 0), McStatus::NullPointer);
        mc_log_context_free(c);
        mc_log_context_free(ptr::null_mut());

        let mut ctx = ptr::null_mut();
        assert_eq!(mc_log_context_new(4, 2, &mut ctx), McStatus::NotPrime);
        assert!(ctx.is_null());
        assert_eq!(call(|o| mc_kernel_i(9, 1, 1, o)), Err(McStatus::Precondition));
        assert_eq!(call(|o| mc_carmichael(1, o)), Err(McStatus::InvalidArgument));
        // success clears the previous message
        assert_eq!(call(|o| mc_radical(12, o)), Ok(6));
        assert!(mc_last_error().is_null());
    }
}

#[test]
fn ring_helpers() {
    unsafe {
        let mut v = 0i64;
        assert_eq!(mc_centered_rep(8, 9, &mut v), McStatus::Ok);
        assert_eq!(v, -1);
        assert_eq!(mc_centered_rep(1, 0, &mut v), McStatus::InvalidArgument);
        assert_eq!(call(|o| mc_radical(72, o)), Ok(6));
        assert_eq!(call(|o| mc_carmichael(8, o)), Ok(2));
        assert_eq!(call(|o| mc_carmichael(27, o)), Ok(18));
        assert_eq!(call(|o| mc_kernel_i(5, 0, 3, o)), Ok(0));
    }
    assert!(mc_ratio_condition(41, 41));
    assert!(!mc_ratio_condition(41, 40));
}

#[test]
fn claim_json_roundtrip() {
    unsafe {
        let id = CString::new("C4").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(mc_run_claim_json(id.as_ptr(), 3, 2, 1, &mut out), McStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        mc_string_free(out);
        modcalc::claims::validate_report(&doc).unwrap();
        assert_eq!(doc[0]["verdict"], "PASS");

        let bad = CString::new("C99").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(mc_run_claim_json(bad.as_ptr(), 3, 2, 1, &mut out), McStatus::UnknownClaim);
        assert_eq!(mc_run_claim_json(ptr::null(), 3, 2, 1, &mut out), McStatus::NullPointer);
        mc_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/modcalc.h")).unwrap();
    for sym in [
        "mc_log_context_new",
        "mc_log_context_free",
        "mc_compute_e",
        "mc_generator",
        "mc_lm_full",
        "mc_lm_principal",
        "mc_pow_e",
        "mc_plm",
        "mc_pth_root_unit",
        "mc_centered_rep",
        "mc_radical",
        "mc_carmichael",
        "mc_kernel_i",
        "mc_ratio_condition",
        "mc_run_claim_json",
        "mc_string_free",
        "mc_last_error",
        "MC_STATUS_NOT_UNIT",
        "typedef struct McLogContext McLogContext",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}

/// Compiles the C smoke program against the header and static library when
/// a C compiler and the archive are available.
#[test]
fn c_smoke_program() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::var_os("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| dir.join("../../target"));
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    let lib = target.join(profile).join("libmodcalc_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C smoke program: no archive or compiler");
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
