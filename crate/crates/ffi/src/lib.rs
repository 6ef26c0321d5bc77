//! C ABI over `modcalc`.
//!
//! Every fallible function returns an [`McStatus`] and writes its result
//! through an out pointer. On failure the message is available from
//! [`mc_last_error`] until the next call on the same thread. Strings
//! returned by the library are released with [`mc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modcalc::claims::{self, ClaimParams};
use modcalc::padic::{self, GeneratorPair, PrecisionContext};
use modcalc::ring::Residue;
use modcalc::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrime = 3,
    NotUnit = 4,
    Overflow = 5,
    Precondition = 6,
    UnknownClaim = 7,
    Internal = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> McStatus {
    match e {
        Error::NotPrime(_) => McStatus::NotPrime,
        Error::NotUnit { .. } => McStatus::NotUnit,
        Error::Overflow(_) => McStatus::Overflow,
        Error::Precondition(_) | Error::NotGenerator { .. } | Error::NotRepresentable(_) => McStatus::Precondition,
        Error::UnknownClaim(_) => McStatus::UnknownClaim,
        Error::InvalidArgument(_) | Error::NotCoprime(..) => McStatus::InvalidArgument,
        Error::Io(_) => McStatus::Internal,
    }
}

/// Runs `f`, stores its value in `out` and maps errors and panics to codes.
fn guarded<T>(out: *mut T, f: impl FnOnce() -> modcalc::Result<T>) -> McStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    if out.is_null() {
        set_error("output pointer is null".into());
        return McStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            unsafe { out.write(v) };
            McStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            McStatus::Internal
        }
    }
}

/// Logarithm context for a fixed `(p, m)` with its generator resolved.
pub struct McLogContext {
    gp: GeneratorPair,
}

impl McLogContext {
    fn ctx(&self) -> &PrecisionContext {
        &self.gp.ctx
    }
}

/// Builds a context for `p^m`; `*out` receives an owned handle.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_log_context_new(p: u64, m: u32, out: *mut *mut McLogContext) -> McStatus {
    guarded(out, || {
        let ctx = PrecisionContext::new(p, m)?;
        let gp = padic::find_generator(&ctx)?;
        Ok(Box::into_raw(Box::new(McLogContext { gp })))
    })
}

/// Releases a handle from [`mc_log_context_new`]; null is ignored.
///
/// # Safety
/// `ctx` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn mc_log_context_free(ctx: *mut McLogContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

unsafe fn with_ctx<T>(
    ctx: *const McLogContext,
    out: *mut T,
    f: impl FnOnce(&McLogContext) -> modcalc::Result<T>,
) -> McStatus {
    if ctx.is_null() {
        set_error("context is null".into());
        return McStatus::NullPointer;
    }
    let c = &*ctx;
    guarded(out, || f(c))
}

/// Modulus `p^m` of the context.
///
/// # Safety
/// `ctx` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_log_context_modulus(ctx: *const McLogContext, out: *mut u64) -> McStatus {
    with_ctx(ctx, out, |c| Ok(c.ctx().modulus()))
}

/// `E` modulo `p^m`.
///
/// # Safety
/// `ctx` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_compute_e(ctx: *const McLogContext, out: *mut u64) -> McStatus {
    with_ctx(ctx, out, |c| Ok(padic::compute_e(c.ctx())?.rep()))
}

/// The generator `e` of the context.
///
/// # Safety
/// `ctx` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_generator(ctx: *const McLogContext, out: *mut u64) -> McStatus {
    with_ctx(ctx, out, |c| Ok(c.gp.e.rep()))
}

/// `E^x` modulo `p^m`.
///
/// # Safety
/// `ctx` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_pow_e(ctx: *const McLogContext, x: i64, out: *mut u64) -> McStatus {
    with_ctx(ctx, out, |c| Ok(padic::pow_e(x as i128, c.ctx())?.rep()))
}

/// Full logarithm of a unit, modulo `p^(m-1)(p-1)`.
///
/// # Safety
/// `ctx` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_lm_full(ctx: *const McLogContext, x: i64, out: *mut u64) -> McStatus {
    with_ctx(ctx, out, |c| Ok(padic::lm_full(x as i128, &c.gp)?.rep()))
}

/// Principal logarithm of `u ≡ 1 (mod p)`, modulo `p^(m-1)`.
///
/// # Safety
/// `ctx` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_lm_principal(ctx: *const McLogContext, u: i64, out: *mut u64) -> McStatus {
    with_ctx(ctx, out, |c| {
        let q = c.ctx().modulus();
        Ok(padic::lm_principal(Residue::new(u as i128, q), c.ctx())?.rep())
    })
}

/// Power logarithm modulo `p^m`.
///
/// # Safety
/// `ctx` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_plm(ctx: *const McLogContext, x: i64, out: *mut u64) -> McStatus {
    with_ctx(ctx, out, |c| Ok(padic::plm(x as i128, c.ctx())?.rep()))
}

/// `p`-th root modulo `p^m` of `w ≡ 1 (mod p^2)` given modulo `p^(m+1)`.
///
/// # Safety
/// `ctx` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_pth_root_unit(ctx: *const McLogContext, w: u64, out: *mut u64) -> McStatus {
    with_ctx(ctx, out, |c| {
        let upper = c.ctx().at_precision(c.ctx().m + 1)?;
        let w = Residue::from_u64(w, upper.modulus());
        Ok(padic::pth_root_unit(w, c.ctx())?.rep())
    })
}

/// Centered representative of `x` modulo `q`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_centered_rep(x: i64, q: u64, out: *mut i64) -> McStatus {
    guarded(out, || {
        if q == 0 {
            return Err(Error::InvalidArgument("q must be positive".into()));
        }
        Ok(modcalc::ring::centered_rep(x as i128, q) as i64)
    })
}

/// Product of the distinct primes dividing `q`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_radical(q: u64, out: *mut u64) -> McStatus {
    guarded(out, || {
        if q == 0 {
            return Err(Error::InvalidArgument("q must be positive".into()));
        }
        Ok(modcalc::ring::radical(q))
    })
}

/// Carmichael exponent of `(Z/x)^*`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_carmichael(x: u64, out: *mut u64) -> McStatus {
    guarded(out, || modcalc::ring::carmichael(x))
}

/// Integration kernel `I^t(x)` modulo the prime `p`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_kernel_i(p: u64, t: u64, x: u64, out: *mut u64) -> McStatus {
    guarded(out, || Ok(modcalc::calculus::kernel_i(p)?.at(t, x)))
}

/// Exponent ratio test `q/p <= 6·⌊(q-2)/39⌋`.
#[no_mangle]
pub extern "C" fn mc_ratio_condition(p: u64, q: u64) -> bool {
    modcalc::dioph::ratio_condition(p, q)
}

/// Runs one claim and returns its report document as an owned JSON string.
///
/// # Safety
/// `id` must be a nul-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mc_run_claim_json(
    id: *const c_char,
    p: u64,
    m: u32,
    seed: u64,
    out: *mut *mut c_char,
) -> McStatus {
    if id.is_null() {
        set_error("id is null".into());
        return McStatus::NullPointer;
    }
    let id = CStr::from_ptr(id).to_string_lossy().into_owned();
    guarded(out, || {
        let params = ClaimParams { p, m, seed, ..ClaimParams::default() };
        let report = claims::run_claim(&id, &params)?;
        let json = claims::report_json(std::slice::from_ref(&report));
        Ok(CString::new(json).expect("json has no nul").into_raw())
    })
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn mc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Owned by the
/// library and valid until the next call.
#[no_mangle]
pub extern "C" fn mc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
