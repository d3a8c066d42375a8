//! C ABI over `ngtmst`.
//!
//! Every fallible call returns an [`NgtStatus`] and writes its result through an out
//! pointer. On failure `ngt_last_error()` describes the most recent error on the calling
//! thread. Handles are opaque and must be released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nalgebra::Vector4;
use ngtmst::oracle::{HeraldedState, Oracle};
use ngtmst::{Error, NgParams, SqueezingTemplate};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NgtStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    OrderTooLarge = 3,
    SingularCovariance = 4,
    NegligibleProbability = 5,
    TailTooLarge = 6,
    NoMinimumInRange = 7,
    NonDecayingKernel = 8,
    Config = 9,
    Io = 10,
    Panic = 11,
}

impl From<&Error> for NgtStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::OrderTooLarge { .. } => NgtStatus::OrderTooLarge,
            Error::Domain(_) => NgtStatus::Domain,
            Error::SingularCovariance(_) => NgtStatus::SingularCovariance,
            Error::NegligibleProbability(_) => NgtStatus::NegligibleProbability,
            Error::TailTooLarge { .. } => NgtStatus::TailTooLarge,
            Error::NoMinimumInRange { .. } => NgtStatus::NoMinimumInRange,
            Error::NonDecayingKernel(_) => NgtStatus::NonDecayingKernel,
            Error::Config(_) => NgtStatus::Config,
            Error::Io(_) => NgtStatus::Io,
        }
    }
}

/// State parameters (λ, κ, τ, m, n).
pub struct NgtParams(NgParams);

/// Fock-basis oracle with its operator caches.
pub struct NgtOracle(Oracle);

/// Heralded density matrix produced by the oracle.
pub struct NgtHerald(HeraldedState);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(NgtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(NgtStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NgtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NgtStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            NgtStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn read_xi(xi: *const f64) -> Result<Vector4<f64>, Failure> {
    if xi.is_null() {
        return Err(null("xi"));
    }
    let s = std::slice::from_raw_parts(xi, 4);
    Ok(Vector4::new(s[0], s[1], s[2], s[3]))
}

/// Message for the last failed call on this thread, or NULL if none. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ngt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn ngt_clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ngt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes. The handle is released with `ngt_params_free`.
#[no_mangle]
pub unsafe extern "C" fn ngt_params_new(
    lambda: f64,
    kappa: f64,
    tau: f64,
    m: usize,
    n: usize,
    out: *mut *mut NgtParams,
) -> NgtStatus {
    guard(|| {
        let p = NgParams::new(lambda, kappa, tau, m, n)?;
        write(out, Box::into_raw(Box::new(NgtParams(p))), "out")
    })
}

/// Same as `ngt_params_new` from squeezing r and mean thermal photon number.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ngt_params_from_physical(
    r_sq: f64,
    n_th: f64,
    tau: f64,
    m: usize,
    n: usize,
    out: *mut *mut NgtParams,
) -> NgtStatus {
    guard(|| {
        let p = NgParams::from_physical(r_sq, n_th, tau, m, n)?;
        write(out, Box::into_raw(Box::new(NgtParams(p))), "out")
    })
}

/// # Safety
/// `p` must come from `ngt_params_new` or be NULL, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ngt_params_free(p: *mut NgtParams) {
    if !p.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(p))));
    }
}

/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_success_probability(p: *const NgtParams, out: *mut f64) -> NgtStatus {
    guard(|| write(out, ngtmst::success_probability(&deref(p, "params")?.0)?, "out"))
}

/// Parity of output port 2 at phase φ (operating point biased by π/2).
///
/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_parity_expectation(p: *const NgtParams, phi: f64, out: *mut f64) -> NgtStatus {
    guard(|| write(out, ngtmst::parity_expectation(&deref(p, "params")?.0, phi)?, "out"))
}

/// Δφ; +inf where the parity slope vanishes.
///
/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_phase_uncertainty(p: *const NgtParams, phi: f64, out: *mut f64) -> NgtStatus {
    guard(|| write(out, ngtmst::phase_uncertainty(&deref(p, "params")?.0, phi)?, "out"))
}

/// Δφ of the un-heralded squeezed thermal input.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ngt_phase_uncertainty_tmst(lambda: f64, kappa: f64, phi: f64, out: *mut f64) -> NgtStatus {
    guard(|| {
        NgParams::tmst(lambda, kappa)?;
        write(out, ngtmst::phase_uncertainty_tmst(lambda, kappa, phi), "out")
    })
}

/// Normalized Wigner function at xi = (q1, p1, q2, p2).
///
/// # Safety
/// `xi` must point to 4 doubles; other pointers valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_wigner(p: *const NgtParams, xi: *const f64, out: *mut f64) -> NgtStatus {
    guard(|| {
        let xi = read_xi(xi)?;
        write(out, ngtmst::wigner_normalized(&deref(p, "params")?.0, &xi)?, "out")
    })
}

/// Δφ_TMST − Δφ of the heralded state.
///
/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_merit_thermal(p: *const NgtParams, phi: f64, out: *mut f64) -> NgtStatus {
    guard(|| write(out, ngtmst::merit_thermal(&deref(p, "params")?.0, phi)?, "out"))
}

/// As `ngt_merit_thermal`, restricted to κ = 1/2.
///
/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_merit_vacuum(p: *const NgtParams, phi: f64, out: *mut f64) -> NgtStatus {
    guard(|| write(out, ngtmst::merit_vacuum(&deref(p, "params")?.0, phi)?, "out"))
}

/// Squeezing in [r_lo, r_hi] minimizing Δφ for fixed (κ, τ, m, n, φ).
///
/// # Safety
/// `r_opt` and `delta_phi` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ngt_find_optimal_squeezing(
    kappa: f64,
    tau: f64,
    m: usize,
    n: usize,
    phi: f64,
    r_lo: f64,
    r_hi: f64,
    r_opt: *mut f64,
    delta_phi: *mut f64,
) -> NgtStatus {
    guard(|| {
        if r_opt.is_null() || delta_phi.is_null() {
            return Err(null("output"));
        }
        let t = SqueezingTemplate { kappa, tau, m, n };
        let (r, d) = ngtmst::find_optimal_squeezing(&t, phi, (r_lo, r_hi))?;
        write(r_opt, r, "r_opt")?;
        write(delta_phi, d, "delta_phi")
    })
}

/// Oracle with a fixed photon-number cutoff, or automatic escalation when `cutoff` is 0.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ngt_oracle_new(cutoff: usize, out: *mut *mut NgtOracle) -> NgtStatus {
    guard(|| {
        let o = if cutoff == 0 { Oracle::auto() } else { Oracle::fixed(cutoff) };
        write(out, Box::into_raw(Box::new(NgtOracle(o))), "out")
    })
}

/// # Safety
/// `o` must come from `ngt_oracle_new` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_oracle_free(o: *mut NgtOracle) {
    if !o.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(o))));
    }
}

/// Heralds the squeezed thermal state (r, n_th) with ancilla |m>, beamsplitter τ and detection of n.
///
/// # Safety
/// `o` must be a live oracle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ngt_oracle_herald(
    o: *mut NgtOracle,
    r_sq: f64,
    n_th: f64,
    tau: f64,
    m: usize,
    n: usize,
    out: *mut *mut NgtHerald,
) -> NgtStatus {
    guard(|| {
        let o = o.as_mut().ok_or_else(|| null("oracle"))?;
        let h = o.0.heralded(r_sq, n_th, tau, m, n)?;
        write(out, Box::into_raw(Box::new(NgtHerald(h))), "out")
    })
}

/// # Safety
/// `h` must come from `ngt_oracle_herald` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_herald_free(h: *mut NgtHerald) {
    if !h.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(h))));
    }
}

/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_herald_probability(h: *const NgtHerald, out: *mut f64) -> NgtStatus {
    guard(|| write(out, deref(h, "herald")?.0.probability, "out"))
}

/// Cutoff actually used and the residual truncation tail.
///
/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_herald_truncation(h: *const NgtHerald, cutoff: *mut usize, tail: *mut f64) -> NgtStatus {
    guard(|| {
        let h = &deref(h, "herald")?.0;
        write(cutoff, h.cutoff, "cutoff")?;
        write(tail, h.tail, "tail")
    })
}

/// # Safety
/// `xi` must point to 4 doubles; other pointers valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_herald_wigner(h: *const NgtHerald, xi: *const f64, out: *mut f64) -> NgtStatus {
    guard(|| {
        let xi = read_xi(xi)?;
        write(out, deref(h, "herald")?.0.rho.wigner_point(&xi), "out")
    })
}

/// Oracle parity at phase φ, same convention as `ngt_parity_expectation`.
///
/// # Safety
/// Pointers must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn ngt_oracle_parity_expectation(
    o: *mut NgtOracle,
    h: *const NgtHerald,
    phi: f64,
    out: *mut f64,
) -> NgtStatus {
    guard(|| {
        let o = o.as_mut().ok_or_else(|| null("oracle"))?;
        let h = deref(h, "herald")?;
        write(out, o.0.parity_expectation(&h.0, phi)?, "out")
    })
}
