//! C ABI for the band-counter toolkit.
//!
//! Conventions:
//! - Every fallible call returns a [`BcStatus`]; results come back through
//!   out-pointers, which are written only on `BC_STATUS_OK`.
//! - Sweep results are returned as opaque handles (`BcCountResult`) that must
//!   be released with the matching `_free` function.
//! - The last error message is kept per thread and can be copied out with
//!   [`bc_last_error_message`].
//!
//! The header `include/band_counter.h` is generated at build time.

use std::cell::RefCell;
use std::os::raw::{c_char, c_int};

use band_counter::types::{CountResult, ProblemVariant};
use band_counter::{annulus, halfline, predictions, strip, Error};

/// Status codes returned by every fallible FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcStatus {
    BcStatusOk = 0,
    /// A pointer argument was null.
    BcStatusNullPointer = 1,
    /// A parameter was out of its documented domain.
    BcStatusInvalidParameter = 2,
    /// An iterative solver failed to converge.
    BcStatusNoConvergence = 3,
    /// The requested quantity sits below the numeric resolution floor.
    BcStatusNumericFloor = 4,
    /// The scan window holds too few momenta at this h.
    BcStatusWindowTooSmall = 5,
    /// Any other solver-side failure; see `bc_last_error_message`.
    BcStatusInternal = 6,
}

/// Boundary-condition variant selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcVariant {
    /// Dirichlet at the lower endpoint, Neumann at the upper.
    BcVariantMixedDn = 0,
    /// Neumann at both endpoints.
    BcVariantPureNn = 1,
}

/// Half-line model selector for the splitting asymptotics.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcHalflineKind {
    BcHalflineNeumann = 0,
    BcHalflineDirichlet = 1,
}

/// Opaque handle to a completed counting sweep.
pub struct BcCountResult {
    inner: CountResult,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: &str) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message.to_string());
}

fn status_of(err: &Error) -> BcStatus {
    match err {
        Error::InvalidParameter(_) => BcStatus::BcStatusInvalidParameter,
        Error::NoConvergence(_) => BcStatus::BcStatusNoConvergence,
        Error::NumericFloor(_) => BcStatus::BcStatusNumericFloor,
        Error::WindowTooSmall(_) => BcStatus::BcStatusWindowTooSmall,
        _ => BcStatus::BcStatusInternal,
    }
}

fn fail(err: Error) -> BcStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn variant_of(v: BcVariant) -> ProblemVariant {
    match v {
        BcVariant::BcVariantMixedDn => ProblemVariant::MixedDN,
        BcVariant::BcVariantPureNn => ProblemVariant::PureNN,
    }
}

/// Copies the thread's last error message into `buffer` (NUL-terminated,
/// truncated to `length` bytes). Returns the full message length in bytes,
/// excluding the terminator, or −1 when `buffer` is null with nonzero length.
#[no_mangle]
pub extern "C" fn bc_last_error_message(buffer: *mut c_char, length: usize) -> c_int {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if length > 0 {
            if buffer.is_null() {
                return -1;
            }
            let n = bytes.len().min(length - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr(), buffer.cast::<u8>(), n);
                *buffer.add(n) = 0;
            }
        }
        bytes.len() as c_int
    })
}

/// Ground band value λ₀ of the strip fiber operator at angular momentum `m`.
#[no_mangle]
pub extern "C" fn bc_strip_band0(
    l: f64,
    m: i64,
    h: f64,
    variant: BcVariant,
    out_lambda0: *mut f64,
) -> BcStatus {
    if out_lambda0.is_null() {
        set_error("out_lambda0 is null");
        return BcStatus::BcStatusNullPointer;
    }
    match strip::band0(l, m, h, variant_of(variant)) {
        Ok(v) => {
            unsafe { *out_lambda0 = v };
            BcStatus::BcStatusOk
        }
        Err(e) => fail(e),
    }
}

/// Ground band value λ₀ of the annulus fiber operator at angular momentum `m`.
#[no_mangle]
pub extern "C" fn bc_annulus_band0(
    r_inner: f64,
    m: i64,
    h: f64,
    variant: BcVariant,
    out_lambda0: *mut f64,
) -> BcStatus {
    if out_lambda0.is_null() {
        set_error("out_lambda0 is null");
        return BcStatus::BcStatusNullPointer;
    }
    match annulus::band0_annulus(r_inner, m, h, variant_of(variant)) {
        Ok(v) => {
            unsafe { *out_lambda0 = v };
            BcStatus::BcStatusOk
        }
        Err(e) => fail(e),
    }
}

/// Runs the strip counting sweep; on success writes a handle that must be
/// released with `bc_count_result_free`.
#[no_mangle]
pub extern "C" fn bc_strip_count(
    l: f64,
    h: f64,
    variant: BcVariant,
    tol: f64,
    out_result: *mut *mut BcCountResult,
) -> BcStatus {
    if out_result.is_null() {
        set_error("out_result is null");
        return BcStatus::BcStatusNullPointer;
    }
    match strip::count_strip(l, h, variant_of(variant), tol) {
        Ok(inner) => {
            let handle = Box::into_raw(Box::new(BcCountResult { inner }));
            unsafe { *out_result = handle };
            BcStatus::BcStatusOk
        }
        Err(e) => fail(e),
    }
}

/// Runs the annulus counting sweep; same handle contract as `bc_strip_count`.
#[no_mangle]
pub extern "C" fn bc_annulus_count(
    r_inner: f64,
    h: f64,
    variant: BcVariant,
    tol: f64,
    out_result: *mut *mut BcCountResult,
) -> BcStatus {
    if out_result.is_null() {
        set_error("out_result is null");
        return BcStatus::BcStatusNullPointer;
    }
    match annulus::count_annulus_variant(r_inner, h, variant_of(variant), tol) {
        Ok(inner) => {
            let handle = Box::into_raw(Box::new(BcCountResult { inner }));
            unsafe { *out_result = handle };
            BcStatus::BcStatusOk
        }
        Err(e) => fail(e),
    }
}

/// Number of momenta whose ground band value lies below the Landau level h.
#[no_mangle]
pub extern "C" fn bc_count_result_count(result: *const BcCountResult, out_count: *mut usize) -> BcStatus {
    if result.is_null() || out_count.is_null() {
        set_error("null handle or out pointer");
        return BcStatus::BcStatusNullPointer;
    }
    unsafe { *out_count = (*result).inner.count };
    BcStatus::BcStatusOk
}

/// Closed-form asymptotic prediction for the count.
#[no_mangle]
pub extern "C" fn bc_count_result_predicted(
    result: *const BcCountResult,
    out_predicted: *mut f64,
) -> BcStatus {
    if result.is_null() || out_predicted.is_null() {
        set_error("null handle or out pointer");
        return BcStatus::BcStatusNullPointer;
    }
    unsafe { *out_predicted = (*result).inner.predicted };
    BcStatus::BcStatusOk
}

/// Ratio of the computed count to the prediction.
#[no_mangle]
pub extern "C" fn bc_count_result_ratio(result: *const BcCountResult, out_ratio: *mut f64) -> BcStatus {
    if result.is_null() || out_ratio.is_null() {
        set_error("null handle or out pointer");
        return BcStatus::BcStatusNullPointer;
    }
    unsafe { *out_ratio = (*result).inner.ratio };
    BcStatus::BcStatusOk
}

/// Inclusive momentum window `(lo, hi)` scanned by the sweep.
#[no_mangle]
pub extern "C" fn bc_count_result_window(
    result: *const BcCountResult,
    out_lo: *mut i64,
    out_hi: *mut i64,
) -> BcStatus {
    if result.is_null() || out_lo.is_null() || out_hi.is_null() {
        set_error("null handle or out pointer");
        return BcStatus::BcStatusNullPointer;
    }
    let (lo, hi) = unsafe { (*result).inner.m_window };
    unsafe {
        *out_lo = lo;
        *out_hi = hi;
    }
    BcStatus::BcStatusOk
}

/// Number of momenta the comparator could not resolve against the threshold.
#[no_mangle]
pub extern "C" fn bc_count_result_ambiguous(
    result: *const BcCountResult,
    out_ambiguous: *mut usize,
) -> BcStatus {
    if result.is_null() || out_ambiguous.is_null() {
        set_error("null handle or out pointer");
        return BcStatus::BcStatusNullPointer;
    }
    unsafe { *out_ambiguous = (*result).inner.ambiguous_m.len() };
    BcStatus::BcStatusOk
}

/// Ground band value at one momentum of the sweep, if it was scanned.
#[no_mangle]
pub extern "C" fn bc_count_result_band0_at(
    result: *const BcCountResult,
    m: i64,
    out_lambda0: *mut f64,
) -> BcStatus {
    if result.is_null() || out_lambda0.is_null() {
        set_error("null handle or out pointer");
        return BcStatus::BcStatusNullPointer;
    }
    match unsafe { (*result).inner.ground_values.get(&m) } {
        Some(&v) => {
            unsafe { *out_lambda0 = v };
            BcStatus::BcStatusOk
        }
        None => {
            set_error("momentum outside the scanned window");
            BcStatus::BcStatusInvalidParameter
        }
    }
}

/// Releases a handle returned by one of the `_count` calls. Null is a no-op.
#[no_mangle]
pub extern "C" fn bc_count_result_free(result: *mut BcCountResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}

/// Half-line ground value μ₀ and its splitting μ₀ − h from the Landau level.
#[no_mangle]
pub extern "C" fn bc_halfline_splitting(
    kind: BcHalflineKind,
    xi: f64,
    h: f64,
    out_mu0: *mut f64,
    out_splitting: *mut f64,
) -> BcStatus {
    if out_mu0.is_null() || out_splitting.is_null() {
        set_error("null out pointer");
        return BcStatus::BcStatusNullPointer;
    }
    let kind = match kind {
        BcHalflineKind::BcHalflineNeumann => halfline::HalflineKind::Neu,
        BcHalflineKind::BcHalflineDirichlet => halfline::HalflineKind::Dir,
    };
    match halfline::mu0(kind, xi, h) {
        Ok(r) => {
            unsafe {
                *out_mu0 = r.mu0;
                *out_splitting = r.splitting;
            }
            BcStatus::BcStatusOk
        }
        Err(e) => fail(e),
    }
}

/// Closed-form asymptotic count for the annulus with Dirichlet at `r_inner`.
#[no_mangle]
pub extern "C" fn bc_predict_annulus_count(r_inner: f64, h: f64, out_count: *mut f64) -> BcStatus {
    if out_count.is_null() {
        set_error("null out pointer");
        return BcStatus::BcStatusNullPointer;
    }
    if !(0.0 < r_inner && r_inner < 1.0) || !(h > 0.0) {
        set_error("require 0 < r_inner < 1 and h > 0");
        return BcStatus::BcStatusInvalidParameter;
    }
    unsafe { *out_count = predictions::annulus_count(r_inner, h) };
    BcStatus::BcStatusOk
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band0_roundtrip_matches_library() {
        let mut v = 0.0f64;
        let status = bc_strip_band0(1.0, -10, 0.05, BcVariant::BcVariantMixedDn, &mut v);
        assert_eq!(status, BcStatus::BcStatusOk);
        let direct = strip::band0(1.0, -10, 0.05, ProblemVariant::MixedDN).unwrap();
        assert_eq!(v, direct);
    }

    #[test]
    fn count_handle_lifecycle() {
        let mut handle: *mut BcCountResult = std::ptr::null_mut();
        let status = bc_strip_count(1.0, 0.05, BcVariant::BcVariantMixedDn, 1e-12, &mut handle);
        assert_eq!(status, BcStatus::BcStatusOk);
        assert!(!handle.is_null());
        let mut count = 0usize;
        assert_eq!(bc_count_result_count(handle, &mut count), BcStatus::BcStatusOk);
        assert!(count > 5);
        let (mut lo, mut hi) = (0i64, 0i64);
        assert_eq!(bc_count_result_window(handle, &mut lo, &mut hi), BcStatus::BcStatusOk);
        assert!(lo < hi);
        let mut lambda0 = 0.0f64;
        assert_eq!(bc_count_result_band0_at(handle, lo, &mut lambda0), BcStatus::BcStatusOk);
        assert!(lambda0 > 0.0);
        assert_eq!(
            bc_count_result_band0_at(handle, hi + 1000, &mut lambda0),
            BcStatus::BcStatusInvalidParameter
        );
        bc_count_result_free(handle);
        bc_count_result_free(std::ptr::null_mut());
    }

    #[test]
    fn errors_carry_status_and_message() {
        let mut v = 0.0f64;
        let status = bc_annulus_band0(1.5, 3, 0.05, BcVariant::BcVariantMixedDn, &mut v);
        assert_eq!(status, BcStatus::BcStatusInvalidParameter);
        let mut buf = [0i8; 256];
        let n = bc_last_error_message(buf.as_mut_ptr(), buf.len());
        assert!(n > 0);
        let message = unsafe { std::ffi::CStr::from_ptr(buf.as_ptr()) }
            .to_string_lossy()
            .into_owned();
        assert!(!message.is_empty());
    }

    #[test]
    fn null_pointers_rejected() {
        assert_eq!(
            bc_strip_band0(1.0, 0, 0.1, BcVariant::BcVariantPureNn, std::ptr::null_mut()),
            BcStatus::BcStatusNullPointer
        );
        let mut count = 0usize;
        assert_eq!(
            bc_count_result_count(std::ptr::null(), &mut count),
            BcStatus::BcStatusNullPointer
        );
    }

    #[test]
    fn prediction_matches_library() {
        let mut v = 0.0f64;
        assert_eq!(bc_predict_annulus_count(0.5, 0.01, &mut v), BcStatus::BcStatusOk);
        assert_eq!(v, predictions::annulus_count(0.5, 0.01));
        assert_eq!(
            bc_predict_annulus_count(1.5, 0.01, &mut v),
            BcStatus::BcStatusInvalidParameter
        );
    }
}
