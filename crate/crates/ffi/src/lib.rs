//! C ABI for the adsearch library.
//!
//! Handles are opaque pointers allocated by `ads_*_new` constructors and
//! released with the matching `ads_*_free`. Every fallible call returns an
//! [`AdsStatus`]; on failure a thread-local message is retrievable through
//! [`ads_last_error`]. All pointers must be non-null unless stated otherwise.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use adsearch::dynamics::{evolve_reduced, final_fidelity};
use adsearch::model::PathSpec;
use adsearch::scheduler::{synthesize, ProblemSpec, Schedule};

/// Result code for every fallible call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdsStatus {
    /// Success.
    AdsOk = 0,
    /// A required pointer argument was null.
    AdsNullPointer = 1,
    /// Arguments were rejected before any computation started.
    AdsInvalidArgument = 2,
    /// The computation ran but failed to converge or left its domain.
    AdsNumericalFailure = 3,
    /// A panic was caught at the boundary; the handle state is unspecified.
    AdsInternalPanic = 4,
}

/// Spectral data of the two-level block at a fixed schedule parameter.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AdsSpectrum {
    pub e_minus: f64,
    pub e_plus: f64,
    /// Gap between the two coupled levels.
    pub omega: f64,
    /// Energy of the (N-2)-fold degenerate block.
    pub degenerate_level: f64,
    /// Off-diagonal matrix element of dH/ds between the coupled levels.
    pub coupling: f64,
}

/// Opaque interpolation-path handle.
pub struct AdsPath {
    inner: PathSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error message").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &adsearch::Error) -> AdsStatus {
    use adsearch::Error::*;
    match err {
        Domain(_) | DimensionMismatch { .. } | OutOfRange { .. } | CapExceeded { .. } => {
            AdsStatus::AdsInvalidArgument
        }
        _ => AdsStatus::AdsNumericalFailure,
    }
}

fn guard<F: FnOnce() -> AdsStatus>(f: F) -> AdsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            AdsStatus::AdsInternalPanic
        }
    }
}

/// Message describing the most recent failure on this thread, or null if the
/// last call succeeded. The pointer stays valid until the next failing call
/// on the same thread.
#[no_mangle]
pub extern "C" fn ads_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.as_ptr(),
        None => std::ptr::null(),
    })
}

/// Create the linear path f = 1-s, g = s over an N-item search space.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn ads_path_linear(n: usize, out: *mut *mut AdsPath) -> AdsStatus {
    path_ctor(out, || PathSpec::linear(n))
}

/// Create the one-parameter quadratic path f = 1-s+As(1-s), g = s+As(1-s).
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn ads_path_quadratic(n: usize, a: f64, out: *mut *mut AdsPath) -> AdsStatus {
    path_ctor(out, || PathSpec::quadratic(n, a))
}

unsafe fn path_ctor(
    out: *mut *mut AdsPath,
    make: impl FnOnce() -> adsearch::Result<PathSpec>,
) -> AdsStatus {
    if out.is_null() {
        set_error("out pointer is null".to_string());
        return AdsStatus::AdsNullPointer;
    }
    guard(|| match make() {
        Ok(inner) => {
            clear_error();
            unsafe { *out = Box::into_raw(Box::new(AdsPath { inner })) };
            AdsStatus::AdsOk
        }
        Err(e) => {
            set_error(e.to_string());
            AdsStatus::AdsInvalidArgument
        }
    })
}

/// Release a path handle. Null is a no-op.
///
/// # Safety
/// `path` must have been returned by a path constructor and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn ads_path_free(path: *mut AdsPath) {
    if !path.is_null() {
        drop(unsafe { Box::from_raw(path) });
    }
}

/// Evaluate the interpolation functions and their derivatives at s ∈ [0, 1].
/// Any of the four output pointers may be null to skip that value.
///
/// # Safety
/// `path` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ads_path_eval(
    path: *const AdsPath,
    s: f64,
    f: *mut f64,
    g: *mut f64,
    df: *mut f64,
    dg: *mut f64,
) -> AdsStatus {
    let Some(path) = (unsafe { path.as_ref() }) else {
        set_error("path handle is null".to_string());
        return AdsStatus::AdsNullPointer;
    };
    guard(|| match path.inner.eval_path(s) {
        Ok((fv, gv, dfv, dgv)) => {
            clear_error();
            unsafe {
                if !f.is_null() {
                    *f = fv;
                }
                if !g.is_null() {
                    *g = gv;
                }
                if !df.is_null() {
                    *df = dfv;
                }
                if !dg.is_null() {
                    *dg = dgv;
                }
            }
            AdsStatus::AdsOk
        }
        Err(e) => {
            let status = status_of(&e);
            set_error(e.to_string());
            status
        }
    })
}

/// Spectral decomposition of the two-level block at s ∈ [0, 1].
///
/// # Safety
/// `path` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ads_path_spectrum(
    path: *const AdsPath,
    s: f64,
    out: *mut AdsSpectrum,
) -> AdsStatus {
    let Some(path) = (unsafe { path.as_ref() }) else {
        set_error("path handle is null".to_string());
        return AdsStatus::AdsNullPointer;
    };
    if out.is_null() {
        set_error("out pointer is null".to_string());
        return AdsStatus::AdsNullPointer;
    }
    guard(|| match path.inner.spectrum_at(s) {
        Ok(pt) => {
            clear_error();
            unsafe {
                *out = AdsSpectrum {
                    e_minus: pt.e_minus,
                    e_plus: pt.e_plus,
                    omega: pt.omega,
                    degenerate_level: pt.degenerate_level,
                    coupling: pt.m,
                };
            }
            AdsStatus::AdsOk
        }
        Err(e) => {
            let status = status_of(&e);
            set_error(e.to_string());
            status
        }
    })
}

/// Minimum run time of the locally adiabatic schedule at adiabaticity
/// parameter `epsilon` ∈ (0, 1).
///
/// # Safety
/// `path` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ads_t_min(
    path: *const AdsPath,
    epsilon: f64,
    out: *mut f64,
) -> AdsStatus {
    let Some(path) = (unsafe { path.as_ref() }) else {
        set_error("path handle is null".to_string());
        return AdsStatus::AdsNullPointer;
    };
    if out.is_null() {
        set_error("out pointer is null".to_string());
        return AdsStatus::AdsNullPointer;
    }
    guard(|| {
        let result =
            ProblemSpec::new(path.inner.clone(), epsilon).and_then(|spec| spec.t_min());
        match result {
            Ok(t) => {
                clear_error();
                unsafe { *out = t };
                AdsStatus::AdsOk
            }
            Err(e) => {
                let status = status_of(&e);
                set_error(e.to_string());
                status
            }
        }
    })
}

/// Run the two-level dynamics under the locally adiabatic schedule and write
/// the final ground-state fidelity |⟨E₋(1)|ψ(T)⟩|².
///
/// # Safety
/// `path` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ads_evolve_fidelity(
    path: *const AdsPath,
    epsilon: f64,
    out: *mut f64,
) -> AdsStatus {
    let Some(path) = (unsafe { path.as_ref() }) else {
        set_error("path handle is null".to_string());
        return AdsStatus::AdsNullPointer;
    };
    if out.is_null() {
        set_error("out pointer is null".to_string());
        return AdsStatus::AdsNullPointer;
    }
    guard(|| {
        let result = ProblemSpec::new(path.inner.clone(), epsilon)
            .and_then(|spec| {
                let schedule = Schedule::Synthesized(synthesize(&spec, 64)?);
                evolve_reduced(&spec, &schedule, 2)
            })
            .and_then(|trace| final_fidelity(&trace));
        match result {
            Ok(fidelity) => {
                clear_error();
                unsafe { *out = fidelity };
                AdsStatus::AdsOk
            }
            Err(e) => {
                let status = status_of(&e);
                set_error(e.to_string());
                status
            }
        }
    })
}
