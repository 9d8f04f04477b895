//! C interface to `bhht-core`.
//!
//! Instances live behind an opaque `BhhtInstance` handle created from an
//! instance document (the same JSON the CLI reads). Every call returns a
//! `BhhtStatus`; on failure `bhht_last_error` yields the message for the
//! calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bhht_core::cli::document::InstanceDocument;
use bhht_core::engine::{reduced_orbifold_euler, verify_duality, Instance};
use bhht_core::error::Error;

/// Opaque instance handle.
pub struct BhhtInstance {
    inner: Instance,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BhhtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Parse failure or an instance that does not validate.
    InvalidInput = 3,
    OutOfScope = 4,
    Internal = 5,
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BhhtStatus {
    match e {
        Error::OutOfScope(_) | Error::Flip { .. } => BhhtStatus::OutOfScope,
        Error::Internal(_) | Error::ContractViolation(_) => BhhtStatus::Internal,
        _ => BhhtStatus::InvalidInput,
    }
}

fn guard<F: FnOnce() -> Result<(), (BhhtStatus, String)>>(f: F) -> BhhtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BhhtStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside bhht".into());
            BhhtStatus::Panic
        }
    }
}

fn core(e: Error) -> (BhhtStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn instance_ref<'a>(
    handle: *const BhhtInstance,
) -> Result<&'a Instance, (BhhtStatus, String)> {
    handle
        .as_ref()
        .map(|h| &h.inner)
        .ok_or((BhhtStatus::NullPointer, "instance handle is NULL".into()))
}

fn require<T>(out: *mut T) -> Result<(), (BhhtStatus, String)> {
    if out.is_null() {
        Err((BhhtStatus::NullPointer, "output pointer is NULL".into()))
    } else {
        Ok(())
    }
}

fn boxed(inner: Instance) -> *mut BhhtInstance {
    Box::into_raw(Box::new(BhhtInstance { inner }))
}

/// Parses an instance document and validates it.
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bhht_instance_from_json(
    json: *const c_char,
    out: *mut *mut BhhtInstance,
) -> BhhtStatus {
    guard(|| {
        require(out)?;
        if json.is_null() {
            return Err((BhhtStatus::NullPointer, "json is NULL".into()));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (BhhtStatus::InvalidUtf8, e.to_string()))?;
        let inst = InstanceDocument::parse(text)
            .and_then(|d| d.to_instance())
            .map_err(core)?;
        *out = boxed(inst);
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
/// `handle` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bhht_instance_free(handle: *mut BhhtInstance) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Serializes the instance back to a document; free the result with
/// `bhht_string_free`.
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bhht_instance_to_json(
    handle: *const BhhtInstance,
    out: *mut *mut c_char,
) -> BhhtStatus {
    guard(|| {
        require(out)?;
        let inst = instance_ref(handle)?;
        let json = InstanceDocument::from_instance(inst).to_json();
        *out = CString::new(json)
            .map_err(|e| (BhhtStatus::Internal, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// Reduced orbifold Euler characteristic.
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bhht_reduced_euler(
    handle: *const BhhtInstance,
    out: *mut i64,
) -> BhhtStatus {
    guard(|| {
        require(out)?;
        let report = reduced_orbifold_euler(instance_ref(handle)?).map_err(core)?;
        *out = report.reduced;
        Ok(())
    })
}

/// Both sides of the duality and whether they agree.
/// `handle` must be a live handle; the three outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn bhht_verify_duality(
    handle: *const BhhtInstance,
    lhs: *mut i64,
    rhs: *mut i64,
    equal: *mut bool,
) -> BhhtStatus {
    guard(|| {
        require(lhs)?;
        require(rhs)?;
        require(equal)?;
        let report = verify_duality(instance_ref(handle)?).map_err(core)?;
        let verdict = report
            .duality_verdict
            .ok_or((BhhtStatus::Internal, "no verdict computed".into()))?;
        *lhs = verdict.lhs;
        *rhs = verdict.rhs;
        *equal = verdict.equal;
        Ok(())
    })
}

/// The dual instance as a new handle.
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bhht_dual(
    handle: *const BhhtInstance,
    out: *mut *mut BhhtInstance,
) -> BhhtStatus {
    guard(|| {
        require(out)?;
        let dual = instance_ref(handle)?.bhht_dual().map_err(core)?;
        *out = boxed(dual);
        Ok(())
    })
}

/// Order of the diagonal group `G`.
/// `handle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bhht_group_order(
    handle: *const BhhtInstance,
    out: *mut u64,
) -> BhhtStatus {
    guard(|| {
        require(out)?;
        *out = instance_ref(handle)?.group().order() as u64;
        Ok(())
    })
}

/// Message for the last failed call on this thread, or NULL. The caller
/// owns the string.
#[no_mangle]
pub extern "C" fn bhht_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// Releases a string returned by this library. NULL is ignored.
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bhht_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
