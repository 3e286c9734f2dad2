//! C ABI over `gmt-chains`.
//!
//! Chains cross the boundary as opaque `GmtChain` handles created from and
//! rendered to the JSON chain document. Every fallible call returns a
//! `GmtStatus`; on failure the message and error kind of the most recent
//! failure on the calling thread are available from
//! `gmt_last_error_message` and `gmt_last_error_kind`. Panics never unwind
//! into C: they are reported as `GMT_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gmt_chains::chain::cut::slice;
use gmt_chains::chain::{AffineMap, GChain};
use gmt_chains::flatnorm::{flat_norm, FlatNormProblem};
use gmt_chains::io::{parse_chain, print_chain};
use gmt_chains::rational::{parse_q, Q};
use gmt_chains::Error;

/// Opaque chain handle. Release with `gmt_chain_free`.
pub struct GmtChain {
    inner: GChain,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GmtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Unreadable input: malformed JSON, rational or UTF-8.
    Parse = 2,
    /// A precondition of the operation failed; see `gmt_last_error_kind`.
    Precondition = 3,
    /// A panic was caught at the boundary.
    Internal = 4,
}

struct LastError {
    kind: CString,
    message: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn c_string(s: &str) -> CString {
    CString::new(s.replace('\0', " ")).expect("nul bytes replaced")
}

fn record(kind: &str, message: &str) {
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = Some(LastError {
            kind: c_string(kind),
            message: c_string(message),
        })
    });
}

fn fail(e: &Error) -> GmtStatus {
    record(e.kind(), &e.to_string());
    match e {
        Error::Parse(_) => GmtStatus::Parse,
        _ => GmtStatus::Precondition,
    }
}

/// Runs `f`, mapping errors and panics onto status codes.
fn guard(f: impl FnOnce() -> Result<(), GmtStatus>) -> GmtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GmtStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            record("Internal", "panic caught at the C boundary");
            GmtStatus::Internal
        }
    }
}

fn lift<T>(r: gmt_chains::Result<T>) -> Result<T, GmtStatus> {
    r.map_err(|e| fail(&e))
}

unsafe fn chain_ref<'a>(p: *const GmtChain) -> Result<&'a GChain, GmtStatus> {
    match p.as_ref() {
        Some(c) => Ok(&c.inner),
        None => {
            record("NullArgument", "chain handle is null");
            Err(GmtStatus::NullArgument)
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, GmtStatus> {
    if p.is_null() {
        record("NullArgument", "string argument is null");
        return Err(GmtStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        record("Parse", "string argument is not UTF-8");
        GmtStatus::Parse
    })
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), GmtStatus> {
    if out.is_null() {
        record("NullArgument", "output pointer is null");
        return Err(GmtStatus::NullArgument);
    }
    out.write(value);
    Ok(())
}

unsafe fn put_chain(out: *mut *mut GmtChain, c: GChain) -> Result<(), GmtStatus> {
    put(out, Box::into_raw(Box::new(GmtChain { inner: c })))
}

fn rationals(s: &str) -> gmt_chains::Result<Vec<Q>> {
    s.split(',').map(|x| parse_q(x.trim())).collect()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gmt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gmt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |l| l.message.as_ptr()))
}

/// Error kind of the last failure on this thread (e.g. "NonRegularValue"),
/// or null.
#[no_mangle]
pub extern "C" fn gmt_last_error_kind() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |l| l.kind.as_ptr()))
}

/// Parses a chain document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_from_json(json: *const c_char, out: *mut *mut GmtChain) -> GmtStatus {
    guard(|| {
        let c = lift(parse_chain(text(json)?))?;
        put_chain(out, c)
    })
}

/// Renders a chain document; release the string with `gmt_string_free`.
///
/// # Safety
/// `chain` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_to_json(chain: *const GmtChain, out: *mut *mut c_char) -> GmtStatus {
    guard(|| {
        let s = lift(print_chain(chain_ref(chain)?))?;
        put(out, c_string(&s).into_raw())
    })
}

/// # Safety
/// `s` must come from `gmt_chain_to_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gmt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `chain` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_free(chain: *mut GmtChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Dimension of the chain, or `SIZE_MAX` for a null handle.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_dim(chain: *const GmtChain) -> usize {
    chain.as_ref().map_or(usize::MAX, |c| c.inner.dim())
}

/// Number of cells with a nonzero coefficient, or `SIZE_MAX` for a null handle.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_term_count(chain: *const GmtChain) -> usize {
    chain.as_ref().map_or(usize::MAX, |c| c.inner.len())
}

/// # Safety
/// `chain` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_boundary(chain: *const GmtChain, out: *mut *mut GmtChain) -> GmtStatus {
    guard(|| {
        let b = lift(chain_ref(chain)?.boundary())?;
        put_chain(out, b)
    })
}

/// Sum of two chains on the same complex over the same group.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_add(a: *const GmtChain, b: *const GmtChain, out: *mut *mut GmtChain) -> GmtStatus {
    guard(|| {
        let s = lift(chain_ref(a)?.add(chain_ref(b)?))?;
        put_chain(out, s)
    })
}

/// Slice along `{f = level}` for `f(x) = gradient · x + constant`.
/// `gradient` is comma-separated; all numbers are rationals like "1/2".
/// A null `constant` means zero.
///
/// # Safety
/// String arguments must be NUL-terminated, `chain` live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_slice(
    chain: *const GmtChain,
    gradient: *const c_char,
    constant: *const c_char,
    level: *const c_char,
    out: *mut *mut GmtChain,
) -> GmtStatus {
    guard(|| {
        let s = chain_ref(chain)?;
        let constant = if constant.is_null() { "0" } else { text(constant)? };
        let f = lift(rationals(text(gradient)?).and_then(|g| AffineMap::functional(g, parse_q(constant.trim())?)))?;
        let y = lift(parse_q(text(level)?.trim()))?;
        let sl = lift(slice(s, &f, &y))?;
        put_chain(out, sl)
    })
}

/// Reduction of an integer chain mod `d`.
///
/// # Safety
/// `chain` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_reduce_mod(chain: *const GmtChain, d: u64, out: *mut *mut GmtChain) -> GmtStatus {
    guard(|| {
        let r = lift(chain_ref(chain)?.mod_d_reduce(d))?;
        put_chain(out, r)
    })
}

/// # Safety
/// `chain` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_mass(chain: *const GmtChain, out: *mut f64) -> GmtStatus {
    guard(|| {
        let m = chain_ref(chain)?.mass().mass;
        put(out, m)
    })
}

/// Flat norm over the chain's own complex.
///
/// # Safety
/// `chain` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gmt_chain_flat_norm(chain: *const GmtChain, out: *mut f64) -> GmtStatus {
    guard(|| {
        let d = lift(flat_norm(&FlatNormProblem::new(chain_ref(chain)?.clone())))?;
        put(out, d.value)
    })
}
