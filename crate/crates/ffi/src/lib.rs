//! C ABI over `convex_chains`.
//!
//! Conventions:
//! - every fallible call returns a [`CcStatus`] and writes results through
//!   out-pointers, which are left untouched on failure;
//! - the message of the last failure on the calling thread is available
//!   from [`cc_last_error`];
//! - big integers cross the boundary as NUL-terminated decimal strings that
//!   the caller releases with [`cc_string_free`];
//! - tables and zero lists are opaque handles with their own `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use convex_chains::enumerate::{self, CountTable};
use convex_chains::zetalib::{self, ZetaZero};
use convex_chains::{asympt, partition, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside the supported range.
    Domain = 2,
    /// Table or search larger than the configured budget.
    Budget = 3,
    Pole = 4,
    NotEnoughZeros = 5,
    /// A numerical method did not reach its tolerance.
    Convergence = 6,
    /// Index past the end of a handle.
    OutOfRange = 7,
    Io = 8,
    /// Anything else, including a caught panic.
    Internal = 9,
}

/// Exact chain counts `p(a, b)` for every cell of a box.
pub struct CcCountTable(CountTable);

/// Zeta zeros on the critical line with `ζ'(ρ)`.
pub struct CcZeros(Vec<ZetaZero>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CcStatus {
    match e {
        Error::Domain { .. } | Error::InvalidChain { .. } => CcStatus::Domain,
        Error::Budget { .. } | Error::Exhausted { .. } => CcStatus::Budget,
        Error::Pole { .. } => CcStatus::Pole,
        Error::NotEnoughZeros { .. } => CcStatus::NotEnoughZeros,
        Error::Convergence { .. } | Error::MultipleZero { .. } => CcStatus::Convergence,
        Error::Io(_) | Error::Cache { .. } => CcStatus::Io,
    }
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (CcStatus, String)>>(f: F) -> CcStatus {
    // Out-pointers are written only after all fallible work, so a panic
    // leaves no caller-visible state half-updated.
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CcStatus::Internal
        }
    }
}

trait IntoFailure<T> {
    fn ffi(self) -> Result<T, (CcStatus, String)>;
}

impl<T> IntoFailure<T> for convex_chains::Result<T> {
    fn ffi(self) -> Result<T, (CcStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null() -> (CcStatus, String) {
    (CcStatus::NullPointer, "null pointer argument".into())
}

fn decimal(x: &impl ToString) -> *mut c_char {
    CString::new(x.to_string()).expect("digits have no NUL").into_raw()
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Computes `p(a, b)` for `0 <= a <= n1`, `0 <= b <= n2`.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_count_table_new(n1: u32, n2: u32, out: *mut *mut CcCountTable) -> CcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let table = enumerate::count_table(n1, n2).ffi()?;
        *out = Box::into_raw(Box::new(CcCountTable(table)));
        Ok(())
    })
}

/// Writes `p(a, b)` as a decimal string to `*out`.
///
/// # Safety
/// `table` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cc_count_table_get(
    table: *const CcCountTable,
    a: u32,
    b: u32,
    out: *mut *mut c_char,
) -> CcStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            return Err(null());
        }
        let t = &(*table).0;
        if a > t.n1() || b > t.n2() {
            return Err((CcStatus::OutOfRange, format!("({a}, {b}) outside ({}, {})", t.n1(), t.n2())));
        }
        *out = decimal(t.get(a, b));
        Ok(())
    })
}

/// # Safety
/// `table` must be NULL or a handle from [`cc_count_table_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_count_table_free(table: *mut CcCountTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of polyomino paths of total length `n`, as a decimal string.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_polyomino_count(n: u32, out: *mut *mut c_char) -> CcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let counts = enumerate::polyomino_counts(n.max(1)).ffi()?;
        *out = decimal(counts.get(n));
        Ok(())
    })
}

/// `log Z(β, β)` truncated with a certified tail bound below `tol`.
///
/// # Safety
/// `value` must be valid for writing; `tail_bound` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn cc_log_z(beta: f64, tol: f64, value: *mut f64, tail_bound: *mut f64) -> CcStatus {
    guard(|| {
        if value.is_null() {
            return Err(null());
        }
        let t = partition::log_z(beta, tol).ffi()?;
        *value = t.value;
        if !tail_bound.is_null() {
            *tail_bound = t.tail_bound;
        }
        Ok(())
    })
}

/// `β` solving `E_β[X₁ + X₂] = 2n`.
///
/// # Safety
/// `beta` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cc_calibrate(n: u64, beta: *mut f64) -> CcStatus {
    guard(|| {
        if beta.is_null() {
            return Err(null());
        }
        *beta = partition::calibrate(n).ffi()?.beta;
        Ok(())
    })
}

/// Remainder integral along `Re s = -1/2`.
///
/// # Safety
/// `value` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cc_i_err(beta: f64, value: *mut f64) -> CcStatus {
    guard(|| {
        if value.is_null() {
            return Err(null());
        }
        *value = partition::i_err(beta).ffi()?.value;
        Ok(())
    })
}

/// Zero-sum oscillatory term over the first `pairs` zero pairs.
///
/// # Safety
/// `value` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cc_i_crit(beta: f64, pairs: usize, value: *mut f64) -> CcStatus {
    guard(|| {
        if value.is_null() {
            return Err(null());
        }
        *value = asympt::i_crit_zero_sum(beta, pairs).ffi()?.value;
        Ok(())
    })
}

/// Decimal log of the asymptotic estimate of `p(n)`.
///
/// # Safety
/// `log10_value` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn cc_estimate_p(n: u64, pairs: usize, log10_value: *mut f64) -> CcStatus {
    guard(|| {
        if log10_value.is_null() {
            return Err(null());
        }
        *log10_value = asympt::estimate_p(n, pairs).ffi()?.log10_value;
        Ok(())
    })
}

/// Zeros `1/2 + iγ` with `0 < γ <= height <= 60`.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_zeros_new(height: f64, out: *mut *mut CcZeros) -> CcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let zeros = zetalib::find_zeta_zeros(height).ffi()?;
        *out = Box::into_raw(Box::new(CcZeros(zeros)));
        Ok(())
    })
}

/// Number of zeros in the handle; 0 for NULL.
///
/// # Safety
/// `zeros` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_zeros_len(zeros: *const CcZeros) -> usize {
    if zeros.is_null() {
        0
    } else {
        let list = &(*zeros).0;
        list.len()
    }
}

/// The `index`-th zero: `γ` and `ζ'(ρ)`. Any out-pointer may be NULL.
///
/// # Safety
/// `zeros` must be a live handle; non-NULL out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_zeros_get(
    zeros: *const CcZeros,
    index: usize,
    gamma: *mut f64,
    zeta_prime_re: *mut f64,
    zeta_prime_im: *mut f64,
) -> CcStatus {
    if zeros.is_null() {
        set_error("null pointer argument".into());
        return CcStatus::NullPointer;
    }
    let list = &(*zeros).0;
    let Some(z) = list.get(index) else {
        set_error(format!("index {index} past {} zeros", list.len()));
        return CcStatus::OutOfRange;
    };
    for (p, v) in [(gamma, z.gamma), (zeta_prime_re, z.zeta_prime.re), (zeta_prime_im, z.zeta_prime.im)] {
        if !p.is_null() {
            *p = v;
        }
    }
    CcStatus::Ok
}

/// # Safety
/// `zeros` must be NULL or a handle from [`cc_zeros_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_zeros_free(zeros: *mut CcZeros) {
    if !zeros.is_null() {
        drop(Box::from_raw(zeros));
    }
}

/// Copies the last error into a Rust string; for tests and Rust callers.
pub fn last_error_message() -> Option<String> {
    let p = cc_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}
