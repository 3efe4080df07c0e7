//! C interface: opaque ring and element handles, integer status codes,
//! and a thread-local last-error message.
//!
//! Every function returns a [`SpvStatus`]. On failure the message is
//! available from [`spv_last_error`] until the next call on the same
//! thread. Handles and strings returned through out-pointers are owned by
//! the caller and released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use superpv::cli::{emit_report, exit_code, run, Problem};
use superpv::supercore::{Parity, SuperElem, SuperRingSpec};
use superpv::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidSpec = 4,
    RingMismatch = 5,
    NotInvertible = 6,
    ValidationError = 7,
    Panic = 8,
    Other = 9,
}

/// A supercommutative ring.
pub struct SpvRing {
    inner: Arc<SuperRingSpec>,
}

/// An element of an [`SpvRing`]; keeps its ring alive.
pub struct SpvElem {
    inner: SuperElem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SpvStatus {
    match e {
        Error::Parse { .. } | Error::UnknownName(_) => SpvStatus::ParseError,
        Error::InvalidSpec(_) | Error::SpecMismatch(_) | Error::FormatMismatch(_) => SpvStatus::InvalidSpec,
        Error::RingMismatch => SpvStatus::RingMismatch,
        Error::BodyNotInvertible | Error::NotInvertible | Error::SingularBody | Error::NotEven => {
            SpvStatus::NotInvertible
        }
        Error::Validation(_) | Error::InconsistentModule(_) | Error::ParityOrder(_) => SpvStatus::ValidationError,
        _ => SpvStatus::Other,
    }
}

struct Failure(SpvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SpvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpvStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic");
            SpvStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(SpvStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(SpvStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(SpvStatus::NullPointer, "null handle".into()))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(SpvStatus::NullPointer, "null out-pointer".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(SpvStatus::NullPointer, "null out-pointer".into()));
    }
    let c = CString::new(s).map_err(|_| Failure(SpvStatus::Other, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn names(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn spv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a ring from comma-separated name lists. `poly` entries are
/// `name:even` or `name:odd`. Any list may be empty or NULL.
///
/// # Safety
/// String arguments must be NULL or valid NUL-terminated strings; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn spv_ring_new(
    body: *const c_char,
    odd: *const c_char,
    poly: *const c_char,
    out: *mut *mut SpvRing,
) -> SpvStatus {
    guard(|| {
        let opt = |p: *const c_char| if p.is_null() { Ok("") } else { read_str(p) };
        let mut b = SuperRingSpec::builder();
        for n in names(opt(body)?) {
            b = b.body(n);
        }
        for n in names(opt(odd)?) {
            b = b.odd(n);
        }
        for entry in names(opt(poly)?) {
            let (n, p) = entry.split_once(':').unwrap_or((entry, "even"));
            let parity = match p.trim() {
                "even" => Parity::Even,
                "odd" => Parity::Odd,
                other => return Err(Failure(SpvStatus::InvalidSpec, format!("unknown parity `{other}`"))),
            };
            b = b.poly(n.trim(), parity);
        }
        write_out(out, SpvRing { inner: b.build()? })
    })
}

/// # Safety
/// `ring` must be NULL or a handle from [`spv_ring_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spv_ring_free(ring: *mut SpvRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Parses an element such as `"t^2*th1 + 1/(t+1)"`.
///
/// # Safety
/// `ring` must be a live handle, `src` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn spv_elem_parse(ring: *const SpvRing, src: *const c_char, out: *mut *mut SpvElem) -> SpvStatus {
    guard(|| {
        let r = deref(ring)?;
        let e = SuperElem::parse(&r.inner, read_str(src)?)?;
        write_out(out, SpvElem { inner: e })
    })
}

/// # Safety
/// `elem` must be NULL or a live element handle.
#[no_mangle]
pub unsafe extern "C" fn spv_elem_free(elem: *mut SpvElem) {
    if !elem.is_null() {
        drop(Box::from_raw(elem));
    }
}

/// # Safety
/// `a`, `b` must be live handles over the same ring; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spv_elem_add(a: *const SpvElem, b: *const SpvElem, out: *mut *mut SpvElem) -> SpvStatus {
    guard(|| {
        let s = deref(a)?.inner.try_add(&deref(b)?.inner)?;
        write_out(out, SpvElem { inner: s })
    })
}

/// Supercommutative product `a·b`.
///
/// # Safety
/// `a`, `b` must be live handles over the same ring; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spv_elem_mul(a: *const SpvElem, b: *const SpvElem, out: *mut *mut SpvElem) -> SpvStatus {
    guard(|| {
        let p = deref(a)?.inner.try_mul(&deref(b)?.inner)?;
        write_out(out, SpvElem { inner: p })
    })
}

/// Inverse of an even element with invertible body.
///
/// # Safety
/// `a` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spv_elem_invert(a: *const SpvElem, out: *mut *mut SpvElem) -> SpvStatus {
    guard(|| {
        let inv = deref(a)?.inner.invert()?;
        write_out(out, SpvElem { inner: inv })
    })
}

/// The element with every odd generator set to zero.
///
/// # Safety
/// `a` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spv_elem_body(a: *const SpvElem, out: *mut *mut SpvElem) -> SpvStatus {
    guard(|| {
        let b = deref(a)?.inner.body();
        write_out(out, SpvElem { inner: b })
    })
}

/// Writes 1 to `out` when `a` and `b` are equal, else 0.
///
/// # Safety
/// `a`, `b` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spv_elem_equal(a: *const SpvElem, b: *const SpvElem, out: *mut c_int) -> SpvStatus {
    guard(|| {
        let eq = deref(a)?.inner == deref(b)?.inner;
        if out.is_null() {
            return Err(Failure(SpvStatus::NullPointer, "null out-pointer".into()));
        }
        *out = eq as c_int;
        Ok(())
    })
}

/// Canonical text of an element; free with [`spv_string_free`].
///
/// # Safety
/// `a` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spv_elem_to_string(a: *const SpvElem, out: *mut *mut c_char) -> SpvStatus {
    guard(|| write_string(out, deref(a)?.inner.to_string()))
}

/// Runs a TOML problem and returns its JSONL report. `exit` receives 0 if
/// every task passed, 1 if some verdict failed and 2 if some task's
/// inputs were invalid. An invalid problem file is reported through the
/// status code instead.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` and `exit` writable.
#[no_mangle]
pub unsafe extern "C" fn spv_run_config(
    toml: *const c_char,
    parallel: bool,
    out: *mut *mut c_char,
    exit: *mut c_int,
) -> SpvStatus {
    guard(|| {
        let problem = Problem::from_toml(read_str(toml)?)?;
        if exit.is_null() {
            return Err(Failure(SpvStatus::NullPointer, "null out-pointer".into()));
        }
        let records = run(&problem, parallel);
        let mut buf = Vec::new();
        emit_report(&records, &mut buf).map_err(|e| Failure(SpvStatus::Other, e.to_string()))?;
        write_string(out, String::from_utf8(buf).map_err(|_| Failure(SpvStatus::Other, "report is not UTF-8".into()))?)?;
        *exit = exit_code(&records);
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
