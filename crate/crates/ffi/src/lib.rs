//! C interface to the wicks library. Every function returns a
//! [`WicksStatus`]; on failure [`wicks_last_error`] describes the cause.
//! Strings returned through out-pointers are owned by the caller and must
//! be released with [`wicks_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wicks::genus::{brute_force_genus, GenusCaps};
use wicks::group::{GroupOracle, Presentation};
use wicks::quadratic::is_wicks_form;
use wicks::{Error, Word};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WicksStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Input = 4,
    Limit = 5,
    Failed = 6,
    Panic = 7,
}

/// Word problem oracle for a presented group.
pub struct WicksOracle {
    inner: GroupOracle,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(WicksStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => WicksStatus::Parse,
            Error::Limit { .. } => WicksStatus::Limit,
            Error::Input(_) | Error::Precondition(_) | Error::Domain(_) | Error::Presentation(_) => WicksStatus::Input,
            _ => WicksStatus::Failed,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> WicksStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WicksStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            WicksStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(WicksStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(WicksStatus::InvalidUtf8, e.to_string()))
}

unsafe fn word(p: *const c_char) -> Result<Word, Failure> {
    Ok(text(p)?.parse::<Word>()?)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure(WicksStatus::NullPointer, "null output pointer".into()))
}

unsafe fn oracle<'a>(p: *const WicksOracle) -> Result<&'a GroupOracle, Failure> {
    p.as_ref().map(|o| &o.inner).ok_or_else(|| Failure(WicksStatus::NullPointer, "null oracle".into()))
}

fn owned(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|e| Failure(WicksStatus::Failed, e.to_string()))
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn wicks_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wicks_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Oracle of the free group on the first `rank` letters.
///
/// # Safety
/// `out_oracle` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wicks_oracle_free_group(rank: usize, out_oracle: *mut *mut WicksOracle) -> WicksStatus {
    guard(|| {
        let slot = out(out_oracle)?;
        if rank == 0 || rank > 26 {
            return Err(Failure(WicksStatus::Input, format!("rank {rank} is not in 1..=26")));
        }
        *slot = Box::into_raw(Box::new(WicksOracle { inner: GroupOracle::free(rank) }));
        Ok(())
    })
}

/// Oracle of a presentation given as JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_oracle` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wicks_oracle_from_json(json: *const c_char, out_oracle: *mut *mut WicksOracle) -> WicksStatus {
    guard(|| {
        let slot = out(out_oracle)?;
        let inner = GroupOracle::new(Presentation::from_json(text(json)?)?)?;
        *slot = Box::into_raw(Box::new(WicksOracle { inner }));
        Ok(())
    })
}

/// # Safety
/// `o` must be null or an oracle created by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wicks_oracle_free(o: *mut WicksOracle) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Whether `word_text` is a Wicks form.
///
/// # Safety
/// `word_text` must be a NUL-terminated string and `out_result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wicks_is_wicks_form(word_text: *const c_char, out_result: *mut bool) -> WicksStatus {
    guard(|| {
        let slot = out(out_result)?;
        *slot = is_wicks_form(&word(word_text)?);
        Ok(())
    })
}

/// Genus of a tuple of words with default caps; `-1` when unknown within
/// the caps.
///
/// # Safety
/// `words` must point to `count` NUL-terminated strings and `out_genus` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wicks_genus(
    o: *const WicksOracle,
    words: *const *const c_char,
    count: usize,
    out_genus: *mut i64,
) -> WicksStatus {
    guard(|| {
        let o = oracle(o)?;
        let slot = out(out_genus)?;
        if words.is_null() {
            return Err(Failure(WicksStatus::NullPointer, "null word array".into()));
        }
        let tuple: Vec<Word> =
            std::slice::from_raw_parts(words, count).iter().map(|&p| word(p)).collect::<Result<_, _>>()?;
        let outcome = brute_force_genus(o, &tuple, GenusCaps::default())?;
        *slot = outcome.k.map_or(-1, |k| k as i64);
        Ok(())
    })
}

/// A conjugator `w` with `h1 = w h2 w^-1` within the bound for `m`, or a
/// null string when none exists.
///
/// # Safety
/// `h1` and `h2` must be NUL-terminated strings and `out_conjugator` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn wicks_conjugate(
    o: *const WicksOracle,
    h1: *const c_char,
    h2: *const c_char,
    m: u64,
    out_conjugator: *mut *mut c_char,
) -> WicksStatus {
    guard(|| {
        let o = oracle(o)?;
        let slot = out(out_conjugator)?;
        *slot = match o.conjugacy_search(&word(h1)?, &word(h2)?, m)? {
            Some(c) => owned(c.to_string())?,
            None => ptr::null_mut(),
        };
        Ok(())
    })
}

/// Runs the command-line driver on `argv` (without the program name).
/// The certificate or diagnostics are written to `out_text` and the exit
/// code to `out_code`.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; the out-pointers must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn wicks_run(
    argv: *const *const c_char,
    argc: usize,
    out_code: *mut i32,
    out_text: *mut *mut c_char,
) -> WicksStatus {
    guard(|| {
        let code = out(out_code)?;
        let textp = out(out_text)?;
        if argv.is_null() && argc > 0 {
            return Err(Failure(WicksStatus::NullPointer, "null argument array".into()));
        }
        let args: Vec<String> = if argc == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(argv, argc)
                .iter()
                .map(|&p| text(p).map(str::to_string))
                .collect::<Result<_, _>>()?
        };
        let outcome = wicks::cli::run(std::iter::once("wicks".to_string()).chain(args));
        *code = outcome.code;
        *textp = owned(if outcome.stdout.is_empty() { outcome.stderr } else { outcome.stdout })?;
        Ok(())
    })
}
