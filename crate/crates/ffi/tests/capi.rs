use std::ffi::{c_char, CStr, CString};
use std::ptr;

use wicks_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> Option<String> {
    if p.is_null() {
        return None;
    }
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    wicks_string_free(p);
    Some(s)
}

unsafe fn last_error() -> String {
    CStr::from_ptr(wicks_last_error()).to_str().unwrap().to_string()
}

#[test]
fn wicks_form_recognition() {
    let mut yes = false;
    unsafe {
        assert_eq!(wicks_is_wicks_form(c("abcABC").as_ptr(), &mut yes), WicksStatus::Ok);
        assert!(yes);
        assert_eq!(wicks_is_wicks_form(c("aabb").as_ptr(), &mut yes), WicksStatus::Ok);
        assert!(!yes);
        assert_eq!(wicks_is_wicks_form(c("ab1").as_ptr(), &mut yes), WicksStatus::Parse);
        assert!(last_error().contains("ab1"));
        assert_eq!(wicks_is_wicks_form(ptr::null(), &mut yes), WicksStatus::NullPointer);
        assert_eq!(wicks_is_wicks_form(c("ab").as_ptr(), ptr::null_mut()), WicksStatus::NullPointer);
    }
}

#[test]
fn genus_and_conjugacy_through_handles() {
    unsafe {
        let mut o = ptr::null_mut();
        assert_eq!(wicks_oracle_free_group(2, &mut o), WicksStatus::Ok);
        let words = [c("abAB")];
        let ptrs: Vec<*const c_char> = words.iter().map(|w| w.as_ptr()).collect();
        let mut k = 0i64;
        assert_eq!(wicks_genus(o, ptrs.as_ptr(), ptrs.len(), &mut k), WicksStatus::Ok);
        assert_eq!(k, 1);
        let odd = [c("ab")];
        let ptrs: Vec<*const c_char> = odd.iter().map(|w| w.as_ptr()).collect();
        assert_eq!(wicks_genus(o, ptrs.as_ptr(), 1, &mut k), WicksStatus::Ok);
        assert_eq!(k, -1);

        let mut conj = ptr::null_mut();
        assert_eq!(wicks_conjugate(o, c("ab").as_ptr(), c("ba").as_ptr(), 1, &mut conj), WicksStatus::Ok);
        assert_eq!(take(conj).as_deref(), Some("a"));
        assert_eq!(wicks_conjugate(o, c("ab").as_ptr(), c("aab").as_ptr(), 1, &mut conj), WicksStatus::Ok);
        assert_eq!(take(conj), None);
        assert_eq!(wicks_conjugate(o, c("ab").as_ptr(), c("cb").as_ptr(), 1, &mut conj), WicksStatus::Input);
        wicks_oracle_free(o);
        assert_eq!(wicks_genus(ptr::null(), ptr::null(), 0, &mut k), WicksStatus::NullPointer);
        assert_eq!(wicks_oracle_free_group(0, &mut o), WicksStatus::Input);
    }
}

#[test]
fn oracle_from_json() {
    unsafe {
        let mut o = ptr::null_mut();
        let json = c(r#"{"generators": ["a", "b", "c", "d"], "relators": ["abABcdCD"], "backend": "dehn"}"#);
        assert_eq!(wicks_oracle_from_json(json.as_ptr(), &mut o), WicksStatus::Ok);
        let words = [c("abAB"), c("cdCD")];
        let ptrs: Vec<*const c_char> = words.iter().map(|w| w.as_ptr()).collect();
        let mut k = -2i64;
        assert_eq!(wicks_genus(o, ptrs.as_ptr(), 2, &mut k), WicksStatus::Ok);
        assert_eq!(k, 0);
        wicks_oracle_free(o);
        assert_eq!(wicks_oracle_from_json(c("{").as_ptr(), &mut o), WicksStatus::Input);
        assert!(!last_error().is_empty());
    }
}

#[test]
fn run_matches_the_driver() {
    unsafe {
        let args = [c("wicks"), c("check"), c("abcABC")];
        let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        let (mut code, mut out) = (-1, ptr::null_mut());
        assert_eq!(wicks_run(ptrs.as_ptr(), ptrs.len(), &mut code, &mut out), WicksStatus::Ok);
        assert_eq!(code, 0);
        let expected = wicks::cli::run(["wicks", "wicks", "check", "abcABC"]).stdout;
        assert_eq!(take(out).unwrap(), expected);
        let bad = [c("nonsense")];
        let ptrs: Vec<*const c_char> = bad.iter().map(|a| a.as_ptr()).collect();
        assert_eq!(wicks_run(ptrs.as_ptr(), 1, &mut code, &mut out), WicksStatus::Ok);
        assert_eq!(code, 1);
        assert!(!take(out).unwrap().is_empty());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/wicks.h")).unwrap();
    for name in [
        "wicks_last_error",
        "wicks_string_free",
        "wicks_oracle_free_group",
        "wicks_oracle_from_json",
        "wicks_oracle_free",
        "wicks_is_wicks_form",
        "wicks_genus",
        "wicks_conjugate",
        "wicks_run",
        "typedef struct WicksOracle WicksOracle",
        "WicksStatus_Ok = 0",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
