use std::ffi::{CStr, CString};
use std::ptr;

use ltltrace_ffi::*;

fn parse(text: &str, task: u32) -> *mut LtFormula {
    let t = CString::new(text).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { lt_formula_parse(t.as_ptr(), task, &mut f) }, LtStatus::Ok);
    f
}

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { lt_string_free(s) };
    out
}

fn last_error() -> Option<String> {
    let e = lt_last_error();
    (!e.is_null()).then(|| take(e))
}

fn check(f: *mut LtFormula, candidate: &str) -> LtVerdict {
    let c = CString::new(candidate).unwrap();
    let mut v = LtVerdict::Invalid;
    assert_eq!(unsafe { lt_check(f, c.as_ptr(), &mut v) }, LtStatus::Ok);
    v
}

#[test]
fn ltl_round_trip() {
    let f = parse("U a G b", LT_TASK_LTL);
    assert_eq!(unsafe { lt_formula_size(f) }, 4);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { lt_formula_to_string(f, &mut text) }, LtStatus::Ok);
    assert_eq!(take(text), "UaGb");

    let mut answer = ptr::null_mut();
    assert_eq!(unsafe { lt_solve(f, 0, &mut answer) }, LtStatus::Ok);
    let trace = take(answer);
    assert_eq!(check(f, &trace), LtVerdict::Holds);
    assert_eq!(check(f, "{!a"), LtVerdict::Invalid);
    assert!(last_error().is_some());
    assert_eq!(check(f, "{&!a!b}"), LtVerdict::Violated);
    unsafe { lt_formula_free(f) };
}

#[test]
fn prop_solve_and_check() {
    let f = parse("||ce<->!a!b", LT_TASK_PROP);
    let mut answer = ptr::null_mut();
    assert_eq!(unsafe { lt_solve(f, 0, &mut answer) }, LtStatus::Ok);
    assert_eq!(check(f, &take(answer)), LtVerdict::Holds);
    assert_eq!(check(f, "c1"), LtVerdict::Holds);
    assert_eq!(check(f, "a1"), LtVerdict::Violated);
    assert_eq!(check(f, "z1"), LtVerdict::Invalid);
    unsafe { lt_formula_free(f) };
}

#[test]
fn unsatisfiable_status() {
    let f = parse("&a!a", LT_TASK_PROP);
    let mut answer = ptr::null_mut();
    assert_eq!(unsafe { lt_solve(f, 0, &mut answer) }, LtStatus::Unsatisfiable);
    assert!(answer.is_null());
    assert!(last_error().unwrap().contains("unsatisfiable"));
    unsafe { lt_formula_free(f) };

    let g = parse("&Fa G!a", LT_TASK_LTL);
    assert_eq!(unsafe { lt_solve(g, 0, &mut answer) }, LtStatus::Unsatisfiable);
    unsafe { lt_formula_free(g) };
}

#[test]
fn classes() {
    let f = parse("Fa", LT_TASK_LTL);
    let classify = |out: &str, reference: Option<&str>| {
        let o = CString::new(out).unwrap();
        let r = reference.map(|r| CString::new(r).unwrap());
        let mut c = LtClass::Invalid;
        let rp = r.as_ref().map_or(ptr::null(), |r| r.as_ptr());
        assert_eq!(unsafe { lt_classify(f, o.as_ptr(), rp, &mut c) }, LtStatus::Ok);
        c
    };
    assert_eq!(classify("{a}", Some("{a}")), LtClass::Syntactic);
    assert_eq!(classify("a;{1}", Some("{a}")), LtClass::SemanticOnly);
    assert_eq!(classify("{!a}", None), LtClass::Incorrect);
    assert_eq!(classify("{a", Some("{a")), LtClass::Invalid);
    unsafe { lt_formula_free(f) };
}

#[test]
fn argument_errors() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { lt_formula_parse(ptr::null(), LT_TASK_LTL, &mut f) }, LtStatus::NullPointer);
    let t = CString::new("&a").unwrap();
    assert_eq!(unsafe { lt_formula_parse(t.as_ptr(), LT_TASK_LTL, &mut f) }, LtStatus::Parse);
    assert!(f.is_null());
    assert!(last_error().is_some());
    assert_eq!(unsafe { lt_formula_parse(t.as_ptr(), 7, &mut f) }, LtStatus::InvalidArgument);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { lt_formula_parse(bad.as_ptr().cast(), LT_TASK_LTL, &mut f) }, LtStatus::InvalidUtf8);
    assert_eq!(unsafe { lt_formula_parse(t.as_ptr(), LT_TASK_LTL, ptr::null_mut()) }, LtStatus::NullPointer);
    assert_eq!(unsafe { lt_formula_size(ptr::null()) }, 0);
    unsafe {
        lt_formula_free(ptr::null_mut());
        lt_string_free(ptr::null_mut());
    }
}

#[test]
fn success_clears_last_error() {
    let mut f = ptr::null_mut();
    let bad = CString::new("&").unwrap();
    unsafe { lt_formula_parse(bad.as_ptr(), LT_TASK_LTL, &mut f) };
    assert!(last_error().is_some());
    let f = parse("a", LT_TASK_LTL);
    assert!(last_error().is_none());
    unsafe { lt_formula_free(f) };
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(lt_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
