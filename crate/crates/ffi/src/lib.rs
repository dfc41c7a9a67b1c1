//! C interface to the solvers, checkers and evaluation classes.
//!
//! Every fallible call returns an [`LtStatus`]; on failure the message is
//! kept per thread and read with [`lt_last_error`]. Strings handed out by
//! the library are freed with [`lt_string_free`], formula handles with
//! [`lt_formula_free`]. A handle may be used from one thread at a time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ltltrace::automaton::{solve, ContainmentChecker, Deadline, Verdict};
use ltltrace::datagen::Task;
use ltltrace::formula::{Ltl, Prop};
use ltltrace::harness::{classify_prediction, Class, Formula};
use ltltrace::sat::{check_partial_assignment, derive_partial_assignment, PartialAssignment};
use ltltrace::trace::SymbolicTrace;

pub const LT_TASK_LTL: u32 = 0;
pub const LT_TASK_PROP: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    Unsatisfiable = 5,
    Timeout = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LtVerdict {
    Holds = 0,
    Violated = 1,
    Invalid = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LtClass {
    Syntactic = 0,
    SemanticOnly = 1,
    Incorrect = 2,
    Invalid = 3,
}

impl From<Class> for LtClass {
    fn from(c: Class) -> LtClass {
        match c {
            Class::Syntactic => LtClass::Syntactic,
            Class::SemanticOnly => LtClass::SemanticOnly,
            Class::Incorrect => LtClass::Incorrect,
            Class::Invalid => LtClass::Invalid,
        }
    }
}

enum Inner {
    Ltl(Ltl, Option<Box<ContainmentChecker>>),
    Prop(Prop),
}

/// A parsed formula.
pub struct LtFormula {
    inner: Inner,
}

impl LtFormula {
    fn formula(&self) -> Formula {
        match &self.inner {
            Inner::Ltl(f, _) => Formula::Ltl(f.clone()),
            Inner::Prop(f) => Formula::Prop(f.clone()),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(LtStatus, String);

type Result<T> = std::result::Result<T, Fail>;

fn guard(f: impl FnOnce() -> Result<()>) -> LtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LtStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LtStatus::Panic
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str> {
    if p.is_null() {
        return Err(Fail(LtStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(LtStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T> {
    p.as_mut().ok_or_else(|| Fail(LtStatus::NullPointer, format!("{what} is null")))
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).expect("wire text has no NUL").into_raw()
}

/// Parses `text` as an LTL (`LT_TASK_LTL`) or propositional
/// (`LT_TASK_PROP`) formula in prefix notation.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out_formula` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_formula_parse(
    text: *const c_char,
    task: u32,
    out_formula: *mut *mut LtFormula,
) -> LtStatus {
    guard(|| {
        let slot = out(out_formula, "out_formula")?;
        *slot = ptr::null_mut();
        let s = c_str(text, "text")?;
        let task = match task {
            LT_TASK_LTL => Task::LtlTrace,
            LT_TASK_PROP => Task::PropAssignment,
            _ => return Err(Fail(LtStatus::InvalidArgument, format!("unknown task {task}"))),
        };
        let inner = match Formula::parse(s, task).map_err(|e| Fail(LtStatus::Parse, e.to_string()))? {
            Formula::Ltl(f) => Inner::Ltl(f, None),
            Formula::Prop(f) => Inner::Prop(f),
        };
        *slot = Box::into_raw(Box::new(LtFormula { inner }));
        Ok(())
    })
}

/// # Safety
/// `formula` must come from [`lt_formula_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lt_formula_free(formula: *mut LtFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// Number of tree nodes, or 0 for a null handle.
///
/// # Safety
/// `formula` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lt_formula_size(formula: *const LtFormula) -> usize {
    formula.as_ref().map_or(0, |f| match &f.inner {
        Inner::Ltl(f, _) => f.size(),
        Inner::Prop(f) => f.size(),
    })
}

/// The formula in prefix notation.
///
/// # Safety
/// `formula` must be a live handle and `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_formula_to_string(formula: *const LtFormula, out_text: *mut *mut c_char) -> LtStatus {
    guard(|| {
        let slot = out(out_text, "out_text")?;
        let f = formula.as_ref().ok_or(Fail(LtStatus::NullPointer, "formula is null".into()))?;
        *slot = owned(match &f.inner {
            Inner::Ltl(f, _) => f.to_polish(),
            Inner::Prop(f) => f.to_polish(),
        });
        Ok(())
    })
}

/// Computes a trace (LTL) or a partial assignment (propositional).
/// `timeout_ms` of 0 means no limit and is ignored for propositional
/// formulas.
///
/// # Safety
/// `formula` must be a live handle and `out_answer` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_solve(
    formula: *const LtFormula,
    timeout_ms: u64,
    out_answer: *mut *mut c_char,
) -> LtStatus {
    guard(|| {
        let slot = out(out_answer, "out_answer")?;
        *slot = ptr::null_mut();
        let f = formula.as_ref().ok_or(Fail(LtStatus::NullPointer, "formula is null".into()))?;
        let unsat = || Fail(LtStatus::Unsatisfiable, "formula is unsatisfiable".into());
        let answer = match &f.inner {
            Inner::Ltl(f, _) => match solve(f, &Deadline::from_millis(timeout_ms)) {
                Ok(Some(t)) => t.to_string(),
                Ok(None) => return Err(unsat()),
                Err(_) => return Err(Fail(LtStatus::Timeout, format!("no answer within {timeout_ms} ms"))),
            },
            Inner::Prop(f) => derive_partial_assignment(f).map_err(|_| unsat())?.to_string(),
        };
        *slot = owned(answer);
        Ok(())
    })
}

/// Checks a candidate trace or assignment. An unparsable candidate yields
/// `Invalid` with status `Ok`; the reason is left in [`lt_last_error`].
///
/// # Safety
/// `formula` must be a live handle, `candidate` NUL-terminated and
/// `out_verdict` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_check(
    formula: *mut LtFormula,
    candidate: *const c_char,
    out_verdict: *mut LtVerdict,
) -> LtStatus {
    let mut reason = None;
    let status = guard(|| {
        let slot = out(out_verdict, "out_verdict")?;
        let f = formula.as_mut().ok_or(Fail(LtStatus::NullPointer, "formula is null".into()))?;
        let c = c_str(candidate, "candidate")?;
        *slot = match &mut f.inner {
            Inner::Ltl(f, checker) => match SymbolicTrace::parse(c) {
                Err(e) => {
                    reason = Some(e.to_string());
                    LtVerdict::Invalid
                }
                Ok(t) => match checker.get_or_insert_with(|| Box::new(ContainmentChecker::new(f))).check(&t) {
                    Verdict::Holds => LtVerdict::Holds,
                    Verdict::Violated(_) => LtVerdict::Violated,
                },
            },
            Inner::Prop(f) => match PartialAssignment::parse(c, f.vars()) {
                Err(e) => {
                    reason = Some(e.to_string());
                    LtVerdict::Invalid
                }
                Ok(a) if check_partial_assignment(f, &a) == Ok(true) => LtVerdict::Holds,
                Ok(_) => LtVerdict::Violated,
            },
        };
        Ok(())
    });
    if let Some(r) = reason {
        set_error(r);
    }
    status
}

/// Evaluation class of a model output. `reference` may be null.
///
/// # Safety
/// `formula` must be a live handle, `output` NUL-terminated, `reference`
/// null or NUL-terminated and `out_class` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_classify(
    formula: *const LtFormula,
    output: *const c_char,
    reference: *const c_char,
    out_class: *mut LtClass,
) -> LtStatus {
    guard(|| {
        let slot = out(out_class, "out_class")?;
        let f = formula.as_ref().ok_or(Fail(LtStatus::NullPointer, "formula is null".into()))?;
        let o = c_str(output, "output")?;
        let r = if reference.is_null() { None } else { Some(c_str(reference, "reference")?) };
        *slot = classify_prediction(&f.formula(), o, r).into();
        Ok(())
    })
}

/// The message of the last failed call on this thread, or null. Free the
/// copy with [`lt_string_free`].
#[no_mangle]
pub extern "C" fn lt_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn lt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version; static, do not free.
#[no_mangle]
pub extern "C" fn lt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
