//! C ABI over the `formacalc` kernel.
//!
//! Every fallible function returns a status: `FC_OK` (0) on success or the
//! numeric error code of the failure. The message of the most recent failure
//! on the calling thread is available from [`fc_last_error`]. Strings handed
//! out by the library are released with [`fc_string_free`]; handles with
//! their own `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use formacalc::cli::suites::{self, SuiteSpec};
use formacalc::cli::value::Value;
use formacalc::cli::{self, Config, Diagnostic, Session};
use formacalc::derham::Form;
use formacalc::formal::{FormalFunction, Space};
use formacalc::{algebra::rational, ErrorCode};

pub const FC_OK: i32 = 0;
pub const FC_E_SYNTAX: i32 = 1;
pub const FC_E_UNBOUND: i32 = 2;
pub const FC_E_TYPE: i32 = 3;
pub const FC_E_SPACE: i32 = 4;
pub const FC_E_DIMENSION: i32 = 5;
pub const FC_E_DEGREE: i32 = 6;
pub const FC_E_KNOWN_ORDER: i32 = 7;
pub const FC_E_NOT_INVERTIBLE: i32 = 8;
pub const FC_E_NOT_LOCAL: i32 = 9;
pub const FC_E_DEGENERATE_INTERVAL: i32 = 10;
pub const FC_E_NOT_NORMALIZED: i32 = 11;
pub const FC_E_MISSING_CONFIGURATION: i32 = 12;
pub const FC_E_NOT_COMPACTLY_SUPPORTED: i32 = 13;
pub const FC_E_INVALID_ARGUMENT: i32 = 14;
pub const FC_E_RESIDUAL_NONZERO: i32 = 15;
pub const FC_E_IO: i32 = 16;
pub const FC_E_INTERNAL: i32 = 99;

/// A truncated formal function on a fixed space.
pub struct FcFunction(FormalFunction);

/// A differential form on a fixed space.
pub struct FcForm(Form);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(ErrorCode, String);

impl From<formacalc::Error> for Failure {
    fn from(e: formacalc::Error) -> Self {
        Failure(e.code(), e.to_string())
    }
}

impl From<Diagnostic> for Failure {
    fn from(d: Diagnostic) -> Self {
        Failure(d.code, d.to_string())
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(ErrorCode::InvalidArgument, msg.to_string())
}

/// Runs `body`, turning errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            FC_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code.as_i32()
        }
        Err(_) => {
            set_error("internal panic");
            FC_E_INTERNAL
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| invalid("null handle"))
}

unsafe fn out<T>(slot: *mut *mut T, value: T) -> Result<(), Failure> {
    if slot.is_null() {
        return Err(invalid("null output pointer"));
    }
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn out_string(slot: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if slot.is_null() {
        return Err(invalid("null output pointer"));
    }
    *slot = CString::new(s).map_err(|_| invalid("interior NUL"))?.into_raw();
    Ok(())
}

/// Evaluates one expression with `(n, k, order)` as the ambient space.
fn evaluate(n: usize, k: usize, order: u32, expr: &str) -> Result<Value, Failure> {
    let mut session = Session::new(Config { order, ..Config::default() });
    let decl = cli::parse(&format!("space ({n},{k},{order})"))?;
    session.execute(&decl.stmts[0]);
    let e = cli::parse_expr(expr)?;
    Ok(session.eval(&e, Some(Space::new(n, k, order)))?)
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread; empty after a success. The
/// pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn fc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an expression such as `x1^2*y1 + 1/2` into a function on
/// `(n, k)` truncated at `order`.
///
/// # Safety
/// `expr` must be a valid C string and `result` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_function_parse(
    n: usize,
    k: usize,
    order: u32,
    expr: *const c_char,
    result: *mut *mut FcFunction,
) -> i32 {
    guard(|| {
        let f = match evaluate(n, k, order, text(expr)?)? {
            Value::Function(f) => f,
            Value::Scalar(c) => FormalFunction::constant(Space::new(n, k, order), c),
            v => return Err(Failure(ErrorCode::TypeMismatch, format!("expected a function, found {}", v.sort()))),
        };
        out(result, FcFunction(f))
    })
}

/// # Safety
/// `f` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn fc_function_free(f: *mut FcFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `a + b`.
///
/// # Safety
/// Handles must be valid; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_function_add(a: *const FcFunction, b: *const FcFunction, result: *mut *mut FcFunction) -> i32 {
    guard(|| out(result, FcFunction(handle(a)?.0.add(&handle(b)?.0)?)))
}

/// `a · b`, truncated.
///
/// # Safety
/// Handles must be valid; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_function_mul(a: *const FcFunction, b: *const FcFunction, result: *mut *mut FcFunction) -> i32 {
    guard(|| out(result, FcFunction(handle(a)?.0.mul(&handle(b)?.0)?)))
}

/// `∂f/∂z_i` for a 0-based joint index (`x` first, then `y`).
///
/// # Safety
/// `f` must be valid; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_function_deriv(f: *const FcFunction, i: usize, result: *mut *mut FcFunction) -> i32 {
    guard(|| {
        let f = &handle(f)?.0;
        if i >= f.space().nvars() {
            return Err(Failure(ErrorCode::DimensionMismatch, format!("no variable {i}")));
        }
        out(result, FcFunction(f.deriv(i)?))
    })
}

/// Value at a point given as comma-separated rationals (`"1/2, -3"`),
/// written as canonical text.
///
/// # Safety
/// `f` must be valid, `point` a C string, `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_function_value(f: *const FcFunction, point: *const c_char, result: *mut *mut c_char) -> i32 {
    guard(|| {
        let f = &handle(f)?.0;
        let raw = text(point)?.trim();
        let a = if raw.is_empty() {
            Vec::new()
        } else {
            raw.split(',')
                .map(|t| rational::parse(t.trim()).ok_or_else(|| invalid(&format!("bad rational '{}'", t.trim()))))
                .collect::<Result<Vec<_>, _>>()?
        };
        out_string(result, rational::to_canonical(&f.value(&a)?))
    })
}

/// Canonical text of `f`.
///
/// # Safety
/// `f` must be valid; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_function_to_string(f: *const FcFunction, result: *mut *mut c_char) -> i32 {
    guard(|| out_string(result, handle(f)?.0.to_string()))
}

/// Canonical JSON of `f`.
///
/// # Safety
/// `f` must be valid; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_function_to_json(f: *const FcFunction, result: *mut *mut c_char) -> i32 {
    guard(|| {
        let json = serde_json::to_string(&handle(f)?.0).map_err(|e| Failure(ErrorCode::Internal, e.to_string()))?;
        out_string(result, json)
    })
}

/// Parses a form expression such as `x1*dx1^^dy1` on `(n, k)`.
///
/// # Safety
/// `expr` must be a valid C string and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_form_parse(n: usize, k: usize, order: u32, expr: *const c_char, result: *mut *mut FcForm) -> i32 {
    guard(|| {
        let w = match evaluate(n, k, order, text(expr)?)? {
            Value::Form(w) => w,
            Value::Function(f) => Form::function(f),
            Value::Scalar(c) => Form::function(FormalFunction::constant(Space::new(n, k, order), c)),
            v => return Err(Failure(ErrorCode::TypeMismatch, format!("expected a form, found {}", v.sort()))),
        };
        out(result, FcForm(w))
    })
}

/// # Safety
/// `w` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn fc_form_free(w: *mut FcForm) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// The degree of `w`, or -1 for a null handle.
///
/// # Safety
/// `w` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn fc_form_degree(w: *const FcForm) -> i64 {
    w.as_ref().map_or(-1, |w| w.0.degree() as i64)
}

/// The exterior derivative `dw`.
///
/// # Safety
/// `w` must be valid; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_form_d(w: *const FcForm, result: *mut *mut FcForm) -> i32 {
    guard(|| out(result, FcForm(handle(w)?.0.d()?)))
}

/// `a ∧ b`.
///
/// # Safety
/// Handles must be valid; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_form_wedge(a: *const FcForm, b: *const FcForm, result: *mut *mut FcForm) -> i32 {
    guard(|| out(result, FcForm(handle(a)?.0.wedge(&handle(b)?.0)?)))
}

/// `a + b`.
///
/// # Safety
/// Handles must be valid; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_form_add(a: *const FcForm, b: *const FcForm, result: *mut *mut FcForm) -> i32 {
    guard(|| out(result, FcForm(handle(a)?.0.add(&handle(b)?.0)?)))
}

/// Writes 1 when `a` and `b` agree modulo their unknown coefficients.
///
/// # Safety
/// Handles must be valid; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_form_agrees(a: *const FcForm, b: *const FcForm, result: *mut i32) -> i32 {
    guard(|| {
        let (a, b) = (&handle(a)?.0, &handle(b)?.0);
        if result.is_null() {
            return Err(invalid("null output pointer"));
        }
        *result = i32::from(a.agrees(b));
        Ok(())
    })
}

/// Canonical text of `w`.
///
/// # Safety
/// `w` must be valid; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_form_to_string(w: *const FcForm, result: *mut *mut c_char) -> i32 {
    guard(|| out_string(result, handle(w)?.0.to_string()))
}

/// Runs a script and writes its JSON report. The script's own exit status
/// (0 clean, 1 failed check or runtime error, 2 rejected) goes to
/// `exit_code` when it is non-null; the return value reports only whether
/// the call itself worked.
///
/// # Safety
/// `source` must be a C string; `report` writable; `exit_code` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fc_script_run(
    source: *const c_char,
    seed: u64,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> i32 {
    guard(|| {
        let r = cli::run_source(text(source)?, &Config { seed, ..Config::default() });
        if !exit_code.is_null() {
            *exit_code = r.exit_code;
        }
        out_string(report, r.to_json())
    })
}

/// Runs an invariant suite with its default parameters and writes the JSON
/// report. `variant` may be null. `passed` receives 1 or 0 when non-null.
///
/// # Safety
/// String arguments must be C strings or null where allowed; outputs
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fc_check(
    suite: *const c_char,
    variant: *const c_char,
    seed: u64,
    report: *mut *mut c_char,
    passed: *mut i32,
) -> i32 {
    guard(|| {
        let variant = if variant.is_null() { None } else { Some(text(variant)?) };
        let spec = SuiteSpec::new(text(suite)?, variant, seed)?;
        let r = suites::run(&spec)?;
        if !passed.is_null() {
            *passed = i32::from(r.passed);
        }
        let json = serde_json::to_string_pretty(&r).map_err(|e| Failure(ErrorCode::Internal, e.to_string()))?;
        out_string(report, json)
    })
}
