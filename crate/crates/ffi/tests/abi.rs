use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use formacalc::ErrorCode;
use formacalc_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    fc_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(fc_last_error()).to_str().unwrap().to_string()
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(fc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn status_constants_match_error_codes() {
    let consts = [
        FC_E_SYNTAX,
        FC_E_UNBOUND,
        FC_E_TYPE,
        FC_E_SPACE,
        FC_E_DIMENSION,
        FC_E_DEGREE,
        FC_E_KNOWN_ORDER,
        FC_E_NOT_INVERTIBLE,
        FC_E_NOT_LOCAL,
        FC_E_DEGENERATE_INTERVAL,
        FC_E_NOT_NORMALIZED,
        FC_E_MISSING_CONFIGURATION,
        FC_E_NOT_COMPACTLY_SUPPORTED,
        FC_E_INVALID_ARGUMENT,
        FC_E_RESIDUAL_NONZERO,
        FC_E_IO,
        FC_E_INTERNAL,
    ];
    let codes: Vec<i32> = ErrorCode::ALL.iter().map(|c| c.as_i32()).collect();
    assert_eq!(codes, consts);
    assert!(!codes.contains(&FC_OK));
}

#[test]
fn function_arithmetic() {
    unsafe {
        let (mut f, mut g, mut h) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(fc_function_parse(1, 1, 2, c("x1 + y1").as_ptr(), &mut f), FC_OK);
        assert_eq!(fc_function_parse(1, 1, 2, c("x1 - y1").as_ptr(), &mut g), FC_OK);
        assert_eq!(fc_function_mul(f, g, &mut h), FC_OK);
        let mut s = ptr::null_mut();
        assert_eq!(fc_function_to_string(h, &mut s), FC_OK);
        assert_eq!(take(s), "x1^2 - y1^2");

        let mut v = ptr::null_mut();
        assert_eq!(fc_function_value(h, c("3/2").as_ptr(), &mut v), FC_OK);
        assert_eq!(take(v), "9/4");

        let mut dy = ptr::null_mut();
        assert_eq!(fc_function_deriv(h, 1, &mut dy), FC_OK);
        let mut s = ptr::null_mut();
        assert_eq!(fc_function_to_string(dy, &mut s), FC_OK);
        assert_eq!(take(s), "-2*y1");

        let mut j = ptr::null_mut();
        assert_eq!(fc_function_to_json(h, &mut j), FC_OK);
        let json: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
        assert!(json.is_object());

        for p in [f, g, h, dy] {
            fc_function_free(p);
        }
    }
}

#[test]
fn truncation_through_the_abi() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(fc_function_parse(0, 1, 2, c("y1^3 + y1").as_ptr(), &mut f), FC_OK);
        let mut s = ptr::null_mut();
        fc_function_to_string(f, &mut s);
        assert_eq!(take(s), "y1");
        fc_function_free(f);
    }
}

#[test]
fn forms_satisfy_dd_and_leibniz() {
    unsafe {
        let (mut w, mut v) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(fc_form_parse(1, 1, 3, c("x1^2*y1*dy1").as_ptr(), &mut w), FC_OK);
        assert_eq!(fc_form_parse(1, 1, 3, c("x1*y1").as_ptr(), &mut v), FC_OK);
        assert_eq!(fc_form_degree(w), 1);
        assert_eq!(fc_form_degree(ptr::null()), -1);

        let (mut dw, mut ddw) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(fc_form_d(w, &mut dw), FC_OK);
        assert_eq!(fc_form_d(dw, &mut ddw), FC_OK);
        let mut s = ptr::null_mut();
        fc_form_to_string(ddw, &mut s);
        assert_eq!(take(s), "0");

        // d(v w) = dv ^ w + v dw for a 0-form v
        let (mut vw, mut lhs, mut dv, mut a, mut b, mut rhs) =
            (ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(fc_form_wedge(v, w, &mut vw), FC_OK);
        assert_eq!(fc_form_d(vw, &mut lhs), FC_OK);
        assert_eq!(fc_form_d(v, &mut dv), FC_OK);
        assert_eq!(fc_form_wedge(dv, w, &mut a), FC_OK);
        assert_eq!(fc_form_wedge(v, dw, &mut b), FC_OK);
        assert_eq!(fc_form_add(a, b, &mut rhs), FC_OK);
        let mut same = 0;
        assert_eq!(fc_form_agrees(lhs, rhs, &mut same), FC_OK);
        assert_eq!(same, 1);
        for p in [w, v, dw, ddw, vw, lhs, dv, a, b, rhs] {
            fc_form_free(p);
        }
    }
}

#[test]
fn errors_report_codes_and_messages() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(fc_function_parse(1, 1, 2, c("x1 +").as_ptr(), &mut f), FC_E_SYNTAX);
        assert!(f.is_null());
        assert!(last_error().contains("E001"));

        assert_eq!(fc_function_parse(1, 1, 2, c("x2").as_ptr(), &mut f), FC_E_UNBOUND);
        assert_eq!(fc_function_parse(1, 1, 2, c("dx1").as_ptr(), &mut f), FC_E_TYPE);
        assert_eq!(fc_function_parse(1, 1, 2, ptr::null(), &mut f), FC_E_INVALID_ARGUMENT);

        let (mut a, mut b, mut h) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        fc_function_parse(1, 0, 2, c("x1").as_ptr(), &mut a);
        fc_function_parse(0, 1, 2, c("y1").as_ptr(), &mut b);
        assert_eq!(fc_function_mul(a, b, &mut h), FC_E_SPACE);
        assert_eq!(fc_function_deriv(a, 5, &mut h), FC_E_DIMENSION);
        assert_eq!(fc_function_mul(a, ptr::null(), &mut h), FC_E_INVALID_ARGUMENT);

        let mut v = ptr::null_mut();
        assert_eq!(fc_function_value(a, c("1, 2").as_ptr(), &mut v), FC_E_DIMENSION);
        assert_eq!(fc_function_value(a, c("one").as_ptr(), &mut v), FC_E_INVALID_ARGUMENT);

        let mut x = ptr::null_mut();
        assert_eq!(fc_function_parse(1, 0, 2, c("x1").as_ptr(), &mut x), FC_OK);
        assert_eq!(last_error(), "");
        for p in [a, b, x] {
            fc_function_free(p);
        }

        let (mut w, mut d) = (ptr::null_mut(), ptr::null_mut());
        fc_form_parse(1, 1, 0, c("x1").as_ptr(), &mut w);
        assert_eq!(fc_form_d(w, &mut d), FC_E_KNOWN_ORDER);
        fc_form_free(w);
    }
}

#[test]
fn scripts_and_checks() {
    unsafe {
        let mut report = ptr::null_mut();
        let mut exit = -1;
        let src = c("space (1,1,3)\nd(x1^2*y1)\n");
        assert_eq!(fc_script_run(src.as_ptr(), 7, &mut report, &mut exit), FC_OK);
        assert_eq!(exit, 0);
        let json: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(json["seed"], 7);
        assert_eq!(json["results"][0]["text"], "(2*x1*y1)*dx1 + (x1^2)*dy1");

        let src = c("d(");
        assert_eq!(fc_script_run(src.as_ptr(), 0, &mut report, &mut exit), FC_OK);
        assert_eq!(exit, 2);
        fc_string_free(report);

        let mut passed = -1;
        assert_eq!(fc_check(c("jets").as_ptr(), ptr::null(), 1, &mut report, &mut passed), FC_OK);
        assert_eq!(passed, 1);
        let json: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(json["suite"], "jets");

        assert_eq!(fc_check(c("nope").as_ptr(), ptr::null(), 1, &mut report, &mut passed), FC_E_INVALID_ARGUMENT);
        assert_eq!(
            fc_check(c("poincare").as_ptr(), c("bogus").as_ptr(), 1, &mut report, &mut passed),
            FC_E_INVALID_ARGUMENT
        );
    }
}

#[test]
fn header_declares_the_abi_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/formacalc.h");
    let text = std::fs::read_to_string(&header).expect("header generated by the build script");
    for name in [
        "fc_version",
        "fc_last_error",
        "fc_string_free",
        "fc_function_parse",
        "fc_function_mul",
        "fc_function_value",
        "fc_function_free",
        "fc_form_parse",
        "fc_form_d",
        "fc_form_wedge",
        "fc_form_agrees",
        "fc_form_free",
        "fc_script_run",
        "fc_check",
        "typedef struct FcFunction FcFunction",
        "#define FC_E_INTERNAL 99",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).status() else {
        eprintln!("no C compiler; skipping header compile");
        return;
    };
    assert!(status.success(), "header does not compile");
}
