use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use superpv_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn text(e: *const SpvElem) -> String {
    let mut s: *mut c_char = ptr::null_mut();
    assert_eq!(spv_elem_to_string(e, &mut s), SpvStatus::Ok);
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    spv_string_free(s);
    out
}

unsafe fn ring() -> *mut SpvRing {
    let mut r = ptr::null_mut();
    assert_eq!(spv_ring_new(cs("t").as_ptr(), cs("th1, th2").as_ptr(), ptr::null(), &mut r), SpvStatus::Ok);
    r
}

unsafe fn parse(r: *const SpvRing, src: &str) -> *mut SpvElem {
    let mut e = ptr::null_mut();
    assert_eq!(spv_elem_parse(r, cs(src).as_ptr(), &mut e), SpvStatus::Ok, "{src}");
    e
}

#[test]
fn odd_generators_anticommute() {
    unsafe {
        let r = ring();
        let a = parse(r, "th1");
        let b = parse(r, "th2");
        let (mut ab, mut ba, mut sum) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(spv_elem_mul(a, b, &mut ab), SpvStatus::Ok);
        assert_eq!(spv_elem_mul(b, a, &mut ba), SpvStatus::Ok);
        assert_eq!(spv_elem_add(ab, ba, &mut sum), SpvStatus::Ok);
        assert_eq!(text(sum), "0");
        for e in [a, b, ab, ba, sum] {
            spv_elem_free(e);
        }
        spv_ring_free(r);
    }
}

#[test]
fn inverse_and_body() {
    unsafe {
        let r = ring();
        let a = parse(r, "1 + t + th1*th2");
        let mut inv = ptr::null_mut();
        assert_eq!(spv_elem_invert(a, &mut inv), SpvStatus::Ok);
        let mut prod = ptr::null_mut();
        assert_eq!(spv_elem_mul(a, inv, &mut prod), SpvStatus::Ok);
        let one = parse(r, "1");
        let mut eq: c_int = 0;
        assert_eq!(spv_elem_equal(prod, one, &mut eq), SpvStatus::Ok);
        assert_eq!(eq, 1);
        let mut body = ptr::null_mut();
        assert_eq!(spv_elem_body(a, &mut body), SpvStatus::Ok);
        let want = parse(r, "t + 1");
        assert_eq!(spv_elem_equal(body, want, &mut eq), SpvStatus::Ok);
        assert_eq!(eq, 1);
        for e in [a, inv, prod, one, body, want] {
            spv_elem_free(e);
        }
        spv_ring_free(r);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    unsafe {
        let r = ring();
        let mut e = ptr::null_mut();
        assert_eq!(spv_elem_parse(r, cs("t + ").as_ptr(), &mut e), SpvStatus::ParseError);
        let msg = CStr::from_ptr(spv_last_error()).to_str().unwrap();
        assert!(msg.contains("column"), "{msg}");
        let odd = parse(r, "th1");
        let mut inv = ptr::null_mut();
        assert_eq!(spv_elem_invert(odd, &mut inv), SpvStatus::NotInvertible);
        assert!(inv.is_null());
        assert_eq!(spv_elem_parse(ptr::null(), cs("1").as_ptr(), &mut e), SpvStatus::NullPointer);
        let mut other = ptr::null_mut();
        assert_eq!(spv_ring_new(cs("s").as_ptr(), ptr::null(), ptr::null(), &mut other), SpvStatus::Ok);
        let s = parse(other, "s");
        let mut p = ptr::null_mut();
        assert_eq!(spv_elem_mul(odd, s, &mut p), SpvStatus::RingMismatch);
        let mut bad = ptr::null_mut();
        assert_eq!(spv_ring_new(ptr::null(), ptr::null(), cs("x:weird").as_ptr(), &mut bad), SpvStatus::InvalidSpec);
        spv_elem_free(odd);
        spv_elem_free(s);
        spv_ring_free(other);
        spv_ring_free(r);
    }
}

const PROBLEM: &str = r#"
[ring]
body = ["t"]
odd = ["th1"]

[lie]
preset = "d"

[[action]]
generator = "d"
target = "t"
image = "1"

[module]
format = "1|1"

[[module.maps]]
generator = "d"
rows = [["1", "0"], ["0", "0"]]

[[tasks]]
kind = "solve"
order = 5

[[tasks]]
kind = "wronskian"
elements = ["1", "t"]
"#;

#[test]
fn run_config_returns_jsonl() {
    unsafe {
        let mut out: *mut c_char = ptr::null_mut();
        let mut code: c_int = -1;
        assert_eq!(spv_run_config(cs(PROBLEM).as_ptr(), true, &mut out, &mut code), SpvStatus::Ok);
        let report = CStr::from_ptr(out).to_str().unwrap().to_string();
        spv_string_free(out);
        assert_eq!(code, 0, "{report}");
        assert_eq!(report.lines().count(), 2);
        assert!(report.lines().all(|l| l.contains("\"verdict\":\"pass\"")));
        let broken = PROBLEM.replace("image = \"1\"", "image = \"q\"");
        assert_eq!(spv_run_config(cs(&broken).as_ptr(), false, &mut out, &mut code), SpvStatus::ParseError);
    }
}

#[test]
fn header_declares_the_interface() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/superpv.h")).unwrap();
    for name in [
        "SPV_STATUS_OK",
        "typedef struct SpvRing SpvRing",
        "typedef struct SpvElem SpvElem",
        "spv_ring_new",
        "spv_elem_parse",
        "spv_elem_mul",
        "spv_elem_invert",
        "spv_elem_body",
        "spv_elem_to_string",
        "spv_run_config",
        "spv_last_error",
        "spv_string_free",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}
