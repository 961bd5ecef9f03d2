use std::ffi::{CStr, CString};
use std::ptr;

use ltkit_ffi::*;

unsafe fn text(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    ltkit_string_free(s);
    out
}

#[test]
fn polygon_roundtrip() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(ltkit_polygon_new(2, 3, [1i64].as_ptr(), [2i64].as_ptr(), 1, &mut p), LtStatus::Ok);
        let (mut a, mut b) = (0, 0);
        assert_eq!(ltkit_polygon_slope(p, 1, &mut a, &mut b), LtStatus::Ok);
        assert_eq!((a, b), (1, 4));
        assert_eq!(ltkit_polygon_slope(p, 2, &mut a, &mut b), LtStatus::Ok);
        assert_eq!((a, b), (1, 12));
        assert_eq!(ltkit_polygon_slope(p, 3, &mut a, &mut b), LtStatus::Shape);
        assert_eq!(ltkit_polygon_in_domain(p), 1);
        assert!(text(ltkit_polygon_json(p)).contains("\"in_D\":true"));
        ltkit_polygon_free(p);
    }
}

#[test]
fn reduce_example() {
    unsafe {
        let mut p = ptr::null_mut();
        let v = CString::new("3/10").unwrap();
        assert_eq!(ltkit_polygon_parse(2, 3, v.as_ptr(), &mut p), LtStatus::Ok);
        assert_eq!(ltkit_polygon_in_domain(p), 0);
        let mut r = ptr::null_mut();
        let mut steps = 0;
        assert_eq!(ltkit_hecke_reduce(p, 10, &mut r, &mut steps), LtStatus::Ok);
        assert_eq!(steps, 1);
        assert_eq!(ltkit_polygon_in_domain(r), 1);
        ltkit_polygon_free(r);
        ltkit_polygon_free(p);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut p = ptr::null_mut();
        let v = CString::new("1/2,1/3").unwrap();
        assert_eq!(ltkit_polygon_parse(2, 3, v.as_ptr(), &mut p), LtStatus::Shape);
        assert!(p.is_null());
        assert!(!ltkit_last_error().is_null());
        assert_eq!(ltkit_polygon_slope(ptr::null(), 1, ptr::null_mut(), ptr::null_mut()), LtStatus::NullPointer);
        assert_eq!(ltkit_polygon_in_domain(ptr::null()), -1);
        let mut w = ptr::null_mut();
        assert_eq!(ltkit_witt_new(6, 2, &mut w), LtStatus::Domain);
    }
}

#[test]
fn witt_render() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(ltkit_witt_new(2, 2, &mut w), LtStatus::Ok);
        let s = text(ltkit_witt_render(w));
        assert!(s.contains("S_1 = x1 + y1 - (2/pi)*x0*y0"));
        ltkit_witt_free(w);
    }
}

#[test]
fn cli_entry() {
    unsafe {
        let args: Vec<CString> = ["polygon", "--n", "2", "--q", "3", "--vals", "1/2"].iter().map(|s| CString::new(*s).unwrap()).collect();
        let ptrs: Vec<_> = args.iter().map(|a| a.as_ptr()).collect();
        let mut out = ptr::null_mut();
        assert_eq!(ltkit_cli(ptrs.len(), ptrs.as_ptr(), &mut out), 0);
        assert!(text(out).contains("\"boundary\""));
        let bad = [CString::new("nope").unwrap()];
        let ptrs: Vec<_> = bad.iter().map(|a| a.as_ptr()).collect();
        let mut out = ptr::null_mut();
        assert_eq!(ltkit_cli(1, ptrs.as_ptr(), &mut out), 2);
        ltkit_string_free(out);
    }
}

#[test]
fn header_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ltkit.h")).unwrap();
    for sym in ["ltkit_polygon_new", "ltkit_last_error", "LT_STATUS_OK", "typedef struct LtPolygon LtPolygon"] {
        assert!(h.contains(sym), "{sym}");
    }
}
