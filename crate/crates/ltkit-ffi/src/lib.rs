//! C ABI over `ltkit`. Handles are opaque; every fallible call returns an `LtStatus`
//! and leaves a message readable through `ltkit_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ltkit::hecke::{canonical_quotient, reduce_to_domain};
use ltkit::polygon::NewtonPolygon;
use ltkit::valcore::{Val, Q};
use ltkit::wittlab::WittPolys;
use ltkit::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LtStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Shape = 3,
    Precision = 4,
    Budget = 5,
    NonIntegral = 6,
    Algebra = 7,
    Utf8 = 8,
    Panic = 9,
}

/// Newton polygon handle.
pub struct LtPolygon(NewtonPolygon);

/// Witt structure polynomial handle.
pub struct LtWittPolys(WittPolys);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LtStatus {
    match e {
        Error::Shape(_) => LtStatus::Shape,
        Error::PrecisionMismatch(_) | Error::PrecisionExhausted(_) => LtStatus::Precision,
        Error::Budget(_) => LtStatus::Budget,
        Error::NonIntegral(_) | Error::Multiplicity(_) => LtStatus::NonIntegral,
        Error::NonUnit(_) | Error::Singular | Error::Axiom(_) | Error::NotNilpotent(_) => LtStatus::Algebra,
        _ => LtStatus::Domain,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (LtStatus, String)>) -> LtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LtStatus::Ok,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            LtStatus::Panic
        }
    }
}

fn lift(e: Error) -> (LtStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (LtStatus, String) {
    (LtStatus::NullPointer, "null pointer argument".into())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn ltkit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ltkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Polygon from `n - 1` valuations `nums[k]/dens[k]`; a zero denominator means infinity.
///
/// # Safety
/// `nums` and `dens` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltkit_polygon_new(
    n: usize,
    q: u64,
    nums: *const i64,
    dens: *const i64,
    len: usize,
    out: *mut *mut LtPolygon,
) -> LtStatus {
    guard(|| {
        if out.is_null() || (len > 0 && (nums.is_null() || dens.is_null())) {
            return Err(null());
        }
        let (ns, ds) = if len == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(nums, len), std::slice::from_raw_parts(dens, len))
        };
        let vals: Vec<Val> = ns
            .iter()
            .zip(ds)
            .map(|(&a, &b)| if b == 0 { Val::Inf } else { Val::Fin(Q::new(a as i128, b as i128)) })
            .collect();
        let p = NewtonPolygon::from_vals(n, q, &vals).map_err(lift)?;
        *out = Box::into_raw(Box::new(LtPolygon(p)));
        Ok(())
    })
}

/// Polygon from a comma separated list such as `1/2,inf`.
///
/// # Safety
/// `vals` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltkit_polygon_parse(n: usize, q: u64, vals: *const c_char, out: *mut *mut LtPolygon) -> LtStatus {
    guard(|| {
        if vals.is_null() || out.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(vals).to_str().map_err(|e| (LtStatus::Utf8, e.to_string()))?;
        let vs: Vec<Val> = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| Val::parse(t.trim()))
            .collect::<ltkit::Result<_>>()
            .map_err(lift)?;
        let p = NewtonPolygon::from_vals(n, q, &vs).map_err(lift)?;
        *out = Box::into_raw(Box::new(LtPolygon(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ltkit_polygon_free(p: *mut LtPolygon) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Slope `lambda_j`, `1 <= j <= n`.
///
/// # Safety
/// `p` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltkit_polygon_slope(p: *const LtPolygon, j: usize, num: *mut i64, den: *mut i64) -> LtStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(null)?;
        if num.is_null() || den.is_null() {
            return Err(null());
        }
        let s = j
            .checked_sub(1)
            .and_then(|k| p.0.slopes.get(k))
            .ok_or_else(|| (LtStatus::Shape, format!("slope index {j} outside 1..={}", p.0.n)))?;
        let (a, b) = (i64::try_from(*s.numer()), i64::try_from(*s.denom()));
        match (a, b) {
            (Ok(a), Ok(b)) => {
                *num = a;
                *den = b;
                Ok(())
            }
            _ => Err((LtStatus::Domain, "slope does not fit in 64 bits".into())),
        }
    })
}

/// 1 if the polygon lies in the Gross-Hopkins domain, 0 if not, -1 on a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltkit_polygon_in_domain(p: *const LtPolygon) -> i32 {
    p.as_ref().map_or(-1, |p| p.0.in_gross_hopkins() as i32)
}

/// JSON rendering; release with `ltkit_string_free`.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltkit_polygon_json(p: *const LtPolygon) -> *mut c_char {
    p.as_ref().map_or(ptr::null_mut(), |p| to_c(p.0.to_json().to_string()))
}

/// Image polygon under the canonical quotient of rank `q^i`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltkit_hecke_quotient(p: *const LtPolygon, i: usize, out: *mut *mut LtPolygon) -> LtStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let step = canonical_quotient(&p.0, i).map_err(lift)?;
        *out = Box::into_raw(Box::new(LtPolygon(step.image)));
        Ok(())
    })
}

/// Greedy reduction into the domain; writes the final polygon and the step count.
///
/// # Safety
/// `p` must be a live handle; `out` and `steps` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltkit_hecke_reduce(
    p: *const LtPolygon,
    budget: usize,
    out: *mut *mut LtPolygon,
    steps: *mut usize,
) -> LtStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(null)?;
        if out.is_null() || steps.is_null() {
            return Err(null());
        }
        let r = reduce_to_domain(&p.0, budget).map_err(lift)?;
        *steps = r.steps.len();
        *out = Box::into_raw(Box::new(LtPolygon(r.fin)));
        Ok(())
    })
}

/// Witt structure polynomials of length `len` for residue size `q`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltkit_witt_new(q: u64, len: usize, out: *mut *mut LtWittPolys) -> LtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let w = WittPolys::new(q, len).map_err(lift)?;
        *out = Box::into_raw(Box::new(LtWittPolys(w)));
        Ok(())
    })
}

/// # Safety
/// `w` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ltkit_witt_free(w: *mut LtWittPolys) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Newline separated `S_i`, `P_i`, `F_i`; release with `ltkit_string_free`.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltkit_witt_render(w: *const LtWittPolys) -> *mut c_char {
    w.as_ref().map_or(ptr::null_mut(), |w| to_c(w.0.render().join("\n")))
}

/// Run the command-line front end on `argc` arguments (excluding the program name);
/// stdout goes to `*out` (release with `ltkit_string_free`). Returns the exit status.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ltkit_cli(argc: usize, argv: *const *const c_char, out: *mut *mut c_char) -> i32 {
    let mut args = vec!["ltkit".to_string()];
    for k in 0..argc {
        let a = *argv.add(k);
        if a.is_null() {
            set_error("null argument".into());
            return 2;
        }
        args.push(CStr::from_ptr(a).to_string_lossy().into_owned());
    }
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = catch_unwind(AssertUnwindSafe(|| ltkit::cli::dispatch(args, &mut o, &mut e))).unwrap_or(1);
    if code != 0 {
        set_error(String::from_utf8_lossy(&e).trim().to_string());
    }
    if !out.is_null() {
        *out = to_c(String::from_utf8_lossy(&o).into_owned());
    }
    code
}
