//! C ABI over the core library: opaque handles, status codes, and
//! UTF-8 strings allocated here and released with [`ov_string_free`].
//!
//! Every function is null-safe: passing a null pointer yields
//! `OvStatus::NullPointer` instead of undefined behavior. Handles are
//! created and destroyed only through this interface.

use std::ffi::{c_char, CStr, CString};
use std::str::FromStr;

use opvolterra::apply::{
    apply_exp, apply_log1p, apply_to_monomial, power_closed_form, ClosedFormDto,
};
use opvolterra::exactnum::bessel_closed;
use opvolterra::opalgebra::{expand_xi_closed, power_by_rewrite, OperatorSum};
use opvolterra::suite::{run_suites, SuiteConfig, SuiteKind, SuiteResult};

/// Result codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    Internal = 4,
}

/// Opaque handle to an exact operator sum.
pub struct OvOperatorSum {
    inner: OperatorSum,
}

fn string_out(s: String, out: *mut *mut c_char) -> OvStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            OvStatus::Ok
        }
        Err(_) => OvStatus::Internal,
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn ov_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Releases a string allocated by this library.
///
/// # Safety
/// `s` must have been returned by a function from this library and not
/// already freed. Null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn ov_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases an operator-sum handle. Null is accepted and ignored.
///
/// # Safety
/// `s` must have been returned by this library and not already freed.
#[no_mangle]
pub unsafe extern "C" fn ov_operator_sum_free(s: *mut OvOperatorSum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Closed expansion of the n-th power (n >= 1) into canonical terms.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ov_expand_xi(n: u32, out: *mut *mut OvOperatorSum) -> OvStatus {
    if out.is_null() {
        return OvStatus::NullPointer;
    }
    match expand_xi_closed(n as usize) {
        Ok(sum) => {
            *out = Box::into_raw(Box::new(OvOperatorSum { inner: sum }));
            OvStatus::Ok
        }
        Err(_) => OvStatus::InvalidArgument,
    }
}

/// n-th power computed from the recursive definition by the rewrite engine.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ov_power_by_rewrite(n: u32, out: *mut *mut OvOperatorSum) -> OvStatus {
    if out.is_null() {
        return OvStatus::NullPointer;
    }
    match power_by_rewrite(n as usize) {
        Ok(sum) => {
            *out = Box::into_raw(Box::new(OvOperatorSum { inner: sum }));
            OvStatus::Ok
        }
        Err(_) => OvStatus::InvalidArgument,
    }
}

/// Exact structural equality of two sums.
///
/// # Safety
/// `a`, `b` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ov_operator_sum_eq(
    a: *const OvOperatorSum,
    b: *const OvOperatorSum,
    out: *mut bool,
) -> OvStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return OvStatus::NullPointer;
    }
    *out = (*a).inner == (*b).inner;
    OvStatus::Ok
}

/// Number of canonical terms in the sum.
///
/// # Safety
/// `s` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ov_operator_sum_len(s: *const OvOperatorSum, out: *mut usize) -> OvStatus {
    if s.is_null() || out.is_null() {
        return OvStatus::NullPointer;
    }
    *out = (*s).inner.len();
    OvStatus::Ok
}

/// Serializes the sum as JSON: a list of {coeff, x_pow, i_pow} objects
/// sorted by integration count, coefficients as exact "p/q" strings.
///
/// # Safety
/// `s` and `out` must be valid pointers; free the string with
/// [`ov_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ov_operator_sum_json(
    s: *const OvOperatorSum,
    out: *mut *mut c_char,
) -> OvStatus {
    if s.is_null() || out.is_null() {
        return OvStatus::NullPointer;
    }
    match serde_json::to_string(&(*s).inner) {
        Ok(text) => string_out(text, out),
        Err(_) => OvStatus::Internal,
    }
}

/// Human-readable rendering like "x^3 I^3 - 3 x^2 I^4 + 3 x I^5".
///
/// # Safety
/// `s` and `out` must be valid pointers; free the string with
/// [`ov_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ov_operator_sum_pretty(
    s: *const OvOperatorSum,
    out: *mut *mut c_char,
) -> OvStatus {
    if s.is_null() || out.is_null() {
        return OvStatus::NullPointer;
    }
    string_out((*s).inner.pretty(), out)
}

/// Triangle entry a(n, k) as a decimal string (0 outside the triangle).
///
/// # Safety
/// `out` must be a valid pointer; free the string with [`ov_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ov_bessel_number(n: u32, k: u32, out: *mut *mut c_char) -> OvStatus {
    if out.is_null() {
        return OvStatus::NullPointer;
    }
    string_out(bessel_closed(n as usize, k as usize).to_string(), out)
}

/// y_n(-1) as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer; free the string with [`ov_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ov_a000806(n: u32, out: *mut *mut c_char) -> OvStatus {
    if out.is_null() {
        return OvStatus::NullPointer;
    }
    string_out(opvolterra::exactnum::a000806(n as usize).to_string(), out)
}

fn closed_form_json(dto: &ClosedFormDto, out: *mut *mut c_char) -> OvStatus {
    match serde_json::to_string(dto) {
        Ok(text) => string_out(text, out),
        Err(_) => OvStatus::Internal,
    }
}

/// n-th power applied to t^exponent, as closed-form JSON
/// {kind, p, q} with exact coefficient strings.
///
/// # Safety
/// `out` must be a valid pointer; free the string with [`ov_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ov_apply_monomial_json(
    n: u32,
    exponent: u32,
    out: *mut *mut c_char,
) -> OvStatus {
    if out.is_null() {
        return OvStatus::NullPointer;
    }
    match expand_xi_closed(n as usize) {
        Ok(ops) => {
            let poly = apply_to_monomial(&ops, exponent as usize);
            closed_form_json(&ClosedFormDto::from_poly(&poly), out)
        }
        Err(_) => OvStatus::InvalidArgument,
    }
}

/// n-th power applied to e^t, as closed-form JSON.
///
/// # Safety
/// `out` must be a valid pointer; free the string with [`ov_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ov_apply_exp_json(n: u32, out: *mut *mut c_char) -> OvStatus {
    if out.is_null() {
        return OvStatus::NullPointer;
    }
    match apply_exp(n as usize) {
        Ok(form) => closed_form_json(&ClosedFormDto::from_exp(&form), out),
        Err(_) => OvStatus::InvalidArgument,
    }
}

/// n-th power applied to ln(1+t), as closed-form JSON.
///
/// # Safety
/// `out` must be a valid pointer; free the string with [`ov_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ov_apply_log1p_json(n: u32, out: *mut *mut c_char) -> OvStatus {
    if out.is_null() {
        return OvStatus::NullPointer;
    }
    match apply_log1p(n as usize) {
        Ok(form) => closed_form_json(&ClosedFormDto::from_log(&form), out),
        Err(_) => OvStatus::InvalidArgument,
    }
}

/// Coefficient and exponent of the n-th power applied to t^(alpha-1);
/// requires alpha > 0.
///
/// # Safety
/// `coefficient` and `exponent` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ov_power_closed_form(
    n: u32,
    alpha: f64,
    coefficient: *mut f64,
    exponent: *mut f64,
) -> OvStatus {
    if coefficient.is_null() || exponent.is_null() {
        return OvStatus::NullPointer;
    }
    match power_closed_form(n as usize, alpha) {
        Ok(form) => {
            *coefficient = form.coefficient;
            *exponent = form.exponent;
            OvStatus::Ok
        }
        Err(_) => OvStatus::InvalidArgument,
    }
}

/// Runs a named verification suite ("all", "theorem1", ...) at default
/// bounds, or with the primary bound overridden when n_max > 0. Writes
/// the number of failed cases; `Ok` means the suite ran, not that it
/// passed.
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `failed` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn ov_verify_suite(
    name: *const c_char,
    n_max: u32,
    failed: *mut u32,
) -> OvStatus {
    if name.is_null() || failed.is_null() {
        return OvStatus::NullPointer;
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        return OvStatus::InvalidUtf8;
    };
    let Ok(kind) = SuiteKind::from_str(name) else {
        return OvStatus::InvalidArgument;
    };
    let cfg = SuiteConfig {
        n_max: (n_max > 0).then_some(n_max as usize),
        ..SuiteConfig::default()
    };
    let results = run_suites(kind, &cfg);
    let count: usize = results.iter().map(SuiteResult::failed_count).sum();
    *failed = count as u32;
    OvStatus::Ok
}
