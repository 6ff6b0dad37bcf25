//! Exercises the C ABI the way a foreign caller would: through raw
//! pointers, status codes and manual frees.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use opvolterra_ffi::*;

unsafe fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
    ov_string_free(ptr);
    s
}

#[test]
fn version_is_static_utf8() {
    let v = ov_version();
    assert!(!v.is_null());
    let text = unsafe { CStr::from_ptr(v) }.to_str().unwrap();
    assert!(!text.is_empty());
}

#[test]
fn expansion_handles_round_trip() {
    unsafe {
        let mut closed: *mut OvOperatorSum = ptr::null_mut();
        assert_eq!(ov_expand_xi(3, &mut closed), OvStatus::Ok);

        let mut rewritten: *mut OvOperatorSum = ptr::null_mut();
        assert_eq!(ov_power_by_rewrite(3, &mut rewritten), OvStatus::Ok);

        let mut equal = false;
        assert_eq!(
            ov_operator_sum_eq(closed, rewritten, &mut equal),
            OvStatus::Ok
        );
        assert!(equal);

        let mut len = 0usize;
        assert_eq!(ov_operator_sum_len(closed, &mut len), OvStatus::Ok);
        assert_eq!(len, 3);

        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(ov_operator_sum_pretty(closed, &mut text), OvStatus::Ok);
        assert_eq!(take_string(text), "x^3 I^3 - 3 x^2 I^4 + 3 x I^5");

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(ov_operator_sum_json(closed, &mut json), OvStatus::Ok);
        let json = take_string(json);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value[0]["coeff"], "1");
        assert_eq!(value[1]["coeff"], "-3");
        assert_eq!(value[2]["i_pow"], 5);

        ov_operator_sum_free(closed);
        ov_operator_sum_free(rewritten);
    }
}

#[test]
fn null_and_invalid_arguments_are_reported() {
    unsafe {
        assert_eq!(ov_expand_xi(3, ptr::null_mut()), OvStatus::NullPointer);

        let mut out: *mut OvOperatorSum = ptr::null_mut();
        assert_eq!(ov_expand_xi(0, &mut out), OvStatus::InvalidArgument);
        assert!(out.is_null());
        assert_eq!(ov_power_by_rewrite(0, &mut out), OvStatus::InvalidArgument);

        let mut equal = false;
        assert_eq!(
            ov_operator_sum_eq(ptr::null(), ptr::null(), &mut equal),
            OvStatus::NullPointer
        );

        let mut coeff = 0.0;
        let mut exponent = 0.0;
        assert_eq!(
            ov_power_closed_form(2, -1.0, &mut coeff, &mut exponent),
            OvStatus::InvalidArgument
        );
        assert_eq!(
            ov_power_closed_form(2, 1.0, ptr::null_mut(), &mut exponent),
            OvStatus::NullPointer
        );

        // freeing null is a no-op
        ov_operator_sum_free(ptr::null_mut());
        ov_string_free(ptr::null_mut());
    }
}

#[test]
fn scalar_values_cross_the_boundary() {
    unsafe {
        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(ov_bessel_number(3, 2, &mut text), OvStatus::Ok);
        assert_eq!(take_string(text), "15");
        assert_eq!(ov_bessel_number(4, 7, &mut text), OvStatus::Ok);
        assert_eq!(take_string(text), "0");
        assert_eq!(ov_a000806(4, &mut text), OvStatus::Ok);
        assert_eq!(take_string(text), "36");

        let mut coeff = 0.0;
        let mut exponent = 0.0;
        assert_eq!(
            ov_power_closed_form(1, 2.0, &mut coeff, &mut exponent),
            OvStatus::Ok
        );
        assert!((coeff - 0.5).abs() < 1e-14);
        assert_eq!(exponent, 3.0);
    }
}

#[test]
fn closed_forms_serialize_as_json() {
    unsafe {
        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(ov_apply_monomial_json(2, 0, &mut text), OvStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(text)).unwrap();
        assert_eq!(value["kind"], "poly");
        assert_eq!(value["p"][4], "1/3");

        assert_eq!(ov_apply_exp_json(1, &mut text), OvStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(text)).unwrap();
        assert_eq!(value["kind"], "exp");
        assert_eq!(value["p"], serde_json::json!(["0", "1"]));
        assert_eq!(value["q"], serde_json::json!(["0", "-1"]));

        assert_eq!(ov_apply_log1p_json(1, &mut text), OvStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(text)).unwrap();
        assert_eq!(value["kind"], "log1p");

        assert_eq!(ov_apply_exp_json(0, &mut text), OvStatus::InvalidArgument);
    }
}

#[test]
fn suites_run_through_the_boundary() {
    unsafe {
        let name = CString::new("theorem1").unwrap();
        let mut failed = u32::MAX;
        assert_eq!(ov_verify_suite(name.as_ptr(), 8, &mut failed), OvStatus::Ok);
        assert_eq!(failed, 0);

        let bogus = CString::new("bogus").unwrap();
        assert_eq!(
            ov_verify_suite(bogus.as_ptr(), 0, &mut failed),
            OvStatus::InvalidArgument
        );
        assert_eq!(
            ov_verify_suite(ptr::null(), 0, &mut failed),
            OvStatus::NullPointer
        );
    }
}
