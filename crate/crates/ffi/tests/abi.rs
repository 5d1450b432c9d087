use std::ffi::CStr;
use std::ptr;

use snowflake_ffi::*;

#[test]
fn params_round_trip() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(sf_params_new(2.5, 0.5, &mut h), SfStatus::Ok);
        let (mut n, mut alpha) = (0usize, 0.0);
        assert_eq!(sf_params_derived(h, &mut n, &mut alpha), SfStatus::Ok);
        assert_eq!(n, 2);
        assert!((alpha - (6.0 / 2.5 - 0.5)).abs() < 1e-15);
        sf_params_free(h);
        sf_params_free(ptr::null_mut());

        let mut bad = ptr::null_mut();
        assert_eq!(
            sf_params_new(1.0, 0.5, &mut bad),
            SfStatus::InvalidParameter
        );
        assert!(bad.is_null());
    }
}

#[test]
fn koranyi_functions() {
    let x = [1.0, 0.0, 0.0];
    let y = [0.0, 0.0, 1.0];
    let mut out = 0.0;
    unsafe {
        assert_eq!(sf_koranyi_norm(x.as_ptr(), 3, &mut out), SfStatus::Ok);
        assert_eq!(out, 1.0);
        assert_eq!(
            sf_koranyi_distance(x.as_ptr(), y.as_ptr(), 3, &mut out),
            SfStatus::Ok
        );
        assert!((out - 2f64.powf(0.25)).abs() < 1e-15);
        assert_eq!(
            sf_koranyi_norm(x.as_ptr(), 2, &mut out),
            SfStatus::InvalidParameter
        );
        assert_eq!(
            sf_koranyi_norm(ptr::null(), 3, &mut out),
            SfStatus::NullPointer
        );
        assert_eq!(
            sf_koranyi_norm(x.as_ptr(), 3, ptr::null_mut()),
            SfStatus::NullPointer
        );
    }
}

#[test]
fn integrals_and_distances() {
    let (mut v, mut e) = (0.0, 0.0);
    unsafe {
        assert_eq!(
            sf_lambda_integral(0.0, 1.0, 2.0, 0.5, 1e-10, &mut v, &mut e),
            SfStatus::Ok
        );
        assert!((v - std::f64::consts::TAU.sqrt()).abs() < 1e-8);
        assert_eq!(
            sf_lambda_integral(-1.0, 1.0, 2.0, 0.5, 1e-10, &mut v, &mut e),
            SfStatus::InvalidParameter
        );

        assert_eq!(sf_ball_volume(1, &mut v), SfStatus::Ok);
        assert!(v > 0.0);

        let mut h = ptr::null_mut();
        assert_eq!(sf_params_new(2.0, 0.5, &mut h), SfStatus::Ok);
        let (x, y) = ([0.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
        assert_eq!(
            sf_repr_distance(h, x.as_ptr(), y.as_ptr(), 3, 1e-10, &mut v, &mut e),
            SfStatus::Ok
        );
        assert!((v - 0.5f64.sqrt() * std::f64::consts::TAU.powf(0.25)).abs() < 1e-8);
        assert_eq!(
            sf_repr_distance(
                ptr::null(),
                x.as_ptr(),
                y.as_ptr(),
                3,
                1e-10,
                &mut v,
                &mut e
            ),
            SfStatus::NullPointer
        );

        let z = [0.5, 0.0, 0.2, 0.1, 0.3];
        let (mut m1, mut s1, mut m2, mut s2) = (0.0, 0.0, 0.0, 0.0);
        assert_eq!(
            sf_kernel_norm(h, z.as_ptr(), 5, 50_000, 3, &mut m1, &mut s1),
            SfStatus::Ok
        );
        assert_eq!(
            sf_kernel_norm(h, z.as_ptr(), 5, 50_000, 3, &mut m2, &mut s2),
            SfStatus::Ok
        );
        assert!(m1 > 0.0 && s1 > 0.0);
        assert_eq!((m1.to_bits(), s1.to_bits()), (m2.to_bits(), s2.to_bits()));
        assert_eq!(
            sf_kernel_norm(h, x.as_ptr(), 3, 50_000, 3, &mut m1, &mut s1),
            SfStatus::DimensionMismatch
        );
        sf_params_free(h);
    }
}

#[test]
fn word_ball_handle() {
    unsafe {
        let mut b = ptr::null_mut();
        assert_eq!(sf_word_ball_new(3, 1_000_000, &mut b), SfStatus::Ok);
        let mut size = 0usize;
        assert_eq!(sf_word_ball_size(b, 1, &mut size), SfStatus::Ok);
        assert_eq!(size, 5);
        assert_eq!(sf_word_ball_size(b, 2, &mut size), SfStatus::Ok);
        assert_eq!(size, 17);
        assert_eq!(
            sf_word_ball_size(b, 4, &mut size),
            SfStatus::InvalidParameter
        );
        sf_word_ball_free(b);

        assert_eq!(sf_word_ball_new(40, 100, &mut b), SfStatus::BudgetExceeded);
    }
}

#[test]
fn status_messages_are_static_strings() {
    for s in [SfStatus::Ok, SfStatus::BudgetExceeded, SfStatus::Panic] {
        let msg = unsafe { CStr::from_ptr(sf_status_message(s)) };
        assert!(!msg.to_str().unwrap().is_empty());
    }
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/snowflake.h"))
            .unwrap();
    for name in [
        "sf_params_new",
        "sf_repr_distance",
        "sf_kernel_norm",
        "sf_word_ball_free",
        "SF_STATUS_BUDGET_EXCEEDED",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
