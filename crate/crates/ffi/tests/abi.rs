use std::ffi::{CStr, CString};
use std::ptr;

use dunkl_moment_ffi::*;

fn last_error() -> String {
    let p = dk_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn dunkl_sequence_values() {
    unsafe {
        let mut seq = ptr::null_mut();
        assert_eq!(dk_sequence_dunkl(0.5, 64, &mut seq), DkStatus::Ok);
        let mut q = 0.0;
        // θ_3 = 3 + 2α + 1
        assert_eq!(dk_sequence_quotient(seq, 3, &mut q), DkStatus::Ok);
        assert!((q - 5.0).abs() < 1e-14);
        assert_eq!(dk_sequence_quotient(seq, 4, &mut q), DkStatus::Ok);
        assert!((q - 4.0).abs() < 1e-14);
        let mut lv = 0.0;
        assert_eq!(dk_sequence_log_value(seq, 0, &mut lv), DkStatus::Ok);
        assert_eq!(lv, 0.0);
        let mut report = std::mem::zeroed::<DkSrReport>();
        assert_eq!(dk_sequence_check_sr(seq, 100, &mut report), DkStatus::Ok);
        assert!(!report.lc_ok);
        assert_eq!(report.lc_violation, 1);
        dk_sequence_free(seq);
    }
}

#[test]
fn bad_alpha_reports_domain() {
    unsafe {
        let mut seq = ptr::null_mut();
        assert_eq!(dk_sequence_dunkl(-1.5, 16, &mut seq), DkStatus::Domain);
        assert!(seq.is_null());
        assert!(last_error().contains("alpha"));
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut x = 0.0;
        assert_eq!(
            dk_sequence_quotient(ptr::null(), 1, &mut x),
            DkStatus::NullPointer
        );
        assert_eq!(
            dk_bessel_k(0.5, 1.0, ptr::null_mut()),
            DkStatus::NullPointer
        );
        assert_eq!(dk_series_len(ptr::null()), 0);
        dk_series_free(ptr::null_mut());
        dk_sequence_free(ptr::null_mut());
        dk_string_free(ptr::null_mut());
    }
}

#[test]
fn classical_exponential() {
    unsafe {
        let mut seq = ptr::null_mut();
        assert_eq!(dk_sequence_factorial(256, &mut seq), DkStatus::Ok);
        let mut out = DkComplex { re: 0.0, im: 0.0 };
        assert_eq!(
            dk_exp_m(seq, DkComplex { re: 1.0, im: 0.0 }, 1e-15, &mut out),
            DkStatus::Ok
        );
        assert!((out.re - std::f64::consts::E).abs() < 1e-14);
        assert!(out.im.abs() < 1e-15);
        dk_sequence_free(seq);
    }
}

#[test]
fn series_operators_agree() {
    unsafe {
        let alpha = 0.3;
        let mut seq = ptr::null_mut();
        assert_eq!(dk_sequence_dunkl(alpha, 64, &mut seq), DkStatus::Ok);
        let coeffs: Vec<DkComplex> = (0..8)
            .map(|k| DkComplex {
                re: 1.0 / (k as f64 + 1.0),
                im: k as f64 * 0.1,
            })
            .collect();
        let mut s = ptr::null_mut();
        assert_eq!(
            dk_series_new(coeffs.as_ptr(), coeffs.len(), &mut s),
            DkStatus::Ok
        );
        assert_eq!(dk_series_len(s), 8);

        let mut d1 = ptr::null_mut();
        let mut d2 = ptr::null_mut();
        assert_eq!(dk_series_moment_derivative(s, seq, &mut d1), DkStatus::Ok);
        assert_eq!(dk_series_dunkl_apply(s, alpha, &mut d2), DkStatus::Ok);
        for i in 0..7 {
            let mut a = DkComplex { re: 0.0, im: 0.0 };
            let mut b = a;
            assert_eq!(dk_series_coeff(d1, i, &mut a), DkStatus::Ok);
            assert_eq!(dk_series_coeff(d2, i, &mut b), DkStatus::Ok);
            assert!(
                (a.re - b.re).abs() < 1e-12 && (a.im - b.im).abs() < 1e-12,
                "coefficient {i}"
            );
        }
        let mut c = DkComplex { re: 0.0, im: 0.0 };
        assert_eq!(dk_series_coeff(d1, 100, &mut c), DkStatus::Capacity);

        let mut t = ptr::null_mut();
        assert_eq!(
            dk_series_m_translate(s, seq, DkComplex { re: 0.0, im: 0.0 }, &mut t),
            DkStatus::Ok
        );
        let z = DkComplex { re: 0.4, im: -0.2 };
        let (mut v0, mut v1) = (c, c);
        dk_series_evaluate(s, z, &mut v0);
        dk_series_evaluate(t, z, &mut v1);
        assert!((v0.re - v1.re).abs() < 1e-14 && (v0.im - v1.im).abs() < 1e-14);

        let mut e = ptr::null_mut();
        assert_eq!(
            dk_series_even_translate(s, seq, DkComplex { re: 0.5, im: 0.0 }, &mut e),
            DkStatus::Ok
        );
        assert!(dk_series_len(e) > 0);

        for h in [d1, d2, t, e, s] {
            dk_series_free(h);
        }
        dk_sequence_free(seq);
    }
}

#[test]
fn bessel_and_weight() {
    unsafe {
        let mut k = 0.0;
        assert_eq!(dk_bessel_k(0.5, 2.0, &mut k), DkStatus::Ok);
        let exact = (std::f64::consts::PI / 4.0).sqrt() * (-2.0f64).exp();
        assert!((k - exact).abs() < 1e-14 * exact);

        let mut w = 0.0;
        assert_eq!(dk_hamburger_weight(-0.75, 1.0, &mut w), DkStatus::Ok);
        assert!(w > 0.0);
        assert_eq!(dk_hamburger_weight(0.5, 1.0, &mut w), DkStatus::Domain);

        let (mut v, mut err) = (0.0, 0.0);
        assert_eq!(
            dk_moment_quadrature(2, -0.75, &mut v, &mut err),
            DkStatus::Ok
        );
        // γ_2 = 4(α+1)
        assert!((v - 1.0).abs() < 1e-9, "{v}");
    }
}

#[test]
fn root_search_json() {
    let problem = CString::new(
        r#"{"c":[[1,0],[-1,0]],"omega":[[1,0],[0,0]],
            "box":{"re_min":-1,"re_max":1,"im_min":-7,"im_max":7},"tol":1e-10}"#,
    )
    .unwrap();
    unsafe {
        let mut out = ptr::null_mut();
        let status = dk_find_roots_json(problem.as_ptr(), &mut out);
        assert_eq!(status, DkStatus::Ok, "{}", last_error());
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        dk_string_free(out);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["roots"].as_array().unwrap().len(), 3);

        let bad = CString::new("{not json").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            dk_find_roots_json(bad.as_ptr(), &mut out),
            DkStatus::InvalidInput
        );
        assert!(out.is_null());
    }
}
