//! C ABI for `dunkl_moment`.
//!
//! Sequences and series cross the boundary as opaque handles; each
//! constructor has a matching `*_free`. Fallible calls return a [`DkStatus`]
//! and write results through out-pointers. After a failure,
//! [`dk_last_error_message`] describes it (per thread).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dunkl_moment::bessel::{bessel_k, moment_quadrature, weight};
use dunkl_moment::entire::e_m;
use dunkl_moment::functional_eq::{solve_root_problem, RootProblem};
use dunkl_moment::moment_seq::check_strong_regularity;
use dunkl_moment::{Error, MomentSequence, TruncatedSeries};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Capacity = 3,
    NonConvergence = 4,
    Numerical = 5,
    InvalidInput = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DkComplex {
    pub re: f64,
    pub im: f64,
}

impl From<DkComplex> for Complex64 {
    fn from(z: DkComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for DkComplex {
    fn from(z: Complex64) -> Self {
        DkComplex { re: z.re, im: z.im }
    }
}

/// Opaque moment sequence.
pub struct DkSequence(MomentSequence);

/// Opaque truncated power series.
pub struct DkSeries(TruncatedSeries);

/// Strong-regularity report; `lc_violation` is `-1` when log-convexity holds.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DkSrReport {
    pub lc_ok: bool,
    pub lc_violation: i64,
    pub mg_ok: bool,
    pub a1: f64,
    pub snq_ok: bool,
    pub a2: f64,
    pub snq_tail_bound: f64,
    pub range: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn status_of(e: &Error) -> DkStatus {
    match e {
        Error::Domain(_) => DkStatus::Domain,
        Error::Capacity { .. } => DkStatus::Capacity,
        Error::NonConvergence { .. } => DkStatus::NonConvergence,
        Error::Parse(_) | Error::Io(_) => DkStatus::InvalidInput,
        _ => DkStatus::Numerical,
    }
}

fn run(f: impl FnOnce() -> Result<(), Fail>) -> DkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DkStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer passed as {what}"));
            DkStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            DkStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_series(out: *mut *mut DkSeries, s: TruncatedSeries) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    out.write(Box::into_raw(Box::new(DkSeries(s))));
    Ok(())
}

unsafe fn write_sequence(out: *mut *mut DkSequence, s: MomentSequence) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    out.write(Box::into_raw(Box::new(DkSequence(s))));
    Ok(())
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Dunkl factorials `γ_{p,α}` cached for `p ≤ p_max`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dk_sequence_dunkl(
    alpha: f64,
    p_max: usize,
    out: *mut *mut DkSequence,
) -> DkStatus {
    run(|| write_sequence(out, MomentSequence::dunkl(alpha, p_max)?))
}

/// Factorials `p!` cached for `p ≤ p_max`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dk_sequence_factorial(
    p_max: usize,
    out: *mut *mut DkSequence,
) -> DkStatus {
    run(|| write_sequence(out, MomentSequence::factorial(p_max)))
}

/// Custom sequence from `len` positive values `m(0), …, m(len−1)`.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_sequence_from_values(
    values: *const f64,
    len: usize,
    out: *mut *mut DkSequence,
) -> DkStatus {
    run(|| {
        if values.is_null() {
            return Err(Fail::Null("values"));
        }
        let v = std::slice::from_raw_parts(values, len);
        write_sequence(out, MomentSequence::from_values(v)?)
    })
}

/// # Safety
/// `seq` must be NULL or a handle from a `dk_sequence_*` constructor that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn dk_sequence_free(seq: *mut DkSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// `log m(p)`.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dk_sequence_log_value(
    seq: *const DkSequence,
    p: usize,
    out: *mut f64,
) -> DkStatus {
    run(|| write(out, borrow(seq, "seq")?.0.log_value(p)?, "out"))
}

/// `θ_p = m(p)/m(p−1)` for `p ≥ 1`.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dk_sequence_quotient(
    seq: *const DkSequence,
    p: usize,
    out: *mut f64,
) -> DkStatus {
    run(|| write(out, borrow(seq, "seq")?.0.quotient(p)?, "out"))
}

/// Strong-regularity check on `p ≤ n`.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dk_sequence_check_sr(
    seq: *const DkSequence,
    n: usize,
    out: *mut DkSrReport,
) -> DkStatus {
    run(|| {
        let r = check_strong_regularity(&borrow(seq, "seq")?.0, n)?;
        let report = DkSrReport {
            lc_ok: r.lc_ok,
            lc_violation: r.lc_violation.map_or(-1, |p| p as i64),
            mg_ok: r.mg_ok,
            a1: r.a1,
            snq_ok: r.snq_ok,
            a2: r.a2,
            snq_tail_bound: r.snq_tail_bound,
            range: r.range as u64,
        };
        write(out, report, "out")
    })
}

/// `E_m(z) = Σ z^p / m(p)` to relative tolerance `tol`.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dk_exp_m(
    seq: *const DkSequence,
    z: DkComplex,
    tol: f64,
    out: *mut DkComplex,
) -> DkStatus {
    run(|| {
        let v = e_m(z.into(), &borrow(seq, "seq")?.0, tol)?.value;
        write(out, v.into(), "out")
    })
}

/// Series with coefficients `coeffs[0..len]` (`len ≥ 1`).
///
/// # Safety
/// `coeffs` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_series_new(
    coeffs: *const DkComplex,
    len: usize,
    out: *mut *mut DkSeries,
) -> DkStatus {
    run(|| {
        if coeffs.is_null() {
            return Err(Fail::Null("coeffs"));
        }
        let c = std::slice::from_raw_parts(coeffs, len)
            .iter()
            .map(|&z| z.into())
            .collect();
        write_series(out, TruncatedSeries::new(c)?)
    })
}

/// # Safety
/// `series` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn dk_series_free(series: *mut DkSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Number of stored coefficients (order + 1), or 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dk_series_len(series: *const DkSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.coeffs().len())
}

/// # Safety
/// `series` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dk_series_coeff(
    series: *const DkSeries,
    index: usize,
    out: *mut DkComplex,
) -> DkStatus {
    run(|| {
        let s = &borrow(series, "series")?.0;
        let c = *s.coeffs().get(index).ok_or(Error::Capacity {
            index,
            max: s.order(),
        })?;
        write(out, c.into(), "out")
    })
}

/// Moment derivative `∂_m`, acting on coefficients as `c_p ↦ c_{p+1} θ_{p+1}`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_series_moment_derivative(
    series: *const DkSeries,
    seq: *const DkSequence,
    out: *mut *mut DkSeries,
) -> DkStatus {
    run(|| {
        let s = borrow(series, "series")?
            .0
            .moment_derivative(&borrow(seq, "seq")?.0)?;
        write_series(out, s)
    })
}

/// Dunkl operator `Λ_α` applied through its reflection formula.
///
/// # Safety
/// `series` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_series_dunkl_apply(
    series: *const DkSeries,
    alpha: f64,
    out: *mut *mut DkSeries,
) -> DkStatus {
    run(|| write_series(out, borrow(series, "series")?.0.dunkl_apply_direct(alpha)?))
}

/// `τ_{y,m}` applied to the series.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_series_m_translate(
    series: *const DkSeries,
    seq: *const DkSequence,
    y: DkComplex,
    out: *mut *mut DkSeries,
) -> DkStatus {
    run(|| {
        let s = borrow(series, "series")?
            .0
            .m_translate(y.into(), &borrow(seq, "seq")?.0)?;
        write_series(out, s)
    })
}

/// Even translation `T_{y,m}` applied to the series.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_series_even_translate(
    series: *const DkSeries,
    seq: *const DkSequence,
    y: DkComplex,
    out: *mut *mut DkSeries,
) -> DkStatus {
    run(|| {
        let s = borrow(series, "series")?
            .0
            .even_translate(y.into(), &borrow(seq, "seq")?.0)?;
        write_series(out, s)
    })
}

/// # Safety
/// `series` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dk_series_evaluate(
    series: *const DkSeries,
    z: DkComplex,
    out: *mut DkComplex,
) -> DkStatus {
    run(|| {
        write(
            out,
            borrow(series, "series")?.0.evaluate(z.into()).into(),
            "out",
        )
    })
}

/// `K_ν(t)` for `t > 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_bessel_k(nu: f64, t: f64, out: *mut f64) -> DkStatus {
    run(|| write(out, bessel_k(nu, t)?, "out"))
}

/// Hamburger weight `ω_α(t)` for `−1 < α < −1/2`, `t ≠ 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_hamburger_weight(alpha: f64, t: f64, out: *mut f64) -> DkStatus {
    run(|| write(out, weight(alpha, t)?.value, "out"))
}

/// `∫ t^n ω_α(t) dt` and its error estimate.
///
/// # Safety
/// `value` and `error` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_moment_quadrature(
    n: usize,
    alpha: f64,
    value: *mut f64,
    error: *mut f64,
) -> DkStatus {
    run(|| {
        let q = moment_quadrature(n, alpha)?;
        write(value, q.value, "value")?;
        write(error, q.error_estimate, "error")
    })
}

/// Root search for a JSON problem
/// `{c, omega, sequence: {family, alpha}, box: {re_min, re_max, im_min, im_max}, tol}`.
/// On success `*out` receives a JSON report to be released with
/// [`dk_string_free`].
///
/// # Safety
/// `problem` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dk_find_roots_json(
    problem: *const c_char,
    out: *mut *mut c_char,
) -> DkStatus {
    run(|| {
        if problem.is_null() {
            return Err(Fail::Null("problem"));
        }
        let text = CStr::from_ptr(problem)
            .to_str()
            .map_err(|e| Error::Parse(format!("problem is not UTF-8: {e}")))?;
        let report = solve_root_problem(&RootProblem::from_json(text)?)?;
        let json = serde_json::to_string(&report).map_err(|e| Error::Parse(e.to_string()))?;
        let c = CString::new(json).map_err(|e| Error::Parse(e.to_string()))?;
        write(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
