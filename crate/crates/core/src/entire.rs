//! Generalized exponentials and growth diagnostics.
//!
//! `E_m(z) = Σ z^p/m(p)` is summed adaptively: the sum stops at the first `p`
//! where the next quotient dominates (`|z|/θ_{p+1} < 1/2`) and the current
//! term is below `tol` relative to the partial sum, so the remainder is
//! bounded by twice the first omitted term.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::moment_seq::{dunkl_quotient, MomentSequence};
use crate::numeric::{from_log_polar, linear_fit, ComplexSum};
use crate::series::TruncatedSeries;

/// Maximum number of series terms before reporting non-convergence.
pub const TERM_CAP: usize = 10_000;

/// A series value with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub terms_used: usize,
    /// Upper bound on the modulus of the omitted tail.
    pub bound_on_tail: f64,
}

impl EvalResult {
    fn exact(value: Complex64) -> Self {
        Self {
            value,
            terms_used: 0,
            bound_on_tail: 0.0,
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// Sums `Σ_{p≥0} t_p` where `t_{p+1} = t_p · ratio(p+1)` and `|ratio(q)|`
/// is eventually nonincreasing.
fn geometric_tail_sum(
    first: Complex64,
    tol: f64,
    ratio: impl Fn(usize) -> Result<Complex64>,
    modulus: f64,
) -> Result<EvalResult> {
    let mut acc = ComplexSum::new();
    let mut term = first;
    acc.add(term);
    let mut p = 0usize;
    loop {
        let r = ratio(p + 1)?;
        let partial = acc.value().norm();
        if r.norm() < 0.5 && term.norm() < tol * partial.max(1.0) {
            return Ok(EvalResult {
                value: acc.value(),
                terms_used: p + 1,
                bound_on_tail: 2.0 * (term * r).norm(),
            });
        }
        if p + 1 >= TERM_CAP {
            return Err(Error::NonConvergence {
                cap: TERM_CAP,
                modulus,
            });
        }
        term *= r;
        p += 1;
        acc.add(term);
    }
}

/// `E_m(z) = Σ_{p≥0} z^p / m(p)` by direct summation.
pub fn e_m(z: Complex64, seq: &MomentSequence, tol: f64) -> Result<EvalResult> {
    check_tol(tol)?;
    let first = Complex64::new((-seq.log_value(0)?).exp(), 0.0);
    geometric_tail_sum(first, tol, |q| Ok(z / seq.quotient(q)?), z.norm())
}

/// `E_m(z)`, switching to `exp(z)` when `m(p) = p!` exactly.
///
/// The direct sum loses all relative accuracy where `E_m` is exponentially
/// small (the classical left half-plane); the closed form does not.
pub fn e_m_stable(z: Complex64, seq: &MomentSequence, tol: f64) -> Result<EvalResult> {
    if seq.is_classical() {
        check_tol(tol)?;
        return Ok(EvalResult::exact(z.exp()));
    }
    e_m(z, seq, tol)
}

/// Classical derivative `E_m′(z) = Σ_{p≥1} p z^{p−1}/m(p)`, term by term.
pub fn e_m_derivative(z: Complex64, seq: &MomentSequence, tol: f64) -> Result<EvalResult> {
    check_tol(tol)?;
    if seq.is_classical() {
        return Ok(EvalResult::exact(z.exp()));
    }
    // t_q = (q+1) z^q / m(q+1)
    let first = Complex64::new((-seq.log_value(1)?).exp(), 0.0);
    geometric_tail_sum(
        first,
        tol,
        |q| Ok(z * ((q + 1) as f64 / (q as f64 * seq.quotient(q + 1)?))),
        z.norm(),
    )
}

/// `𝓘_α(z) = Σ z^{2p}/γ_{2p,α}`, the even part of the Dunkl exponential.
pub fn i_alpha(z: Complex64, alpha: f64, tol: f64) -> Result<EvalResult> {
    check_tol(tol)?;
    let z2 = z * z;
    geometric_tail_sum(
        Complex64::new(1.0, 0.0),
        tol,
        |q| Ok(z2 / (dunkl_quotient(2 * q, alpha)? * dunkl_quotient(2 * q - 1, alpha)?)),
        z.norm(),
    )
}

/// `G_α(z) = z·𝓘_{α+1}(z)`.
pub fn g_alpha(z: Complex64, alpha: f64, tol: f64) -> Result<EvalResult> {
    let inner = i_alpha(z, alpha + 1.0, tol)?;
    Ok(EvalResult {
        value: z * inner.value,
        terms_used: inner.terms_used,
        bound_on_tail: z.norm() * inner.bound_on_tail,
    })
}

/// `2(α+1)·Σ z^{2p+1}/γ_{2p+1,α}`, an independent route to `G_α`.
pub fn g_alpha_odd_series(z: Complex64, alpha: f64, tol: f64) -> Result<EvalResult> {
    check_tol(tol)?;
    let z2 = z * z;
    let first = z / dunkl_quotient(1, alpha)? * (2.0 * (alpha + 1.0));
    geometric_tail_sum(
        first,
        tol,
        |q| Ok(z2 / (dunkl_quotient(2 * q + 1, alpha)? * dunkl_quotient(2 * q, alpha)?)),
        z.norm(),
    )
}

/// `E_α(z) = 𝓘_α(z) + G_α(z)/(2(α+1))`.
pub fn e_alpha_split(z: Complex64, alpha: f64, tol: f64) -> Result<EvalResult> {
    let i = i_alpha(z, alpha, tol)?;
    let g = g_alpha(z, alpha, tol)?;
    let k = 2.0 * (alpha + 1.0);
    Ok(EvalResult {
        value: i.value + g.value / k,
        terms_used: i.terms_used + g.terms_used,
        bound_on_tail: i.bound_on_tail + g.bound_on_tail / k,
    })
}

/// Chain function `E_{m,h}(λz) = Σ_{p≥h} C(p,h) λ^{p−h} z^p / m(p)`.
///
/// Stops after 8 consecutive nonincreasing terms below tolerance once the
/// ratio bound `|λz|(p+1)/((p+1−h)θ_{p+1}) < 1/2` holds.
pub fn e_alpha_h(
    lambda: Complex64,
    z: Complex64,
    h: usize,
    seq: &MomentSequence,
    tol: f64,
) -> Result<EvalResult> {
    check_tol(tol)?;
    let zero = Complex64::new(0.0, 0.0);
    if z == zero {
        let v = if h == 0 {
            (-seq.log_value(0)?).exp()
        } else {
            0.0
        };
        return Ok(EvalResult::exact(Complex64::new(v, 0.0)));
    }
    let w = lambda * z;
    let mut term = from_log_polar(
        h as f64 * z.norm().ln() - seq.log_value(h)?,
        h as f64 * z.arg(),
    );
    let mut acc = ComplexSum::new();
    acc.add(term);
    let ratio = |q: usize| -> Result<Complex64> {
        Ok(w * (q as f64 / ((q - h) as f64 * seq.quotient(q)?)))
    };
    let mut run = 0usize;
    let mut p = h;
    loop {
        let r = ratio(p + 1)?;
        if run >= 8 && r.norm() < 0.5 {
            return Ok(EvalResult {
                value: acc.value(),
                terms_used: p - h + 1,
                bound_on_tail: 2.0 * (term * r).norm(),
            });
        }
        if p - h + 1 >= TERM_CAP {
            return Err(Error::NonConvergence {
                cap: TERM_CAP,
                modulus: w.norm(),
            });
        }
        let next = term * r;
        p += 1;
        acc.add(next);
        if next.norm() <= term.norm() && next.norm() < tol * acc.value().norm().max(1.0) {
            run += 1;
        } else {
            run = 0;
        }
        term = next;
    }
}

/// [`e_alpha_h`] with the closed form `z^h e^{λz}/h!` for factorial moments.
pub fn e_alpha_h_stable(
    lambda: Complex64,
    z: Complex64,
    h: usize,
    seq: &MomentSequence,
    tol: f64,
) -> Result<EvalResult> {
    if seq.is_classical() {
        check_tol(tol)?;
        let scale = (-ln_gamma(h as f64 + 1.0)).exp();
        return Ok(EvalResult::exact(
            z.powu(h as u32) * (lambda * z).exp() * scale,
        ));
    }
    e_alpha_h(lambda, z, h, seq, tol)
}

/// Taylor coefficients of `E_{m,h}(λz)` up to `order`.
pub fn chain_series(
    lambda: Complex64,
    h: usize,
    seq: &MomentSequence,
    order: usize,
) -> Result<TruncatedSeries> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    let (ll, phase) = (lambda.norm().ln(), lambda.arg());
    let log_h = ln_gamma(h as f64 + 1.0);
    for (p, slot) in coeffs.iter_mut().enumerate().skip(h) {
        let k = p - h;
        if k > 0 && lambda.norm() == 0.0 {
            continue;
        }
        let log_binom = ln_gamma(p as f64 + 1.0) - log_h - ln_gamma(k as f64 + 1.0);
        let lw = if k == 0 { 0.0 } else { k as f64 * ll };
        *slot = from_log_polar(log_binom + lw - seq.log_value(p)?, k as f64 * phase);
    }
    TruncatedSeries::new(coeffs)
}

/// Sample of the generalized indicator along one ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSample {
    pub theta: f64,
    pub h: f64,
}

/// Finite-radius estimates of order, type and indicator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub radii: Vec<f64>,
    /// `ln M_f(r)`, made nondecreasing by a running maximum.
    pub log_max_modulus: Vec<f64>,
    pub rho: f64,
    pub sigma: f64,
    pub indicator: Vec<IndicatorSample>,
    /// Radii at which some sample overflowed; excluded from the fits.
    pub saturated: Vec<f64>,
}

/// Points sampled per circle when estimating `M_f(r)`.
pub const CIRCLE_SAMPLES: usize = 256;

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(Error::Domain(
            "radii must be positive, strictly increasing, at least two".into(),
        ));
    }
    Ok(())
}

/// Estimates `M_f(r)` on each circle, the order `ρ̂` (least-squares slope of
/// `ln⁺ln⁺ M_f` against `ln r` on the top half of the grid), the type
/// `σ̂ = ln⁺ M_f(r_max)/r_max^ρ̂`, and the indicator along `directions`
/// using the two largest usable radii.
pub fn growth_scan(
    f: impl Fn(Complex64) -> Complex64,
    radii: &[f64],
    directions: &[f64],
) -> Result<GrowthReport> {
    check_radii(radii)?;
    if directions.iter().any(|t| !(-PI..=PI).contains(t)) {
        return Err(Error::Domain("directions must lie in [-pi, pi]".into()));
    }
    let mut log_max = Vec::with_capacity(radii.len());
    let mut saturated = Vec::new();
    let mut running = f64::NEG_INFINITY;
    for &r in radii {
        let mut best = 0.0_f64;
        let mut overflow = false;
        for k in 0..CIRCLE_SAMPLES {
            let theta = 2.0 * PI * k as f64 / CIRCLE_SAMPLES as f64;
            let v = f(Complex64::from_polar(r, theta)).norm();
            if v.is_finite() {
                best = best.max(v);
            } else {
                overflow = true;
            }
        }
        if overflow {
            saturated.push(r);
        }
        running = running.max(best.ln());
        log_max.push(running);
    }

    let usable: Vec<usize> = (0..radii.len())
        .filter(|&i| !saturated.contains(&radii[i]) && log_max[i].is_finite())
        .collect();
    let top: Vec<usize> = if usable.len() >= 4 {
        usable[usable.len() / 2..].to_vec()
    } else {
        usable.clone()
    };
    // ln⁺(ln⁺ M)
    let xs: Vec<f64> = top.iter().map(|&i| radii[i].ln()).collect();
    let ys: Vec<f64> = top
        .iter()
        .map(|&i| {
            if log_max[i] > 1.0 {
                log_max[i].ln()
            } else {
                0.0
            }
        })
        .collect();
    let rho = linear_fit(&xs, &ys)
        .map(|(_, b, _)| b.max(0.0))
        .unwrap_or(0.0);
    let sigma = usable
        .last()
        .map(|&i| log_max[i].max(0.0) / radii[i].powf(rho))
        .unwrap_or(0.0);

    let outer: Vec<f64> = usable.iter().rev().take(2).map(|&i| radii[i]).collect();
    let indicator = directions
        .iter()
        .map(|&theta| {
            let h = outer
                .iter()
                .map(|&r| f(Complex64::from_polar(r, theta)).norm().ln() / r.powf(rho))
                .fold(f64::NEG_INFINITY, f64::max);
            IndicatorSample { theta, h }
        })
        .collect();

    Ok(GrowthReport {
        radii: radii.to_vec(),
        log_max_modulus: log_max,
        rho,
        sigma,
        indicator,
        saturated,
    })
}

/// Algebraic decay fit `ln|f(re^{iθ})| ≈ ln k₅ − β ln r` along one ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub theta: f64,
    pub beta: f64,
    pub log_k5: f64,
    pub residual: f64,
    pub log_magnitudes: Vec<f64>,
    /// Log-magnitudes strictly decrease over the top half of the grid.
    pub decaying: bool,
}

pub fn decay_scan(
    f: impl Fn(Complex64) -> Complex64,
    theta: f64,
    radii: &[f64],
) -> Result<DecayReport> {
    check_radii(radii)?;
    let samples: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| (r, f(Complex64::from_polar(r, theta)).norm().ln()))
        .filter(|(_, l)| l.is_finite())
        .collect();
    let xs: Vec<f64> = samples.iter().map(|(r, _)| r.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, l)| *l).collect();
    let (log_k5, slope, residual) = linear_fit(&xs, &ys).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
    let half = &ys[ys.len() / 2..];
    let decaying = half.len() >= 2 && half.windows(2).all(|w| w[1] < w[0]);
    Ok(DecayReport {
        theta,
        beta: -slope,
        log_k5,
        residual,
        log_magnitudes: ys,
        decaying,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment_seq::DEFAULT_P_MAX;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gamma(alpha: f64) -> MomentSequence {
        MomentSequence::dunkl(alpha, DEFAULT_P_MAX).unwrap()
    }

    #[test]
    fn e_m_examples() {
        let g = gamma(0.4);
        assert_eq!(e_m(c(0.0, 0.0), &g, 1e-14).unwrap().value, c(1.0, 0.0));
        let e = e_m(c(1.0, 0.0), &gamma(-0.5), 1e-16).unwrap().value;
        assert!((e.re - std::f64::consts::E).abs() < 1e-13 && e.im == 0.0);
        let z = c(2.5, 0.0);
        let direct = e_m(z, &gamma(0.0), 1e-16).unwrap().value;
        let split = e_alpha_split(z, 0.0, 1e-16).unwrap().value;
        assert!((direct - split).norm() < 1e-12 * direct.norm());
        assert!(e_m(z, &g, 0.0).is_err());
    }

    #[test]
    fn e_m_reports_non_convergence() {
        // θ_p = 1: quotients never dominate |z| = 3
        let seq = MomentSequence::from_values(&vec![1.0; 20_000]).unwrap();
        assert!(matches!(
            e_m(c(3.0, 0.0), &seq, 1e-10),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn even_odd_parts() {
        assert_eq!(i_alpha(c(0.0, 0.0), 0.7, 1e-14).unwrap().value, c(1.0, 0.0));
        let z = c(1.7, 0.0);
        let g = gamma(-0.3);
        let ep = e_m(z, &g, 1e-16).unwrap().value;
        let em = e_m(-z, &g, 1e-16).unwrap().value;
        let i = i_alpha(z, -0.3, 1e-16).unwrap().value;
        assert!(((ep + em) / 2.0 - i).norm() < 1e-12 * i.norm());
        let i = i_alpha(c(0.9, 0.0), -0.5, 1e-16).unwrap().value;
        assert!((i.re - 0.9f64.cosh()).abs() < 1e-12);
        let z = c(0.8, -1.3);
        let a = g_alpha(z, 0.25, 1e-16).unwrap().value;
        let b = g_alpha_odd_series(z, 0.25, 1e-16).unwrap().value;
        assert!((a - b).norm() < 1e-11 * a.norm());
    }

    #[test]
    fn chain_function_examples() {
        let g0 = gamma(0.0);
        let z = c(0.7, 0.2);
        let lam = c(-1.1, 0.5);
        let a = e_alpha_h(lam, z, 0, &g0, 1e-16).unwrap().value;
        let b = e_m(lam * z, &g0, 1e-16).unwrap().value;
        assert!((a - b).norm() < 1e-14);
        let v = e_alpha_h(c(0.0, 0.0), z, 2, &g0, 1e-16).unwrap().value;
        assert!((v - z * z / 4.0).norm() < 1e-15);
        let v = e_alpha_h(c(1.0, 0.0), c(1.0, 0.0), 1, &gamma(-0.5), 1e-16)
            .unwrap()
            .value;
        assert!((v.re - std::f64::consts::E).abs() < 1e-13);
        let s = e_alpha_h_stable(c(1.0, 0.0), c(1.0, 0.0), 1, &gamma(-0.5), 1e-16)
            .unwrap()
            .value;
        assert!((s.re - std::f64::consts::E).abs() < 1e-14);
    }

    #[test]
    fn chain_series_matches_evaluator() {
        let g = gamma(-0.4);
        let lam = c(0.3, -1.2);
        for h in 0..4 {
            let s = chain_series(lam, h, &g, 80).unwrap();
            let z = c(0.9, 0.4);
            let a = s.evaluate(z);
            let b = e_alpha_h(lam, z, h, &g, 1e-16).unwrap().value;
            assert!((a - b).norm() < 1e-13 * b.norm().max(1.0), "h={h}");
        }
    }

    #[test]
    fn tail_bound_is_honest() {
        let g = gamma(-0.6);
        for &tol in &[1e-4, 1e-6, 1e-8] {
            for z in [c(3.0, 1.0), c(-2.0, 4.0), c(0.3, 0.0)] {
                let coarse = e_m(z, &g, tol).unwrap();
                let fine = e_m(z, &g, tol / 100.0).unwrap();
                assert!((coarse.value - fine.value).norm() <= coarse.bound_on_tail);
            }
        }
    }

    #[test]
    fn growth_of_exp() {
        let radii: Vec<f64> = (1..=10).map(|k| 5.0 * k as f64).collect();
        let dirs = [0.0, PI / 2.0, PI];
        let rep = growth_scan(|z| z.exp(), &radii, &dirs).unwrap();
        assert!((rep.rho - 1.0).abs() < 0.05, "rho {}", rep.rho);
        assert!((rep.sigma - 1.0).abs() < 0.1, "sigma {}", rep.sigma);
        assert!((rep.indicator[0].h - 1.0).abs() < 1e-9);
        assert!(rep.log_max_modulus.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn growth_of_dunkl_exponential() {
        let g = gamma(-0.25);
        let radii: Vec<f64> = (1..=8).map(|k| 5.0 * k as f64).collect();
        let rep = growth_scan(|z| e_m(z * 2.0, &g, 1e-15).unwrap().value, &radii, &[]).unwrap();
        assert!((rep.rho - 1.0).abs() < 0.1, "rho {}", rep.rho);
        assert!(rep.sigma <= 2.0 * 1.15, "sigma {}", rep.sigma);
    }

    #[test]
    fn growth_of_polynomial_is_order_zero() {
        let radii: Vec<f64> = (1..=12).map(|k| 10f64.powi(k)).collect();
        let rep = growth_scan(|z| z * z * z, &radii, &[]).unwrap();
        assert!(rep.rho < 0.1, "rho {}", rep.rho);
    }

    #[test]
    fn growth_flags_saturation() {
        let radii = [10.0, 100.0, 800.0];
        let rep = growth_scan(|z| z.exp(), &radii, &[]).unwrap();
        assert_eq!(rep.saturated, vec![800.0]);
        assert!(growth_scan(|z| z, &[1.0], &[]).is_err());
        assert!(growth_scan(|z| z, &[1.0, 2.0], &[4.0]).is_err());
    }

    #[test]
    fn decay_along_negative_axis() {
        let radii: Vec<f64> = (1..=12).map(|k| 5.0 * k as f64).collect();
        let rep = decay_scan(|z| z.exp(), PI, &radii).unwrap();
        assert!(rep.decaying && rep.beta > 0.0);
        let g = gamma(-0.5);
        let rep = decay_scan(|z| e_m_stable(z, &g, 1e-15).unwrap().value, PI, &radii).unwrap();
        assert!(rep.decaying);
    }

    #[test]
    fn dunkl_exponential_grows_on_negative_axis() {
        // high-precision reference values of E_{-1/4}(-r)
        let g = gamma(-0.25);
        for (r, want) in [(5.0, 2.2929533), (10.0, 133.96378), (20.0, 1208007.6)] {
            let v = e_m(c(-r, 0.0), &g, 1e-16).unwrap().value;
            assert!((v.re / want - 1.0).abs() < 1e-6, "r={r}: {}", v.re);
        }
        let radii: Vec<f64> = (1..=12).map(|k| 5.0 * k as f64).collect();
        let rep = decay_scan(|z| e_m(z, &g, 1e-15).unwrap().value, PI, &radii).unwrap();
        assert!(!rep.decaying);
    }
}
