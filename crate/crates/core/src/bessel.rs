//! Modified Bessel `K_ν` on the positive axis and the Hamburger weight
//!
//! `ω_α(t) = |t|^{α+1}(K_α(|t|) + sgn(t) K_{α+1}(|t|)) / (2^{α+1} Γ(α+1))`,
//!
//! whose moments are the Dunkl factorials for `−1 < α < −1/2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::moment_seq::dunkl_factorial;

/// `ln 10^18`: the integrand is cut where it falls below `1e-18` of its peak.
const CUT: f64 = 41.45;
const MAX_HALVINGS: usize = 14;

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// `(ln K_ν(t), relative error estimate)`.
///
/// Trapezoid rule on `K_ν(t) = ∫₀^∞ e^{−t cosh u} cosh(νu) du`; the integrand
/// decays doubly exponentially, so halving the step until two successive sums
/// agree gives near machine accuracy.
pub fn log_bessel_k(nu: f64, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("K_nu needs t > 0, got {t}")));
    }
    if !nu.is_finite() {
        return Err(Error::Domain("order must be finite".into()));
    }
    let nu = nu.abs();
    let g = |u: f64| -t * u.cosh() + ln_cosh(nu * u);
    let u_star = (nu / t).asinh();
    let peak = g(0.0).max(g(u_star));

    // first u past the peak with g(u) < peak − CUT
    let mut hi = u_star.max(1.0);
    while g(hi) >= peak - CUT {
        hi *= 2.0;
    }
    let mut lo = u_star;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= peak - CUT {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u_max = hi;

    let term = |u: f64| (g(u) - peak).exp();
    let mut h = (u_max / 16.0).min(0.5);
    let mut n = (u_max / h).ceil() as usize;
    h = u_max / n as f64;
    // trapezoid on [0, u_max] with the half weight at u = 0; the far end is negligible
    let mut sum = 0.5 * term(0.0) + (1..=n).map(|i| term(i as f64 * h)).sum::<f64>();
    let mut value = sum * h;
    for _ in 0..MAX_HALVINGS {
        let fresh: f64 = (0..n).map(|i| term((i as f64 + 0.5) * h)).sum();
        sum += fresh;
        n *= 2;
        h *= 0.5;
        let next = sum * h;
        let diff = (next - value).abs() / next;
        value = next;
        if diff < 1e-14 {
            return Ok((value.ln() + peak, diff.max(f64::EPSILON)));
        }
    }
    Err(Error::Accuracy {
        estimate: (sum * h - value).abs() / value,
    })
}

/// `K_ν(t)` for `t > 0`.
pub fn bessel_k(nu: f64, t: f64) -> Result<f64> {
    Ok(log_bessel_k(nu, t)?.0.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightEval {
    pub t: f64,
    pub value: f64,
    pub quadrature_error_estimate: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > -1.0 && alpha < -0.5) {
        return Err(Error::Domain(format!(
            "weight needs -1 < alpha < -1/2, got {alpha}"
        )));
    }
    Ok(())
}

fn log_norm(alpha: f64) -> f64 {
    (alpha + 1.0) * std::f64::consts::LN_2 + gamma(alpha + 1.0).ln()
}

fn split_unchecked(alpha: f64, t: f64, sign: Sign) -> Result<WeightEval> {
    let (la, ea) = log_bessel_k(alpha, t)?;
    let (lb, eb) = log_bessel_k(alpha + 1.0, t)?;
    let s = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    // factor out the larger Bessel value to keep tiny t finite
    let top = la.max(lb);
    let mix = (la - top).exp() + s * (lb - top).exp();
    let log_scale = (alpha + 1.0) * t.ln() + top - log_norm(alpha);
    let value = mix * log_scale.exp();
    let err = ((la - top).exp() * ea + (lb - top).exp() * eb) * log_scale.exp();
    Ok(WeightEval {
        t,
        value,
        quadrature_error_estimate: err,
    })
}

/// `ω_{α,±}(t)` for `t > 0`.
pub fn weight_split(alpha: f64, t: f64, sign: Sign) -> Result<WeightEval> {
    check_alpha(alpha)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("split weight needs t > 0, got {t}")));
    }
    split_unchecked(alpha, t, sign)
}

/// `ω_α(t)` for real `t ≠ 0`; equals `ω_{α,sgn t}(|t|)`.
pub fn weight(alpha: f64, t: f64) -> Result<WeightEval> {
    check_alpha(alpha)?;
    if t == 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!(
            "weight needs finite t != 0, got {t}"
        )));
    }
    let sign = if t > 0.0 { Sign::Plus } else { Sign::Minus };
    let mut w = split_unchecked(alpha, t.abs(), sign)?;
    w.t = t;
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentQuadrature {
    pub n: usize,
    pub alpha: f64,
    /// `∫₀^∞ t^n ω_{α,+}`.
    pub plus: f64,
    /// `∫₀^∞ t^n ω_{α,−}`.
    pub minus: f64,
    /// `plus + (−1)^n minus`.
    pub value: f64,
    pub error_estimate: f64,
}

pub const MAX_MOMENT: usize = 12;

/// Exp-sinh quadrature of `∫₀^∞ f`, with `t = exp(π/2 · sinh s)`.
fn exp_sinh(f: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let term = |s: f64| -> Result<f64> {
        let t = (0.5 * PI * s.sinh()).exp();
        if t < 1e-300 || !t.is_finite() {
            return Ok(0.0);
        }
        Ok(f(t)? * t * 0.5 * PI * s.cosh())
    };
    // window: walk outward until terms fall below 1e-18 of the running maximum
    let step = 0.125;
    let centre = term(0.0)?.abs();
    let mut peak = centre;
    let mut ends = [0.0f64; 2];
    for (k, dir) in [-1.0, 1.0].into_iter().enumerate() {
        let mut s = 0.0;
        loop {
            s += dir * step;
            let v = term(s)?.abs();
            peak = peak.max(v);
            if v <= 1e-18 * peak || s.abs() > 8.0 {
                break;
            }
        }
        ends[k] = s;
    }
    let (a, b) = (ends[0], ends[1]);
    let mut n = ((b - a) / 0.5).ceil() as usize;
    let mut h = (b - a) / n as f64;
    let mut sum = 0.0;
    for i in 0..=n {
        sum += term(a + i as f64 * h)?;
    }
    let mut value = sum * h;
    let mut diff = f64::INFINITY;
    for _ in 0..10 {
        let mut fresh = 0.0;
        for i in 0..n {
            fresh += term(a + (i as f64 + 0.5) * h)?;
        }
        sum += fresh;
        n *= 2;
        h *= 0.5;
        let next = sum * h;
        diff = (next - value).abs();
        value = next;
        if diff <= 1e-13 * value.abs() {
            break;
        }
    }
    Ok((value, diff))
}

/// `γ_{n,α}` as `∫ t^n ω_α(t) dt`, split into the two half-line integrals.
pub fn moment_quadrature(n: usize, alpha: f64) -> Result<MomentQuadrature> {
    check_alpha(alpha)?;
    if n > MAX_MOMENT {
        return Err(Error::Domain(format!(
            "moment order {n} exceeds {MAX_MOMENT}"
        )));
    }
    let half =
        |sign: Sign| exp_sinh(|t| Ok(t.powi(n as i32) * split_unchecked(alpha, t, sign)?.value));
    let (plus, ep) = half(Sign::Plus)?;
    let (minus, em) = half(Sign::Minus)?;
    let value = if n.is_multiple_of(2) {
        plus + minus
    } else {
        plus - minus
    };
    let error_estimate = ep + em;
    if !(error_estimate <= 1e-9 * value.abs()) {
        return Err(Error::Accuracy {
            estimate: error_estimate / value.abs(),
        });
    }
    Ok(MomentQuadrature {
        n,
        alpha,
        plus,
        minus,
        value,
        error_estimate,
    })
}

/// Closed-form `γ_{n,α}` for comparison with [`moment_quadrature`].
pub fn gamma_closed_form(n: usize, alpha: f64) -> Result<f64> {
    Ok(dunkl_factorial(n, alpha)?.value())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    /// `passed[j]` for orders `j = 0..=k`.
    pub passed: Vec<bool>,
    /// Most negative `(−1)^j Δ^j f` per order.
    pub worst: Vec<f64>,
    pub slack: Vec<f64>,
}

impl MonotonicityReport {
    pub fn all_pass(&self) -> bool {
        self.passed.iter().all(|&p| p)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.passed.iter().position(|&p| !p)
    }
}

pub const MAX_CM_ORDER: usize = 6;

/// Finite-difference spot check of complete monotonicity on a uniform grid:
/// `(−1)^j Δ^j f ≥ −ε_j` with `ε_j = 1e−7 · max|f| · 2^j`.
pub fn complete_monotonicity_spot(
    f: impl Fn(f64) -> Result<f64>,
    grid: &[f64],
    k: usize,
) -> Result<MonotonicityReport> {
    if k > MAX_CM_ORDER {
        return Err(Error::Domain(format!("order {k} exceeds {MAX_CM_ORDER}")));
    }
    if grid.len() < k + 2 || grid[0] <= 0.0 {
        return Err(Error::Domain(
            "grid must lie in (0, inf) and hold more than k + 1 points".into(),
        ));
    }
    let h = grid[1] - grid[0];
    if !(h > 0.0)
        || grid
            .windows(2)
            .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(w[1].abs()))
    {
        return Err(Error::Domain(
            "grid must be strictly increasing with uniform spacing".into(),
        ));
    }
    let mut diffs = grid.iter().map(|&t| f(t)).collect::<Result<Vec<f64>>>()?;
    let scale = diffs.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut report = MonotonicityReport {
        passed: Vec::with_capacity(k + 1),
        worst: Vec::with_capacity(k + 1),
        slack: Vec::with_capacity(k + 1),
    };
    for j in 0..=k {
        if j > 0 {
            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let worst = diffs.iter().map(|d| sign * d).fold(f64::INFINITY, f64::min);
        let eps = 1e-7 * scale * 2f64.powi(j as i32);
        report.passed.push(worst >= -eps);
        report.worst.push(worst);
        report.slack.push(eps);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn half_order_closed_form() {
        for t in [1e-3, 0.1, 2.0, 17.0, 50.0] {
            let want = (PI / (2.0 * t)).sqrt() * (-t).exp();
            assert!(rel(bessel_k(0.5, t).unwrap(), want) < 1e-12, "t = {t}");
        }
        assert!(rel(bessel_k(0.5, 2.0).unwrap(), 0.119_937_771_968_061_4) < 1e-12);
    }

    #[test]
    fn tabulated_values() {
        // K_0(1), K_1(1), K_0(0.01) (Abramowitz–Stegun table 9.8)
        assert!(rel(bessel_k(0.0, 1.0).unwrap(), 0.421_024_438_240_708_3) < 1e-12);
        assert!(rel(bessel_k(1.0, 1.0).unwrap(), 0.601_907_230_197_234_6) < 1e-12);
        assert!(rel(bessel_k(0.0, 0.01).unwrap(), 4.721_244_730_161_094) < 1e-11);
    }

    #[test]
    fn symmetric_in_order() {
        assert_eq!(bessel_k(-0.3, 1.0).unwrap(), bessel_k(0.3, 1.0).unwrap());
    }

    #[test]
    fn large_argument_asymptotic() {
        let t = 30.0;
        let lead = (PI / (2.0 * t)).sqrt() * (-t).exp();
        assert!(rel(bessel_k(0.25, t).unwrap(), lead) < 0.03);
    }

    #[test]
    fn recurrence() {
        for nu in [-0.75, 0.3, 0.7, 1.2] {
            for t in [1e-3, 0.05, 0.8, 3.0, 20.0, 50.0] {
                let lhs = bessel_k(nu + 1.0, t).unwrap();
                let rhs = bessel_k(nu - 1.0, t).unwrap() + 2.0 * nu / t * bessel_k(nu, t).unwrap();
                assert!(rel(lhs, rhs) < 1e-9, "nu = {nu}, t = {t}");
            }
        }
    }

    #[test]
    fn tiny_arguments_stay_finite() {
        let (l, _) = log_bessel_k(0.9, 1e-290).unwrap();
        // K_ν(t) ≈ Γ(ν)/2 (2/t)^ν
        let want = gamma(0.9).ln() - std::f64::consts::LN_2 + 0.9 * (2e290f64).ln();
        assert!((l - want).abs() < 1e-10);
        assert!(bessel_k(1.0, 0.0).is_err());
    }

    #[test]
    fn weight_identities() {
        let a = -0.75;
        let p = weight_split(a, 1.0, Sign::Plus).unwrap();
        assert!(p.value > 0.0 && p.quadrature_error_estimate <= 1e-10 * p.value);
        assert_eq!(weight(a, 1.0).unwrap().value, p.value);
        let m = weight(a, -1.0).unwrap();
        assert_eq!(m.value, weight_split(a, 1.0, Sign::Minus).unwrap().value);
        let direct = (bessel_k(a, 1.0).unwrap() - bessel_k(a + 1.0, 1.0).unwrap())
            / (2f64.powf(a + 1.0) * gamma(a + 1.0));
        assert!(rel(m.value, direct) < 1e-12);
        assert!(
            weight(-0.4, 1.0).is_err() && weight(-1.0, 1.0).is_err() && weight(a, 0.0).is_err()
        );
        assert!(weight_split(a, -1.0, Sign::Plus).is_err());
    }

    #[test]
    fn first_moments() {
        assert!((moment_quadrature(0, -0.75).unwrap().value - 1.0).abs() < 1e-8);
        assert!((moment_quadrature(1, -0.75).unwrap().value - 0.5).abs() < 1e-8);
        assert!(rel(moment_quadrature(4, -0.6).unwrap().value, 17.92) < 1e-6);
        assert!(moment_quadrature(13, -0.75).is_err());
    }

    #[test]
    fn half_line_integrals_match_mellin_transform() {
        // ∫₀^∞ t^{μ−1} K_ν(t) dt = 2^{μ−2} Γ((μ−ν)/2) Γ((μ+ν)/2)
        let (a, n) = (-0.75, 3usize);
        let q = moment_quadrature(n, a).unwrap();
        let mellin = |mu: f64, nu: f64| {
            2f64.powf(mu - 2.0) * gamma((mu - nu) / 2.0) * gamma((mu + nu) / 2.0)
        };
        let mu = n as f64 + a + 2.0;
        let norm = 2f64.powf(a + 1.0) * gamma(a + 1.0);
        let ka = mellin(mu, a) / norm;
        let kb = mellin(mu, a + 1.0) / norm;
        assert!(rel(q.plus, ka + kb) < 1e-10);
        assert!(rel(q.minus, ka - kb) < 1e-10);
    }

    #[test]
    fn monotonicity_checks() {
        let grid: Vec<f64> = (0..=190).map(|i| 0.5 + 0.05 * i as f64).collect();
        let w =
            complete_monotonicity_spot(|t| Ok(weight_split(-0.75, t, Sign::Plus)?.value), &grid, 4)
                .unwrap();
        assert!(w.all_pass(), "{w:?}");
        assert!(complete_monotonicity_spot(|t| Ok((-t).exp()), &grid, 6)
            .unwrap()
            .all_pass());
        let s = complete_monotonicity_spot(|t| Ok(t.sin()), &grid, 4).unwrap();
        assert!(s.first_failure().unwrap() <= 2);
        assert!(complete_monotonicity_spot(Ok, &[1.0, 2.0, 4.0], 1).is_err());
    }
}
