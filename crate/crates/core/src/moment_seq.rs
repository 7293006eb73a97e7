//! Moment sequences `m(p)` held in the log domain.
//!
//! Three families are supported: the classical factorials `p!`, the Dunkl
//! factorials `γ_{p,α}` and user-supplied tables. Every sequence caches
//! `log m(p)` for `p = 0..=p_max` at construction and is immutable afterwards.
//!
//! The module also certifies strong regularity on a finite range (log
//! convexity, moderate growth, strong non-quasianalyticity) and evaluates the
//! associated growth function `M(t) = sup_p log(t^p / m(p))`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numeric::KahanSum;

/// Default number of cached terms.
pub const DEFAULT_P_MAX: usize = 4096;

/// Which closed form (if any) generates the sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Factorial,
    Dunkl { alpha: f64 },
    Custom,
}

/// Serializable description of a sequence: `{"family": "dunkl", "alpha": -0.25}`,
/// `{"family": "factorial"}` or `{"family": "custom", "table": "path"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<std::path::PathBuf>,
}

impl SequenceSpec {
    pub fn build(&self, p_max: usize) -> Result<MomentSequence> {
        match self.family.to_ascii_lowercase().as_str() {
            "factorial" => Ok(MomentSequence::factorial(p_max)),
            "dunkl" => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| Error::Parse("dunkl family needs alpha".into()))?;
                MomentSequence::dunkl(alpha, p_max)
            }
            "custom" => {
                let table = self
                    .table
                    .as_ref()
                    .ok_or_else(|| Error::Parse("custom family needs a table path".into()))?;
                MomentSequence::load_table(table)
            }
            other => Err(Error::Parse(format!("unknown sequence family {other:?}"))),
        }
    }
}

/// A positive sequence `m(p)` with cached logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    family: Family,
    log_values: Vec<f64>,
}

/// A positive real stored through its logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPositive {
    pub log: f64,
}

impl LogPositive {
    /// Linear-domain value; overflows to `inf` past `log ≈ 709.78`.
    pub fn value(self) -> f64 {
        self.log.exp()
    }
}

/// Closed-form Dunkl quotient `θ_{p,α} = p + ((2α+1)/2)(1 − (−1)^p)`.
fn dunkl_theta(p: usize, alpha: f64) -> f64 {
    if p % 2 == 1 {
        p as f64 + (2.0 * alpha + 1.0) / 2.0 * 2.0
    } else {
        p as f64
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= -1.0 {
        return Err(Error::Domain(format!("alpha must exceed -1, got {alpha}")));
    }
    Ok(())
}

/// `γ_{p,α}` for `p ≤ DEFAULT_P_MAX`, accumulated as a sum of log quotients.
pub fn dunkl_factorial(p: usize, alpha: f64) -> Result<LogPositive> {
    check_alpha(alpha)?;
    if p > DEFAULT_P_MAX {
        return Err(Error::Capacity {
            index: p,
            max: DEFAULT_P_MAX,
        });
    }
    let mut acc = KahanSum::new();
    for k in 1..=p {
        acc.add(dunkl_theta(k, alpha).ln());
    }
    Ok(LogPositive { log: acc.value() })
}

/// `θ_{p,α} = γ_{p,α} / γ_{p−1,α}`.
pub fn dunkl_quotient(p: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if p == 0 {
        return Err(Error::Domain("quotient is defined for p >= 1".into()));
    }
    Ok(dunkl_theta(p, alpha))
}

impl MomentSequence {
    /// `m(p) = p!` for `p ≤ p_max`.
    pub fn factorial(p_max: usize) -> Self {
        let mut acc = KahanSum::new();
        let mut log_values = Vec::with_capacity(p_max + 1);
        log_values.push(0.0);
        for p in 1..=p_max {
            acc.add((p as f64).ln());
            log_values.push(acc.value());
        }
        Self {
            family: Family::Factorial,
            log_values,
        }
    }

    /// Dunkl factorials `γ_{p,α}` for `p ≤ p_max`; requires `α > −1`.
    pub fn dunkl(alpha: f64, p_max: usize) -> Result<Self> {
        check_alpha(alpha)?;
        let mut acc = KahanSum::new();
        let mut log_values = Vec::with_capacity(p_max + 1);
        log_values.push(0.0);
        for p in 1..=p_max {
            acc.add(dunkl_theta(p, alpha).ln());
            log_values.push(acc.value());
        }
        Ok(Self {
            family: Family::Dunkl { alpha },
            log_values,
        })
    }

    /// A custom sequence from linear values `m(0), m(1), …`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parse("empty sequence table".into()));
        }
        let log_values = values
            .iter()
            .enumerate()
            .map(|(p, &v)| {
                if v > 0.0 && v.is_finite() {
                    Ok(v.ln())
                } else {
                    Err(Error::Domain(format!(
                        "m({p}) = {v} is not a positive finite number"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            family: Family::Custom,
            log_values,
        })
    }

    /// A custom sequence from `log m(0), log m(1), …`.
    pub fn from_log_values(log_values: Vec<f64>) -> Result<Self> {
        if log_values.is_empty() {
            return Err(Error::Parse("empty sequence table".into()));
        }
        if let Some(p) = log_values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("log m({p}) is not finite")));
        }
        Ok(Self {
            family: Family::Custom,
            log_values,
        })
    }

    /// Parses the two-column `p, m(p)` text format (`#` starts a comment).
    /// Indices must run consecutively from 0.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty());
            let (Some(p), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!(
                    "line {}: expected `p, m(p)`",
                    lineno + 1
                )));
            };
            let p: usize = p
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad index `{p}`", lineno + 1)))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad value `{v}`", lineno + 1)))?;
            if p != values.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected index {}, found {p}",
                    lineno + 1,
                    values.len()
                )));
            }
            values.push(v);
        }
        Self::from_values(&values)
    }

    pub fn load_table(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_table(&std::fs::read_to_string(path)?)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.family {
            Family::Dunkl { alpha } => Some(alpha),
            _ => None,
        }
    }

    /// Largest cached index.
    pub fn p_max(&self) -> usize {
        self.log_values.len() - 1
    }

    /// `true` when `m(p) = p!` exactly (factorials, or Dunkl with `α = −1/2`).
    pub fn is_classical(&self) -> bool {
        match self.family {
            Family::Factorial => true,
            Family::Dunkl { alpha } => alpha == -0.5,
            Family::Custom => false,
        }
    }

    /// Cached `log m(p)`.
    pub fn log_value(&self, p: usize) -> Result<f64> {
        self.log_values.get(p).copied().ok_or(Error::Capacity {
            index: p,
            max: self.p_max(),
        })
    }

    /// `log m(p)`, falling back to log-gamma closed forms past the cache for
    /// the factorial and Dunkl families.
    pub fn log_value_ext(&self, p: usize) -> Result<f64> {
        if let Some(&v) = self.log_values.get(p) {
            return Ok(v);
        }
        match self.family {
            Family::Factorial => Ok(ln_gamma(p as f64 + 1.0)),
            Family::Dunkl { alpha } => {
                let k = (p / 2) as f64;
                let shift = if p.is_multiple_of(2) { 0.0 } else { 1.0 };
                Ok(p as f64 * std::f64::consts::LN_2
                    + ln_gamma(k + 1.0)
                    + ln_gamma(alpha + 1.0 + k + shift)
                    - ln_gamma(alpha + 1.0))
            }
            Family::Custom => Err(Error::Capacity {
                index: p,
                max: self.p_max(),
            }),
        }
    }

    /// Linear `m(p)` (may be `inf` for large `p`).
    pub fn value(&self, p: usize) -> Result<f64> {
        self.log_value(p).map(f64::exp)
    }

    /// Quotient `m(p)/m(p−1)`; closed form for the named families.
    pub fn quotient(&self, p: usize) -> Result<f64> {
        if p == 0 {
            return Err(Error::Domain("quotient is defined for p >= 1".into()));
        }
        match self.family {
            Family::Factorial => Ok(p as f64),
            Family::Dunkl { alpha } => Ok(dunkl_theta(p, alpha)),
            Family::Custom => Ok((self.log_value(p)? - self.log_value(p - 1)?).exp()),
        }
    }

    /// `log(m(a+b) / (m(a)·m(b)))`, the generalized log-binomial.
    pub fn log_binomial(&self, a: usize, b: usize) -> Result<f64> {
        Ok(self.log_value(a + b)? - self.log_value(a)? - self.log_value(b)?)
    }
}

/// Finite-range strong-regularity certificate.
///
/// The `a1` and `a2` witnesses hold on the tested range only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrCheckReport {
    pub lc_ok: bool,
    pub lc_violation: Option<usize>,
    pub mg_ok: bool,
    pub a1: f64,
    pub snq_ok: bool,
    pub a2: f64,
    /// Upper estimate of the omitted tail `Σ_{q>4N}` in the snq sum.
    pub snq_tail_bound: f64,
    pub range: usize,
}

/// Ratio past which a witness computed on `0..=N` versus `0..=N/2` is taken
/// as evidence that the constant does not exist.
const WITNESS_DRIFT: f64 = 1.25;

/// Checks (lc), (mg) and (snq) for `p ≤ n`, normalizing by `m(0)` first.
/// The snq sum runs to `4n`, so `log m` must be available up to `4n + 2`.
pub fn check_strong_regularity(seq: &MomentSequence, n: usize) -> Result<SrCheckReport> {
    if n < 4 {
        return Err(Error::Domain(format!("range must be at least 4, got {n}")));
    }
    let top = 4 * n + 2;
    let l0 = seq.log_value(0)?;
    let logs = (0..=top)
        .map(|p| seq.log_value_ext(p).map(|v| v - l0))
        .collect::<Result<Vec<f64>>>()?;
    let theta = |p: usize| (logs[p] - logs[p - 1]).exp();

    // (lc)
    let lc_violation = (1..=n).find(|&p| {
        let excess = 2.0 * logs[p] - logs[p - 1] - logs[p + 1];
        excess > 1e-12 * logs[p].abs().max(1.0)
    });

    // (mg)
    let mg_witness = |range: usize| {
        let mut best: f64 = 1.0;
        for p in 0..=range {
            for q in 0..=range {
                if p + q == 0 {
                    continue;
                }
                let c = ((logs[p + q] - logs[p] - logs[q]) / (p + q) as f64).exp();
                best = best.max(c);
            }
        }
        best
    };
    let a1 = mg_witness(n);
    let a1_half = mg_witness(n / 2);
    let mg_ok = a1.is_finite() && a1 / a1_half <= WITNESS_DRIFT;

    // (snq): S_p = Σ_{q=p}^{4n} 1/((q+1)θ_{q+1}) plus a power-law tail bound.
    let last = 4 * n;
    let far = theta(last + 1).min(theta(last + 2));
    let mid = theta(2 * n + 1).min(theta(2 * n + 2));
    let growth = (far / mid).ln() / ((last + 1) as f64 / (2 * n + 1) as f64).ln();
    let snq_tail_bound = if growth > 0.05 {
        2.0 / (growth * far)
    } else {
        f64::INFINITY
    };
    let mut suffix = vec![0.0; last + 2];
    let mut acc = KahanSum::new();
    for q in (0..=last).rev() {
        acc.add(1.0 / ((q + 1) as f64 * theta(q + 1)));
        suffix[q] = acc.value();
    }
    let ratio = |p: usize| (suffix[p] + snq_tail_bound) * theta(p + 1);
    let a2 = (0..=n).map(ratio).fold(1.0, f64::max);
    let a2_half = (0..=n / 2).map(ratio).fold(1.0, f64::max);
    let snq_ok = a2.is_finite() && a2 / a2_half <= WITNESS_DRIFT;

    Ok(SrCheckReport {
        lc_ok: lc_violation.is_none(),
        lc_violation,
        mg_ok,
        a1,
        snq_ok,
        a2,
        snq_tail_bound,
        range: n,
    })
}

/// `M(t) = sup_{p≥0} log(t^p / m(p))`, with `M(0) = 0`.
///
/// Scans `p` upward and stops once the term has decreased for 8 consecutive
/// indices past its running maximum.
pub fn assoc_m(seq: &MomentSequence, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("M(t) requires t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let l0 = seq.log_value(0)?;
    let lt = t.ln();
    let mut best = 0.0_f64;
    let mut best_p = 0usize;
    let mut prev = f64::NEG_INFINITY;
    let mut decreasing = 0usize;
    let mut p = 0usize;
    loop {
        let term = p as f64 * lt - (seq.log_value_ext(p)? - l0);
        if term > best {
            best = term;
            best_p = p;
        }
        if term < prev {
            decreasing += 1;
        } else {
            decreasing = 0;
        }
        if decreasing >= 8 && p > best_p {
            return Ok(best);
        }
        prev = term;
        p += 1;
    }
}

/// `d(t) = log M(t) / log t` for `t > 1`.
pub fn proximate_order_d(seq: &MomentSequence, t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::Domain(format!("d(t) requires t > 1, got {t}")));
    }
    let m = assoc_m(seq, t)?;
    if m <= 0.0 {
        return Err(Error::Domain(format!("M({t}) = 0, log undefined")));
    }
    Ok(m.ln() / t.ln())
}

/// Single-probe estimate of `ω(m) = lim log θ_p / log p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaEstimate {
    pub probe: usize,
    pub value: f64,
    /// The same estimator at `10·probe`, for a trend check; absent when a
    /// custom table is too short.
    pub value_at_10x: Option<f64>,
}

pub fn omega_estimate(seq: &MomentSequence, probe: usize) -> Result<OmegaEstimate> {
    if probe < 1000 {
        return Err(Error::Domain(format!(
            "omega probe must be >= 1000, got {probe}"
        )));
    }
    let est = |p: usize| seq.quotient(p).map(|theta| theta.ln() / (p as f64).ln());
    Ok(OmegaEstimate {
        probe,
        value: est(probe)?,
        value_at_10x: est(10 * probe).ok(),
    })
}

/// Fitted constants `C₁ = min θ_p/p`, `C₂ = max θ_p/p` over `1 ≤ p ≤ n`.
pub fn quotient_bracket(seq: &MomentSequence, n: usize) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    for p in 1..=n {
        let r = seq.quotient(p)? / p as f64;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((lo, hi))
}

/// Fitted constants with `C₁^p p! ≤ m(p) ≤ C₂^p p!` over `1 ≤ p ≤ n`.
pub fn factorial_bracket(seq: &MomentSequence, n: usize) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    let mut log_fact = KahanSum::new();
    for p in 1..=n {
        log_fact.add((p as f64).ln());
        let c = ((seq.log_value(p)? - log_fact.value()) / p as f64).exp();
        lo = lo.min(c);
        hi = hi.max(c);
    }
    Ok((lo, hi))
}

/// Summary of the growth functions attached to a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSummary {
    pub omega: OmegaEstimate,
    /// `(t, d(t))` samples.
    pub d_samples: Vec<(f64, f64)>,
    pub quotient_bracket: (f64, f64),
}

pub fn growth_summary(
    seq: &MomentSequence,
    probe: usize,
    ts: &[f64],
    n: usize,
) -> Result<GrowthSummary> {
    Ok(GrowthSummary {
        omega: omega_estimate(seq, probe)?,
        d_samples: ts
            .iter()
            .map(|&t| proximate_order_d(seq, t).map(|d| (t, d)))
            .collect::<Result<_>>()?,
        quotient_bracket: quotient_bracket(seq, n)?,
    })
}
