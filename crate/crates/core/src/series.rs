//! Truncated power series in the plain Taylor basis `z^p`, with the moment
//! derivative, the direct Dunkl operator and (even) `m`-translations.
//!
//! Moment coefficients `a_p = c_p·m(p)` are never materialized; every
//! sequence-dependent factor is formed from log differences of `m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::moment_seq::MomentSequence;
use crate::numeric::{from_log_polar, ComplexSum};

/// Coefficients `c_0..=c_N` of `Σ c_p z^p`.
///
/// Serializes as a JSON array of `[re, im]` pairs ordered by degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TryFrom<Vec<[f64; 2]>> for TruncatedSeries {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<TruncatedSeries> for Vec<[f64; 2]> {
    fn from(s: TruncatedSeries) -> Self {
        s.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain(
                "a series needs at least one coefficient".into(),
            ));
        }
        if let Some(p) = coeffs
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::Domain(format!("coefficient {p} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// The zero series of order `order`.
    pub fn zeros(order: usize) -> Self {
        Self {
            coeffs: vec![zero(); order + 1],
        }
    }

    /// `z^p` truncated at `order ≥ p`.
    pub fn monomial(p: usize, order: usize) -> Self {
        let mut s = Self::zeros(order.max(p));
        s.coeffs[p] = Complex64::new(1.0, 0.0);
        s
    }

    /// Truncation of `E_m(ξz) = Σ ξ^p z^p / m(p)` at `order`.
    pub fn exponential(seq: &MomentSequence, xi: Complex64, order: usize) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(Complex64::new(1.0, 0.0));
        let (lr, phase) = (xi.norm().ln(), xi.arg());
        for p in 1..=order {
            let c = if xi == zero() {
                zero()
            } else {
                from_log_polar(p as f64 * lr - seq.log_value(p)?, p as f64 * phase)
            };
            coeffs.push(c);
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Truncation order `N` (the vector holds `N + 1` entries).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest `p` with `c_p ≠ 0`.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.norm() > 0.0)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(zero(), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    /// `self + other`, padded to the larger order.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |s: &Self, i: usize| s.coeffs.get(i).copied().unwrap_or_else(zero);
        Self {
            coeffs: (0..n).map(|i| get(self, i) + get(other, i)).collect(),
        }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `∂_m f`: the coefficient at `p` becomes `c_{p+1}·m(p+1)/m(p)`.
    /// Order drops by one; an order-0 input maps to the zero series.
    pub fn moment_derivative(&self, seq: &MomentSequence) -> Result<Self> {
        if self.order() == 0 {
            return Ok(Self::zeros(0));
        }
        let coeffs = (0..self.order())
            .map(|p| Ok(self.coeffs[p + 1] * seq.quotient(p + 1)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs })
    }

    /// `∂_m^k f` as a single shift: coefficient `j` is `c_{j+k}·m(j+k)/m(j)`.
    pub fn moment_derivative_n(&self, seq: &MomentSequence, k: usize) -> Result<Self> {
        if k > self.order() {
            return Ok(Self::zeros(0));
        }
        let coeffs = (0..=self.order() - k)
            .map(|j| {
                let c = self.coeffs[j + k];
                Ok(c * (seq.log_value(j + k)? - seq.log_value(j)?).exp())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs })
    }

    /// `Λ_α f = f′ + ((2α+1)/2)(f(z) − f(−z))/z`, applied coefficient-wise:
    /// `z^p ↦ p z^{p−1}` for even `p` and `(p + 2α + 1) z^{p−1}` for odd `p`.
    pub fn dunkl_apply_direct(&self, alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::Domain(format!("alpha must exceed -1, got {alpha}")));
        }
        if self.order() == 0 {
            return Ok(Self::zeros(0));
        }
        let reflection = (2.0 * alpha + 1.0) / 2.0;
        let coeffs = (1..=self.order())
            .map(|p| {
                let c = self.coeffs[p];
                // (f(z) − f(−z))/z keeps 2·c_p z^{p−1} for odd p only
                let odd_part = if p % 2 == 1 { c * 2.0 } else { zero() };
                c * p as f64 + odd_part * reflection
            })
            .collect();
        Ok(Self { coeffs })
    }

    /// `τ_{y,m} f = Σ_p (y^p/m(p)) ∂_m^p f`, truncated at the input order.
    ///
    /// On a truncated input the sum over `p` is finite. When the series
    /// approximates a function holomorphic on `D(0, R)`, keep `|y|` below
    /// `R/A₁` (with `A₁` the moderate-growth constant) for the result to
    /// approximate the translated function.
    pub fn m_translate(&self, y: Complex64, seq: &MomentSequence) -> Result<Self> {
        self.translate_with(y, seq, |_| true)
    }

    /// `T_{y,m} f = Σ_k (y^{2k}/m(2k)) ∂_m^{2k} f`.
    pub fn even_translate(&self, y: Complex64, seq: &MomentSequence) -> Result<Self> {
        self.translate_with(y, seq, |p| p % 2 == 0)
    }

    /// `(τ_{y,m} f + τ_{−y,m} f)/2`, the averaged form of [`Self::even_translate`].
    pub fn even_translate_averaged(&self, y: Complex64, seq: &MomentSequence) -> Result<Self> {
        let plus = self.m_translate(y, seq)?;
        let minus = self.m_translate(-y, seq)?;
        Ok(plus.add(&minus).scale(Complex64::new(0.5, 0.0)))
    }

    fn translate_with(
        &self,
        y: Complex64,
        seq: &MomentSequence,
        keep: impl Fn(usize) -> bool,
    ) -> Result<Self> {
        let n = self.order();
        let logs = (0..=n)
            .map(|p| seq.log_value(p))
            .collect::<Result<Vec<_>>>()?;
        if y == zero() {
            return Ok(self.clone());
        }
        let (ly, phase) = (y.norm().ln(), y.arg());
        let coeffs = (0..=n)
            .map(|j| {
                (0..=n - j)
                    .filter(|&p| keep(p))
                    .map(|p| {
                        let c = self.coeffs[j + p];
                        if p == 0 {
                            return c;
                        }
                        let lw = p as f64 * ly + logs[j + p] - logs[p] - logs[j];
                        c * from_log_polar(lw, p as f64 * phase)
                    })
                    .collect::<ComplexSum>()
                    .value()
            })
            .collect();
        Ok(Self { coeffs })
    }

    /// Human-readable rendering with `digits` significant digits, skipping
    /// zero coefficients.
    pub fn pretty(&self, digits: usize) -> String {
        let prec = digits.max(1) - 1;
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(p, c)| {
                let coef = if c.im == 0.0 {
                    format!("{:.*e}", prec, c.re)
                } else {
                    format!(
                        "({:.*e} {} {:.*e}i)",
                        prec,
                        c.re,
                        if c.im < 0.0 { '-' } else { '+' },
                        prec,
                        c.im.abs()
                    )
                };
                match p {
                    0 => coef,
                    1 => format!("{coef}·z"),
                    _ => format!("{coef}·z^{p}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// Term table for the inner series `Σ_p (n+p)! m(n+p)/m(p) (−y)^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceWitness {
    /// `log |t_p|` for `p = 0..=P`.
    pub log_terms: Vec<f64>,
    /// `log |t_{p+1}/t_p|` for `p = 0..P`.
    pub log_ratios: Vec<f64>,
    /// First index from which the ratios increase strictly up to `P`.
    pub increasing_from: Option<usize>,
    /// Ratios increase strictly over the second half of the table and the
    /// last ratio exceeds one.
    pub diverges: bool,
}

/// Witnesses the null radius of convergence of `Σ_p (n+p)! m(n+p)/m(p) (−y)^p`
/// for `y ≠ 0` and a log-convex `m`.
pub fn euler_divergence_witness(
    y: Complex64,
    n: usize,
    seq: &MomentSequence,
    terms: usize,
) -> Result<DivergenceWitness> {
    if y == zero() {
        return Err(Error::Domain("the divergence witness needs y != 0".into()));
    }
    for p in 1..n + terms {
        if seq.quotient(p + 1)? < seq.quotient(p)? * (1.0 - 1e-12) {
            return Err(Error::Domain(format!(
                "sequence is not log-convex at index {p}"
            )));
        }
    }
    let ly = y.norm().ln();
    let log_terms = (0..=terms)
        .map(|p| {
            Ok(
                ln_gamma((n + p) as f64 + 1.0) + seq.log_value(n + p)? - seq.log_value(p)?
                    + p as f64 * ly,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let log_ratios: Vec<f64> = log_terms.windows(2).map(|w| w[1] - w[0]).collect();
    let mut increasing_from = None;
    if !log_ratios.is_empty() {
        let mut start = log_ratios.len() - 1;
        while start > 0 && log_ratios[start - 1] < log_ratios[start] {
            start -= 1;
        }
        if start < log_ratios.len() - 1 {
            increasing_from = Some(start);
        }
    }
    let diverges = matches!(increasing_from, Some(i) if i <= terms / 2)
        && log_ratios.last().is_some_and(|&r| r > 0.0);
    Ok(DivergenceWitness {
        log_terms,
        log_ratios,
        increasing_from,
        diverges,
    })
}
