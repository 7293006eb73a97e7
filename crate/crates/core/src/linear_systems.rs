//! Fundamental systems for `∂_m y = A y` with constant `A ∈ ℂ^{n×n}`.
//!
//! For a Jordan chain `A v_1 = λ v_1`, `A v_k = v_{k−1} + λ v_k`, the functions
//! `y_k(z) = Σ_{i<k} v_{k−i} E_{m,i}(λz)` solve the system, because
//! `∂_m E_{m,h}(λz) = λ E_{m,h}(λz) + E_{m,h−1}(λz)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entire::{
    chain_series, decay_scan, e_alpha_h_stable, growth_scan, DecayReport, GrowthReport,
};
use crate::error::{Error, Result};
use crate::moment_seq::{MomentSequence, DEFAULT_P_MAX};
use crate::numeric::wrap_angle;
use crate::series::TruncatedSeries;

pub type CMatrix = DMatrix<Complex64>;

/// Default relative tolerance for chain extraction.
pub const DEFAULT_TOL: f64 = 1e-8;

/// One Jordan chain `v_1, …, v_ℓ` for the eigenvalue `λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanChain {
    pub eigenvalue: Complex64,
    /// `vectors[k-1]` is `v_k`.
    pub vectors: Vec<Vec<Complex64>>,
}

impl JordanChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanChainSet {
    pub chains: Vec<JordanChain>,
    pub tol: f64,
    /// Largest relative chain residual `‖A v_k − λ v_k − v_{k−1}‖ / (‖A‖‖v_k‖)`.
    pub residual: f64,
    /// Smallest singular value of the column-normalized vector matrix.
    pub min_singular_value: f64,
}

impl JordanChainSet {
    pub fn dimension(&self) -> usize {
        self.chains.iter().map(JordanChain::len).sum()
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.chains.iter().all(|c| c.len() == 1)
    }

    pub fn chain_lengths(&self) -> Vec<usize> {
        self.chains.iter().map(JordanChain::len).collect()
    }
}

/// Max-row-sum norm.
pub fn norm_inf(a: &CMatrix) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn sorted_svd(m: &CMatrix) -> (Vec<f64>, Vec<DVector<Complex64>>) {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut pairs: Vec<(f64, DVector<Complex64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, v_t.row(i).transpose().map(|c| c.conj())))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Right null space of a square `m`: singular vectors with `σ ≤ threshold`.
fn null_space(m: &CMatrix, threshold: f64) -> Vec<DVector<Complex64>> {
    let (s, v) = sorted_svd(m);
    s.iter()
        .zip(v)
        .filter(|(s, _)| **s <= threshold)
        .map(|(_, v)| v)
        .collect()
}

fn columns(vs: &[DVector<Complex64>], n: usize) -> CMatrix {
    if vs.is_empty() {
        return CMatrix::zeros(n, 0);
    }
    CMatrix::from_columns(vs)
}

fn min_singular_value_normalized(vs: &[DVector<Complex64>], n: usize) -> f64 {
    let normed: Vec<DVector<Complex64>> = vs
        .iter()
        .map(|v| v / Complex64::new(v.norm(), 0.0))
        .collect();
    let m = columns(&normed, n);
    m.singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Extracts Jordan chains of `a`.
///
/// Eigenvalues come from a complex Schur decomposition and are merged when
/// they lie within `√tol·‖A‖` of a cluster mean. Chain lengths follow from the
/// kernel dimensions of `(A − λI)^k`; chain tops are chosen from
/// `ker (A − λI)^k` modulo `ker (A − λI)^{k−1}` and the longer chains already
/// built. Each chain is scaled so its top vector has largest entry `1`.
pub fn jordan_chains(a: &CMatrix, tol: f64) -> Result<JordanChainSet> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::Domain("matrix must be square and non-empty".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    if a.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let norm = norm_inf(a);
    let scale = if norm > 0.0 { norm } else { 1.0 };
    let radius = tol.sqrt() * scale;

    let eig = a
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::DefectiveExtraction("Schur form is not triangular".into()))?;
    let mut clusters: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &l in eig.iter() {
        match clusters
            .iter_mut()
            .find(|(mean, _)| (mean - l).norm() <= radius)
        {
            Some((mean, members)) => {
                members.push(l);
                *mean = members.iter().sum::<Complex64>() / members.len() as f64;
            }
            None => clusters.push((l, vec![l])),
        }
    }
    clusters.sort_by(|x, y| x.0.re.total_cmp(&y.0.re).then(x.0.im.total_cmp(&y.0.im)));

    let id = CMatrix::identity(n, n);
    let mut chains = Vec::new();
    for (lambda, members) in &clusters {
        let mult = members.len();
        let b = a - &id * *lambda;
        // kernels of B^k, k = 0..=mult
        let mut kernels: Vec<Vec<DVector<Complex64>>> = vec![Vec::new()];
        let mut power = id.clone();
        for k in 1..=mult {
            power = &b * &power;
            let threshold = tol.sqrt() * scale.powi(k as i32);
            let ker = null_space(&power, threshold);
            if ker.len() < kernels[k - 1].len() {
                return Err(Error::DefectiveExtraction(format!(
                    "kernel of (A - {lambda}I)^{k} shrank from {} to {}",
                    kernels[k - 1].len(),
                    ker.len()
                )));
            }
            let done = ker.len() == mult;
            kernels.push(ker);
            if done {
                break;
            }
        }
        let depth = kernels.len() - 1;
        if kernels[depth].len() != mult {
            return Err(Error::DefectiveExtraction(format!(
                "generalized eigenspace of {lambda} has dimension {} but multiplicity {mult}",
                kernels[depth].len()
            )));
        }
        let dims: Vec<usize> = kernels.iter().map(Vec::len).collect();
        // blocks of size ≥ k
        let at_least = |k: usize| if k > depth { 0 } else { dims[k] - dims[k - 1] };

        let mut tops: Vec<(usize, DVector<Complex64>)> = Vec::new();
        for k in (1..=depth).rev() {
            let wanted = at_least(k) - at_least(k + 1);
            if wanted == 0 {
                continue;
            }
            let mut span: Vec<DVector<Complex64>> = kernels[k - 1].clone();
            for (len, w) in &tops {
                let mut v = w.clone();
                for _ in 0..(len - k) {
                    v = &b * v;
                }
                span.push(v);
            }
            let basis = columns(&kernels[k], n);
            let projected = if span.is_empty() {
                basis.clone()
            } else {
                let q = columns(&span, n);
                let svd = q.clone().svd(true, false);
                let u = svd.u.expect("requested U");
                let smax = svd.singular_values.max();
                let keep: Vec<DVector<Complex64>> = svd
                    .singular_values
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s > tol.sqrt() * smax)
                    .map(|(i, _)| u.column(i).into_owned())
                    .collect();
                let uq = columns(&keep, n);
                &basis - &uq * (uq.adjoint() * &basis)
            };
            let (s, v) = sorted_svd(&projected);
            let picked: Vec<(f64, DVector<Complex64>)> =
                s.into_iter().zip(v).rev().take(wanted).collect();
            if picked.len() < wanted || picked.iter().any(|(s, _)| *s <= tol.sqrt()) {
                return Err(Error::DefectiveExtraction(format!(
                    "could not find {wanted} independent chain tops of length {k} for {lambda}"
                )));
            }
            for (_, coeffs) in picked {
                tops.push((k, &basis * coeffs));
            }
        }

        for (len, w) in tops {
            let lead = w
                .iter()
                .copied()
                .fold((0usize, 0.0f64, 0usize), |(best_i, best, i), c| {
                    if c.norm() > best * (1.0 + 1e-12) {
                        (i, c.norm(), i + 1)
                    } else {
                        (best_i, best, i + 1)
                    }
                })
                .0;
            let w = &w / w[lead];
            let mut vecs = vec![w];
            for _ in 1..len {
                let next = &b * vecs.last().unwrap();
                vecs.push(next);
            }
            vecs.reverse();
            chains.push(JordanChain {
                eigenvalue: *lambda,
                vectors: vecs.iter().map(|v| v.iter().copied().collect()).collect(),
            });
        }
    }

    let all: Vec<DVector<Complex64>> = chains
        .iter()
        .flat_map(|c| c.vectors.iter().map(|v| DVector::from_vec(v.clone())))
        .collect();
    if all.len() != n {
        return Err(Error::DefectiveExtraction(format!(
            "found {} chain vectors for n = {n}",
            all.len()
        )));
    }
    let min_sv = min_singular_value_normalized(&all, n);
    if !(min_sv > tol) {
        return Err(Error::DefectiveExtraction(format!(
            "chain vectors are nearly dependent (smallest singular value {min_sv:e})"
        )));
    }
    let residual = chain_residual(a, &chains, scale);
    Ok(JordanChainSet {
        chains,
        tol,
        residual,
        min_singular_value: min_sv,
    })
}

fn chain_residual(a: &CMatrix, chains: &[JordanChain], scale: f64) -> f64 {
    let mut worst = 0.0_f64;
    for c in chains {
        for k in 0..c.len() {
            let v = DVector::from_vec(c.vectors[k].clone());
            let mut r = a * &v - &v * c.eigenvalue;
            if k > 0 {
                r -= DVector::from_vec(c.vectors[k - 1].clone());
            }
            let vn = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
            let rn = r.iter().map(|x| x.norm()).fold(0.0, f64::max);
            worst = worst.max(rn / (scale * vn));
        }
    }
    worst
}

/// One member `y(z) = Σ_{i<k} v_{k−i} E_{m,i}(λz)` of a fundamental system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalSolution {
    pub eigenvalue: Complex64,
    /// 1-based position `k` in its chain.
    pub chain_index: usize,
    /// `(vector, h)` pairs: the solution is `Σ vector·E_{m,h}(λz)`.
    pub terms: Vec<(Vec<Complex64>, usize)>,
}

impl FundamentalSolution {
    pub fn dimension(&self) -> usize {
        self.terms.first().map_or(0, |(v, _)| v.len())
    }

    /// Vector value at `z`.
    pub fn evaluate(&self, z: Complex64, seq: &MomentSequence, tol: f64) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dimension()];
        for (v, h) in &self.terms {
            let e = e_alpha_h_stable(self.eigenvalue, z, *h, seq, tol)?.value;
            for (o, vi) in out.iter_mut().zip(v) {
                *o += vi * e;
            }
        }
        Ok(out)
    }

    /// Component series truncated at `order`.
    pub fn series(&self, seq: &MomentSequence, order: usize) -> Result<Vec<TruncatedSeries>> {
        let mut comps = vec![TruncatedSeries::zeros(order); self.dimension()];
        for (v, h) in &self.terms {
            let basis = chain_series(self.eigenvalue, *h, seq, order)?;
            for (comp, vi) in comps.iter_mut().zip(v) {
                *comp = comp.add(&basis.scale(*vi));
            }
        }
        Ok(comps)
    }

    /// `true` when component `i` vanishes identically.
    pub fn component_is_zero(&self, i: usize) -> bool {
        self.terms.iter().all(|(v, _)| v[i].norm() == 0.0)
    }

    /// Multiplies every vector by `k`.
    pub fn scaled(&self, k: Complex64) -> Self {
        let mut out = self.clone();
        for (v, _) in &mut out.terms {
            v.iter_mut().for_each(|x| *x *= k);
        }
        out
    }
}

/// Fundamental system for a given moment sequence.
#[derive(Debug, Clone)]
pub struct FundamentalSystem {
    pub seq: MomentSequence,
    pub chains: JordanChainSet,
    pub solutions: Vec<FundamentalSolution>,
}

impl FundamentalSystem {
    /// Values `y_j(0)` as the columns of an `n × n` matrix; for this basis the
    /// columns are the chain vectors themselves.
    pub fn initial_matrix(&self) -> Result<CMatrix> {
        let n = self.chains.dimension();
        let cols = self
            .solutions
            .iter()
            .map(|s| {
                s.evaluate(Complex64::new(0.0, 0.0), &self.seq, 1e-15)
                    .map(DVector::from_vec)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(columns(&cols, n))
    }

    /// Smallest singular value of the column-normalized [`Self::initial_matrix`].
    pub fn initial_min_singular_value(&self) -> Result<f64> {
        let m = self.initial_matrix()?;
        let cols: Vec<DVector<Complex64>> = m.column_iter().map(|c| c.into_owned()).collect();
        Ok(min_singular_value_normalized(&cols, m.nrows()))
    }
}

/// Builds the fundamental system of `∂_m y = A y`.
pub fn fundamental_solutions_for(
    a: &CMatrix,
    seq: &MomentSequence,
    tol: f64,
) -> Result<FundamentalSystem> {
    let chains = jordan_chains(a, tol)?;
    let mut solutions = Vec::new();
    for chain in &chains.chains {
        for k in 1..=chain.len() {
            let terms = (0..k)
                .map(|i| (chain.vectors[k - 1 - i].clone(), i))
                .collect();
            solutions.push(FundamentalSolution {
                eigenvalue: chain.eigenvalue,
                chain_index: k,
                terms,
            });
        }
    }
    Ok(FundamentalSystem {
        seq: seq.clone(),
        chains,
        solutions,
    })
}

/// Fundamental system of `Λ_α y = A y` (Dunkl factorials).
pub fn fundamental_solutions(a: &CMatrix, alpha: f64, tol: f64) -> Result<FundamentalSystem> {
    let seq = MomentSequence::dunkl(alpha, DEFAULT_P_MAX)?;
    fundamental_solutions_for(a, &seq, tol)
}

/// Coefficient residual of `∂_m y − A y` on the order-`order` truncation,
/// normalized by the largest coefficient of `y`.
pub fn residual_check(
    y: &FundamentalSolution,
    a: &CMatrix,
    seq: &MomentSequence,
    order: usize,
) -> Result<f64> {
    if order < 8 {
        return Err(Error::Domain(format!(
            "residual order must be at least 8, got {order}"
        )));
    }
    residual_of_series(&y.series(seq, order)?, a, seq)
}

/// [`residual_check`] for a vector of component series, e.g. a linear
/// combination of fundamental solutions.
pub fn residual_of_series(
    comps: &[TruncatedSeries],
    a: &CMatrix,
    seq: &MomentSequence,
) -> Result<f64> {
    let n = comps.len();
    if n == 0 || a.nrows() != n || a.ncols() != n {
        return Err(Error::Domain(
            "matrix and solution dimensions differ".into(),
        ));
    }
    let order = comps[0].order();
    if comps.iter().any(|c| c.order() != order) || order < 1 {
        return Err(Error::Domain(
            "component series must share an order of at least 1".into(),
        ));
    }
    let derivs = comps
        .iter()
        .map(|c| c.moment_derivative(seq))
        .collect::<Result<Vec<_>>>()?;
    let scale = comps
        .iter()
        .map(TruncatedSeries::max_abs)
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut worst = 0.0_f64;
    for i in 0..n {
        for p in 0..order {
            let ay: Complex64 = (0..n).map(|j| a[(i, j)] * comps[j].coeffs()[p]).sum();
            worst = worst.max((derivs[i].coeffs()[p] - ay).norm());
        }
    }
    Ok(worst / scale)
}

/// Classical indicator `h_E(θ) = cos θ` on `|θ| ≤ π/2`, zero elsewhere.
pub fn exp_indicator(theta: f64) -> f64 {
    let t = wrap_angle(theta);
    if t.abs() <= PI / 2.0 {
        t.cos()
    } else {
        0.0
    }
}

/// `𝒜 = ∩_λ (π/2 − arg λ, 3π/2 − arg λ)` as an open interval, or `None`
/// when empty. A zero eigenvalue yields a constant solution, so `𝒜 = ∅`.
pub fn decay_sector(eigenvalues: &[Complex64]) -> Option<(f64, f64)> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut anchor: Option<f64> = None;
    for l in eigenvalues {
        if l.norm() == 0.0 {
            return None;
        }
        let mut start = PI / 2.0 - l.arg();
        if let Some(a) = anchor {
            // bring the arc start into (a − π, a + π]
            while start <= a - PI {
                start += 2.0 * PI;
            }
            while start > a + PI {
                start -= 2.0 * PI;
            }
        } else {
            anchor = Some(start);
        }
        lo = lo.max(start);
        hi = hi.min(start + PI);
    }
    (lo < hi).then_some((lo, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentGrowth {
    pub solution: usize,
    pub component: usize,
    pub report: GrowthReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsReport {
    pub components: Vec<ComponentGrowth>,
    /// `max |λ|`.
    pub sigma_bound: f64,
    pub rho_ok: bool,
    pub sigma_ok: bool,
    pub sector: Option<(f64, f64)>,
    pub decay: Vec<DecayReport>,
    /// `None` when the decay check was skipped.
    pub decay_ok: Option<bool>,
    /// `None` when the indicator check was skipped.
    pub indicator_ok: Option<bool>,
    pub notices: Vec<String>,
}

/// Order/type slack and indicator slack used by [`solution_asymptotics`].
pub const RHO_SLACK: f64 = 0.1;
pub const SIGMA_FACTOR: f64 = 1.15;
pub const INDICATOR_SLACK: f64 = 0.15;

/// Growth, sector-decay and indicator diagnostics for every nonzero component.
///
/// `σ̂` is only compared against `max|λ|` for components with `ρ̂ ≥ 1/2`
/// (order-zero components carry no type bound). Decay and indicator checks
/// need a diagonalizable `A` and are skipped otherwise.
pub fn solution_asymptotics(
    system: &FundamentalSystem,
    radii: &[f64],
    directions: &[f64],
) -> Result<AsymptoticsReport> {
    let seq = &system.seq;
    let eigenvalues: Vec<Complex64> = system.chains.chains.iter().map(|c| c.eigenvalue).collect();
    let sigma_bound = eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let mut notices = Vec::new();

    let mut components = Vec::new();
    for (si, sol) in system.solutions.iter().enumerate() {
        for ci in 0..sol.dimension() {
            if sol.component_is_zero(ci) {
                continue;
            }
            let f = |z: Complex64| {
                sol.evaluate(z, seq, 1e-15)
                    .map(|v| v[ci])
                    .unwrap_or(Complex64::new(f64::NAN, 0.0))
            };
            components.push(ComponentGrowth {
                solution: si,
                component: ci,
                report: growth_scan(f, radii, directions)?,
            });
        }
    }
    let rho_ok = components.iter().all(|c| c.report.rho <= 1.0 + RHO_SLACK);
    let sigma_ok = components
        .iter()
        .all(|c| c.report.rho < 0.5 || c.report.sigma <= SIGMA_FACTOR * sigma_bound);

    let diagonalizable = system.chains.is_diagonalizable();
    let sector = decay_sector(&eigenvalues);
    let mut decay = Vec::new();
    let decay_ok = if !diagonalizable {
        notices.push("A is not diagonalizable; decay check skipped".into());
        None
    } else if let Some((lo, hi)) = sector {
        let mid = wrap_angle((lo + hi) / 2.0);
        for c in &components {
            let sol = &system.solutions[c.solution];
            let f = |z: Complex64| {
                sol.evaluate(z, seq, 1e-15)
                    .map(|v| v[c.component])
                    .unwrap_or(Complex64::new(f64::NAN, 0.0))
            };
            decay.push(decay_scan(f, mid, radii)?);
        }
        Some(decay.iter().all(|d| d.decaying))
    } else {
        notices.push("decay sector is empty; decay check skipped".into());
        None
    };

    let indicator_ok = if diagonalizable {
        let ok = components.iter().all(|c| {
            c.report.indicator.iter().all(|s| {
                let bound = eigenvalues
                    .iter()
                    .map(|l| l.norm() * exp_indicator(s.theta + l.arg()))
                    .fold(f64::NEG_INFINITY, f64::max);
                s.h <= bound + INDICATOR_SLACK * sigma_bound
            })
        });
        Some(ok)
    } else {
        notices.push("A is not diagonalizable; indicator check skipped".into());
        None
    };

    Ok(AsymptoticsReport {
        components,
        sigma_bound,
        rho_ok,
        sigma_ok,
        sector,
        decay,
        decay_ok,
        indicator_ok,
        notices,
    })
}

/// Parses a matrix from JSON: either nested rows of `[re, im]` pairs or a
/// flat row-major list of `n²` pairs.
pub fn parse_matrix_json(text: &str) -> Result<CMatrix> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let pair = |v: &serde_json::Value| -> Result<Complex64> {
        match v.as_array().map(|a| {
            (
                a.len(),
                a.first().and_then(|x| x.as_f64()),
                a.get(1).and_then(|x| x.as_f64()),
            )
        }) {
            Some((2, Some(re), Some(im))) => Ok(Complex64::new(re, im)),
            _ => Err(Error::Parse(format!("expected [re, im], got {v}"))),
        }
    };
    let items = value
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be a JSON array".into()))?;
    if items.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    let nested = items[0]
        .as_array()
        .and_then(|r| r.first())
        .is_some_and(|x| x.is_array());
    let entries: Vec<Complex64> = if nested {
        let n = items.len();
        let mut out = Vec::with_capacity(n * n);
        for row in items {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "row has {} entries, expected {n}",
                    row.len()
                )));
            }
            for v in row {
                out.push(pair(v)?);
            }
        }
        out
    } else {
        items.iter().map(pair).collect::<Result<_>>()?
    };
    let n = (entries.len() as f64).sqrt().round() as usize;
    if n * n != entries.len() {
        return Err(Error::Parse(format!(
            "{} entries do not form a square matrix",
            entries.len()
        )));
    }
    Ok(CMatrix::from_row_slice(n, n, &entries))
}
