//! Translation-type functional equations `Σ c_ℓ τ_{ω_ℓ,m} y = 0`.
//!
//! Every zero `z₀` of `f(z) = Σ c_ℓ E_m(ω_ℓ z)` gives the solution
//! `y(z) = E_m(z₀ z)`, because `τ_{ω,m} E_m(ξ·) = E_m(ξω) E_m(ξ·)`.
//! Zeros are located by the argument principle on rectangles.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entire::{e_m_derivative, e_m_stable};
use crate::error::{Error, Result};
use crate::moment_seq::{MomentSequence, SequenceSpec, DEFAULT_P_MAX};
use crate::numeric::wrap_angle;
use crate::series::TruncatedSeries;

const EVAL_TOL: f64 = 1e-14;

/// `f(z) = Σ c_ℓ E_m(ω_ℓ z)`.
#[derive(Debug, Clone)]
pub struct ExpPolynomial {
    c: Vec<Complex64>,
    omega: Vec<Complex64>,
    seq: MomentSequence,
}

impl ExpPolynomial {
    pub fn new(c: Vec<Complex64>, omega: Vec<Complex64>, seq: MomentSequence) -> Result<Self> {
        if c.is_empty() || c.len() != omega.len() {
            return Err(Error::Domain(format!(
                "need matching non-empty coefficient and frequency lists, got {} and {}",
                c.len(),
                omega.len()
            )));
        }
        if c.iter().all(|x| x.norm() == 0.0) {
            return Err(Error::Domain("all coefficients are zero".into()));
        }
        if c.iter()
            .chain(&omega)
            .any(|x| !(x.re.is_finite() && x.im.is_finite()))
        {
            return Err(Error::Domain("non-finite coefficient or frequency".into()));
        }
        Ok(Self { c, omega, seq })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.c
    }

    pub fn frequencies(&self) -> &[Complex64] {
        &self.omega
    }

    pub fn seq(&self) -> &MomentSequence {
        &self.seq
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_with_scale(z)?.0)
    }

    /// `(f(z), Σ |c_ℓ E_m(ω_ℓ z)|)`; the second entry sizes the rounding noise.
    pub fn eval_with_scale(&self, z: Complex64) -> Result<(Complex64, f64)> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (c, w) in self.c.iter().zip(&self.omega) {
            let t = c * e_m_stable(w * z, &self.seq, EVAL_TOL)?.value;
            acc += t;
            scale += t.norm();
        }
        Ok((acc, scale))
    }

    /// Classical derivative `Σ c_ℓ ω_ℓ E_m′(ω_ℓ z)`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, w) in self.c.iter().zip(&self.omega) {
            acc += c * w * e_m_derivative(w * z, &self.seq, EVAL_TOL)?.value;
        }
        Ok(acc)
    }
}

pub fn eval_exp_polynomial(f: &ExpPolynomial, z: Complex64) -> Result<Complex64> {
    f.eval(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let r = Self {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        if ![re_min, re_max, im_min, im_max]
            .iter()
            .all(|x| x.is_finite())
        {
            return Err(Error::Domain("box corners must be finite".into()));
        }
        if !(re_max > re_min && im_max > im_min) {
            return Err(Error::Domain(format!("box sides must be positive: {r:?}")));
        }
        Ok(r)
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (self.re_min..=self.re_max).contains(&z.re) && (self.im_min..=self.im_max).contains(&z.im)
    }

    fn expanded(&self, d: f64) -> Self {
        Self {
            re_min: self.re_min - d,
            re_max: self.re_max + d,
            im_min: self.im_min - d,
            im_max: self.im_max + d,
        }
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn split(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let xm = self.re_min + fx * self.width();
        let ym = self.im_min + fy * self.height();
        [
            Rect {
                re_max: xm,
                im_max: ym,
                ..*self
            },
            Rect {
                re_min: xm,
                im_max: ym,
                ..*self
            },
            Rect {
                re_max: xm,
                im_min: ym,
                ..*self
            },
            Rect {
                re_min: xm,
                im_min: ym,
                ..*self
            },
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub z0: Complex64,
    pub residual: f64,
    pub newton_steps: usize,
    #[serde(rename = "box")]
    pub enclosing: Rect,
    /// Winding count of the enclosing box when it was reported as a cluster.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cluster_count: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxFailure {
    #[serde(rename = "box")]
    pub enclosing: Rect,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSearch {
    pub roots: Vec<RootRecord>,
    pub failures: Vec<BoxFailure>,
    /// Winding count of the (possibly perturbed) initial box.
    pub total_count: i64,
    pub search_box: Rect,
}

const EDGE_SEGMENTS: usize = 16;
const MAX_EDGE_DEPTH: usize = 40;
const MAX_NEWTON: usize = 60;
/// Relative rounding level of `Σ c_ℓ E_m(ω_ℓ z)`.
const NOISE: f64 = 1e-13;
const SPLITS: [(f64, f64); 3] = [(0.4871, 0.5129), (0.4523, 0.5417), (0.5389, 0.4611)];

struct Counter<'a> {
    f: &'a ExpPolynomial,
    cache: HashMap<(u64, u64), (Complex64, f64)>,
    /// Absolute floor for boundary values; `None` uses the rounding noise.
    floor: Option<f64>,
}

enum Winding {
    Count(i64),
    Degenerate(String),
}

impl Counter<'_> {
    fn value(&mut self, z: Complex64) -> Result<(Complex64, f64)> {
        let key = (z.re.to_bits(), z.im.to_bits());
        if let Some(v) = self.cache.get(&key) {
            return Ok(*v);
        }
        let v = self.f.eval_with_scale(z)?;
        self.cache.insert(key, v);
        Ok(v)
    }

    /// Phase change of `f` along `[a, b]`, refining where a step exceeds π/2.
    fn edge(&mut self, a: Complex64, b: Complex64) -> Result<std::result::Result<f64, String>> {
        let mut total = 0.0;
        let mut stack: Vec<(Complex64, Complex64, usize)> = Vec::new();
        for k in (0..EDGE_SEGMENTS).rev() {
            let t0 = k as f64 / EDGE_SEGMENTS as f64;
            let t1 = (k + 1) as f64 / EDGE_SEGMENTS as f64;
            stack.push((a + (b - a) * t0, a + (b - a) * t1, 0));
        }
        while let Some((p, q, depth)) = stack.pop() {
            let ((fp, sp), (fq, sq)) = (self.value(p)?, self.value(q)?);
            for (z, fz, scale) in [(p, fp, sp), (q, fq, sq)] {
                let floor = self.floor.unwrap_or(NOISE * scale);
                if !(fz.norm() > floor) {
                    return Ok(Err(format!(
                        "|f| = {:e} below {floor:e} on the boundary at {z}",
                        fz.norm()
                    )));
                }
            }
            let d = wrap_angle(fq.arg() - fp.arg());
            if d.abs() < PI / 2.0 {
                total += d;
            } else if depth >= MAX_EDGE_DEPTH {
                return Ok(Err(format!("phase step {d:.3} unresolved near {p}")));
            } else {
                let m = (p + q) * 0.5;
                stack.push((m, q, depth + 1));
                stack.push((p, m, depth + 1));
            }
        }
        Ok(Ok(total))
    }

    fn winding(&mut self, r: &Rect) -> Result<Winding> {
        let c = r.corners();
        let mut total = 0.0;
        for i in 0..4 {
            match self.edge(c[i], c[(i + 1) % 4])? {
                Ok(d) => total += d,
                Err(msg) => return Ok(Winding::Degenerate(msg)),
            }
        }
        let w = total / (2.0 * PI);
        let n = w.round();
        if (w - n).abs() > 0.05 || n < 0.0 {
            return Ok(Winding::Degenerate(format!(
                "winding number {w:.4} is not a non-negative integer"
            )));
        }
        Ok(Winding::Count(n as i64))
    }
}

fn newton(f: &ExpPolynomial, start: Complex64) -> Result<(Complex64, usize)> {
    let mut z = start;
    let mut prev = f64::INFINITY;
    for step in 1..=MAX_NEWTON {
        let fz = f.eval(z)?;
        let dz = f.derivative(z)?;
        if dz.norm() == 0.0 || !dz.norm().is_finite() {
            return Ok((z, step));
        }
        let delta = fz / dz;
        let size = delta.norm() / z.norm().max(1.0);
        // steps that stop shrinking at this size are evaluation noise
        if size >= prev && size < 1e-8 {
            return Ok((z, step));
        }
        z -= delta;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Ok((start, step));
        }
        if size <= 1e-15 {
            return Ok((z, step));
        }
        prev = size;
    }
    Ok((z, MAX_NEWTON))
}

/// Zeros of `f` inside `region`, each with `|f(z₀)| ≤ tol`.
///
/// Boxes with winding count one are polished by Newton from their centre;
/// larger counts are subdivided until the side drops below `tol` (or the
/// split lines reach rounding noise) and then reported as a cluster. Boxes
/// whose count cannot be resolved go to `failures`. The result is sorted by `(re, im)`.
pub fn find_roots(f: &ExpPolynomial, region: Rect, tol: f64) -> Result<RootSearch> {
    let region = Rect::new(region.re_min, region.re_max, region.im_min, region.im_max)?;
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let mut counter = Counter {
        f,
        cache: HashMap::new(),
        floor: Some(tol),
    };

    let mut search_box = region;
    let mut total = None;
    for k in 0..8 {
        let candidate = if k == 0 {
            region
        } else {
            region.expanded(tol * region.diagonal() * 10f64.powi(k - 1))
        };
        if let Winding::Count(n) = counter.winding(&candidate)? {
            search_box = candidate;
            total = Some(n);
            break;
        }
    }
    let Some(total_count) = total else {
        return Err(Error::BoundaryDegeneracy(
            "f vanishes or oscillates unresolvably on every perturbation of the box boundary"
                .into(),
        ));
    };
    // interior split lines only need f to stay above rounding noise
    counter.floor = None;

    let mut roots = Vec::new();
    let mut failures = Vec::new();
    let mut queue = vec![(search_box, total_count)];
    while let Some((r, count)) = queue.pop() {
        if count == 0 {
            continue;
        }
        let small = r.width().max(r.height()) < tol;
        if count == 1 {
            let (z, steps) = newton(f, r.center())?;
            let res = f.eval(z)?.norm();
            if r.contains(z) && res <= tol {
                roots.push(RootRecord {
                    z0: z,
                    residual: res,
                    newton_steps: steps,
                    enclosing: r,
                    cluster_count: None,
                });
                continue;
            }
        }
        if small {
            let z = r.center();
            let res = f.eval(z)?.norm();
            if res <= tol {
                roots.push(RootRecord {
                    z0: z,
                    residual: res,
                    newton_steps: 0,
                    enclosing: r,
                    cluster_count: (count > 1).then_some(count),
                });
            } else {
                failures.push(BoxFailure {
                    enclosing: r,
                    reason: format!(
                        "box below tolerance holds {count} zeros but |f(centre)| = {res:e}"
                    ),
                });
            }
            continue;
        }

        let mut placed = false;
        let mut last_reason = String::new();
        for (fx, fy) in SPLITS {
            let children = r.split(fx, fy);
            let mut counts = Vec::with_capacity(4);
            for child in &children {
                match counter.winding(child)? {
                    Winding::Count(n) => counts.push(n),
                    Winding::Degenerate(msg) => {
                        last_reason = msg;
                        break;
                    }
                }
            }
            if counts.len() < 4 {
                continue;
            }
            if counts.iter().sum::<i64>() != count {
                last_reason = format!("children counts {counts:?} do not add up to {count}");
                continue;
            }
            queue.extend(children.into_iter().zip(counts));
            placed = true;
            break;
        }
        if !placed {
            // a multiple zero can hit rounding noise before the box shrinks below tol
            let z = r.center();
            let res = f.eval(z)?.norm();
            if count > 1 && res <= tol {
                roots.push(RootRecord {
                    z0: z,
                    residual: res,
                    newton_steps: 0,
                    enclosing: r,
                    cluster_count: Some(count),
                });
                continue;
            }
            failures.push(BoxFailure {
                enclosing: r,
                reason: last_reason,
            });
        }
    }
    // real parts equal up to tol count as ties so rounding noise does not reorder roots
    let key = |z: Complex64| ((z.re / tol).round() + 0.0, z.im);
    roots.sort_by(|a, b| {
        let (ka, kb) = (key(a.z0), key(b.z0));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    Ok(RootSearch {
        roots,
        failures,
        total_count,
        search_box,
    })
}

/// A candidate solution of the functional equation.
#[derive(Debug, Clone, PartialEq)]
pub enum SolutionFn {
    /// `Σ a_k E_m(z_k ·)` given as `(a_k, z_k)` pairs.
    Combination(Vec<(Complex64, Complex64)>),
    Series(TruncatedSeries),
}

/// `y(z) = E_m(z₀ z)`.
pub fn build_solution(z0: Complex64) -> SolutionFn {
    SolutionFn::Combination(vec![(Complex64::new(1.0, 0.0), z0)])
}

impl SolutionFn {
    pub fn evaluate(&self, z: Complex64, seq: &MomentSequence) -> Result<Complex64> {
        match self {
            SolutionFn::Combination(terms) => terms
                .iter()
                .map(|(a, z0)| Ok(a * e_m_stable(z0 * z, seq, EVAL_TOL)?.value))
                .sum(),
            SolutionFn::Series(s) => Ok(s.evaluate(z)),
        }
    }

    /// Taylor view truncated at `order`.
    pub fn series(&self, seq: &MomentSequence, order: usize) -> Result<TruncatedSeries> {
        match self {
            SolutionFn::Combination(terms) => {
                let mut acc = TruncatedSeries::zeros(order);
                for (a, z0) in terms {
                    acc = acc.add(&TruncatedSeries::exponential(seq, *z0, order)?.scale(*a));
                }
                Ok(acc)
            }
            SolutionFn::Series(s) => Ok(s.clone()),
        }
    }

    /// `a·self + b·other`; mixed forms are combined as series at the
    /// series order.
    pub fn combine(
        &self,
        a: Complex64,
        other: &SolutionFn,
        b: Complex64,
        seq: &MomentSequence,
    ) -> Result<SolutionFn> {
        Ok(match (self, other) {
            (SolutionFn::Combination(x), SolutionFn::Combination(y)) => SolutionFn::Combination(
                x.iter()
                    .map(|(k, z)| (k * a, *z))
                    .chain(y.iter().map(|(k, z)| (k * b, *z)))
                    .collect(),
            ),
            (SolutionFn::Series(s), _) | (_, SolutionFn::Series(s)) => {
                let order = s.order();
                let (x, y) = (self.series(seq, order)?, other.series(seq, order)?);
                SolutionFn::Series(x.scale(a).add(&y.scale(b)))
            }
        })
    }
}

fn check_equation(c: &[Complex64], omega: &[Complex64]) -> Result<()> {
    if c.is_empty() || c.len() != omega.len() {
        return Err(Error::Domain(
            "coefficient and frequency lists must match".into(),
        ));
    }
    Ok(())
}

/// `max_z |Σ c_ℓ (τ_{ω_ℓ,m} y)(z)|` over `samples`.
///
/// Combinations of exponentials use `τ_ω E_m(ξ·) = E_m(ξω) E_m(ξ·)`; series
/// are translated coefficientwise.
pub fn equation_residual(
    y: &SolutionFn,
    c: &[Complex64],
    omega: &[Complex64],
    seq: &MomentSequence,
    samples: &[Complex64],
) -> Result<f64> {
    check_equation(c, omega)?;
    let mut worst = 0.0_f64;
    match y {
        SolutionFn::Combination(terms) => {
            // per exponential: (Σ_ℓ c_ℓ E(ξ ω_ℓ)) E(ξ z)
            let mut weights = Vec::with_capacity(terms.len());
            for (a, xi) in terms {
                let mut s = Complex64::new(0.0, 0.0);
                for (cl, wl) in c.iter().zip(omega) {
                    s += cl * e_m_stable(xi * wl, seq, EVAL_TOL)?.value;
                }
                weights.push(a * s);
            }
            for z in samples {
                let mut acc = Complex64::new(0.0, 0.0);
                for (w, (_, xi)) in weights.iter().zip(terms) {
                    acc += w * e_m_stable(xi * z, seq, EVAL_TOL)?.value;
                }
                worst = worst.max(acc.norm());
            }
        }
        SolutionFn::Series(s) => {
            let mut total = TruncatedSeries::zeros(s.order());
            for (cl, wl) in c.iter().zip(omega) {
                total = total.add(&s.m_translate(*wl, seq)?.scale(*cl));
            }
            for z in samples {
                worst = worst.max(total.evaluate(*z).norm());
            }
        }
    }
    Ok(worst)
}

/// Both residual paths for `y = E_m(z₀·)`: `(fast, slow)`, the slow one on
/// the order-`order` truncation.
pub fn residual_both_paths(
    z0: Complex64,
    c: &[Complex64],
    omega: &[Complex64],
    seq: &MomentSequence,
    samples: &[Complex64],
    order: usize,
) -> Result<(f64, f64)> {
    let y = build_solution(z0);
    let fast = equation_residual(&y, c, omega, seq, samples)?;
    let slow = equation_residual(
        &SolutionFn::Series(y.series(seq, order)?),
        c,
        omega,
        seq,
        samples,
    )?;
    Ok((fast, slow))
}

/// `(τ_{ω,m} E_m(ξ·))(z)` through the truncated series of order `order`.
pub fn translated_exponential(
    xi: Complex64,
    omega: Complex64,
    z: Complex64,
    seq: &MomentSequence,
    order: usize,
) -> Result<Complex64> {
    Ok(TruncatedSeries::exponential(seq, xi, order)?
        .m_translate(omega, seq)?
        .evaluate(z))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub independent: bool,
    /// `ln |∏_{i<j} (z_i − z_j)|`; zero for a single root.
    pub log_abs_det: f64,
    pub min_distance: f64,
}

/// Vandermonde test for the solutions `E_m(z_i ·)`.
pub fn independence_check(roots: &[Complex64]) -> Result<IndependenceReport> {
    if roots.is_empty() {
        return Err(Error::Domain("no roots given".into()));
    }
    let scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let threshold = 1e-10 * scale;
    let mut log_det = 0.0;
    let mut min_distance = f64::INFINITY;
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let d = (roots[i] - roots[j]).norm();
            min_distance = min_distance.min(d);
            if d <= threshold {
                return Err(Error::Degeneracy(format!(
                    "roots {} and {} are closer than {threshold:e}",
                    roots[i], roots[j]
                )));
            }
            log_det += d.ln();
        }
    }
    Ok(IndependenceReport {
        independent: true,
        log_abs_det: log_det,
        min_distance,
    })
}

/// Sample points on `rings` circles of radius `radius·k/rings` (plus the
/// origin), `per_ring` points each.
pub fn disc_samples(radius: f64, rings: usize, per_ring: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    for k in 1..=rings {
        let r = radius * k as f64 / rings as f64;
        for j in 0..per_ring {
            let phase = 2.0 * PI * (j as f64 + 0.5 * (k % 2) as f64) / per_ring as f64;
            out.push(Complex64::from_polar(r, phase));
        }
    }
    out
}

/// A root-search problem as read from JSON:
/// `{c, omega, sequence: {family, alpha}, box: {re_min, re_max, im_min, im_max}, tol}`.
#[derive(Debug, Clone)]
pub struct RootProblem {
    pub f: ExpPolynomial,
    pub region: Rect,
    pub tol: f64,
}

#[derive(Deserialize)]
struct ProblemFile {
    c: Vec<[f64; 2]>,
    omega: Vec<[f64; 2]>,
    #[serde(default)]
    sequence: Option<SequenceSpec>,
    #[serde(rename = "box", default)]
    region: Option<Rect>,
    #[serde(default)]
    tol: Option<f64>,
}

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

impl RootProblem {
    /// Missing `sequence` means factorials, missing `box` means
    /// [`default_box`], missing `tol` means [`DEFAULT_ROOT_TOL`].
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text)?;
        let pair = |v: &[f64; 2]| Complex64::new(v[0], v[1]);
        let c: Vec<Complex64> = file.c.iter().map(pair).collect();
        let omega: Vec<Complex64> = file.omega.iter().map(pair).collect();
        let seq = match &file.sequence {
            Some(spec) => spec.build(DEFAULT_P_MAX)?,
            None => MomentSequence::factorial(DEFAULT_P_MAX),
        };
        let f = ExpPolynomial::new(c, omega, seq)?;
        let region = match file.region {
            Some(r) => Rect::new(r.re_min, r.re_max, r.im_min, r.im_max)?,
            None => default_box(&f)?,
        };
        Ok(Self {
            f,
            region,
            tol: file.tol.unwrap_or(DEFAULT_ROOT_TOL),
        })
    }
}

/// `[−R, R]²` with `R = 10(1 + ln⁺(max|c|/min|c|))/max|ω|`, where `min|c|`
/// runs over nonzero coefficients.
pub fn default_box(f: &ExpPolynomial) -> Result<Rect> {
    let wmax = f.frequencies().iter().map(|w| w.norm()).fold(0.0, f64::max);
    let mags: Vec<f64> = f
        .coefficients()
        .iter()
        .map(|x| x.norm())
        .filter(|&x| x > 0.0)
        .collect();
    let spread = mags.iter().copied().fold(0.0, f64::max)
        / mags.iter().copied().fold(f64::INFINITY, f64::min);
    let r = 10.0 * (1.0 + spread.ln().max(0.0)) / wmax.max(1e-3);
    Rect::new(-r, r, -r, r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSummary {
    pub z0: Complex64,
    pub residual: f64,
    pub newton_steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_count: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceOutcome {
    pub independent: bool,
    pub log_abs_det: Option<f64>,
    pub min_distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Roots, per-root equation residuals on the unit disc and the Vandermonde
/// verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub roots: Vec<RootSummary>,
    pub equation_residuals: Vec<f64>,
    pub failures: Vec<BoxFailure>,
    pub total_count: i64,
    pub search_box: Rect,
    pub independence: Option<IndependenceOutcome>,
}

pub fn solve_root_problem(problem: &RootProblem) -> Result<RootReport> {
    let f = &problem.f;
    let search = find_roots(f, problem.region, problem.tol)?;
    let samples = disc_samples(1.0, 4, 16);
    let equation_residuals = search
        .roots
        .iter()
        .map(|r| {
            equation_residual(
                &build_solution(r.z0),
                f.coefficients(),
                f.frequencies(),
                f.seq(),
                &samples,
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    let zs: Vec<Complex64> = search.roots.iter().map(|r| r.z0).collect();
    let independence = (!zs.is_empty()).then(|| match independence_check(&zs) {
        Ok(rep) => IndependenceOutcome {
            independent: rep.independent,
            log_abs_det: Some(rep.log_abs_det),
            min_distance: rep.min_distance.is_finite().then_some(rep.min_distance),
            error: None,
        },
        Err(e) => IndependenceOutcome {
            independent: false,
            log_abs_det: None,
            min_distance: None,
            error: Some(e.to_string()),
        },
    });
    Ok(RootReport {
        roots: search
            .roots
            .iter()
            .map(|r| RootSummary {
                z0: r.z0,
                residual: r.residual,
                newton_steps: r.newton_steps,
                cluster_count: r.cluster_count,
            })
            .collect(),
        equation_residuals,
        failures: search.failures,
        total_count: search.total_count,
        search_box: search.search_box,
        independence,
    })
}
