//! L_p affine surface areas, L_p Steiner coefficients and the L_p Steiner
//! series of parallel bodies.
//!
//! Notation used throughout, for a body in dimension `n` and `p != -n`:
//!
//! | symbol | value            | role                                   |
//! |--------|------------------|----------------------------------------|
//! | `beta` | `n/(n+p)`        | power of the curvature function `s_{n-1}` |
//! | `q`    | `p/(n+p)`        | power of the Gauss curvature `H_{n-1}`  |
//! | `gamma`| `n(1-p)/(n+p)`   | power of the support value              |
//! | `alpha`| `n(n-p)/(n+p)`   | homogeneity degree of `as_p`            |
//!
//! On the boundary of `K + tB` the integrand of `as_p` pulls back to
//! `(d + t)^gamma H_{n-1}^q prod_i (1 + k_i t)^beta`, where `d = <x, N(x)>`.
//! The coefficient of `t^k` is `V_k^p`; the coefficient of `t^m` in the
//! curvature product is the composition sum `G_m`, so
//! `V_k^p = sum_m binom(gamma, k - m) W^p_{m,k}`.
//!
//! Zero curvature is handled by [`flat_power`]: `0^e` is `0` for `e > 0`,
//! `1` for `e = 0` and a divergence otherwise.

use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::bodies::{maximize_on_sphere, Body, BoundaryJet, Region, Smoothness};
use crate::combinatorics::{esf_weight, gen_binom_f64, multinomial, parse_rational, to_f64, weighted_compositions};
use crate::error::{Error, Result};
use crate::quadrature::{componentwise, integrate_boundary_with, integrate_directions, integrate_sphere, Accuracy, IntegralEstimate};

/// The exponent `p`, including the two infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PValue {
    Finite(f64),
    PosInf,
    NegInf,
}

impl PValue {
    pub fn is_infinite(&self) -> bool {
        !matches!(self, PValue::Finite(_))
    }

    /// Finite value, `+-inf` otherwise.
    pub fn as_f64(&self) -> f64 {
        match *self {
            PValue::Finite(p) => p,
            PValue::PosInf => f64::INFINITY,
            PValue::NegInf => f64::NEG_INFINITY,
        }
    }

    pub fn exponents(&self, n: usize) -> Result<Exponents> {
        Exponents::new(n, *self)
    }
}

impl From<f64> for PValue {
    fn from(p: f64) -> Self {
        if p == f64::INFINITY {
            PValue::PosInf
        } else if p == f64::NEG_INFINITY {
            PValue::NegInf
        } else {
            PValue::Finite(p)
        }
    }
}

impl FromStr for PValue {
    type Err = Error;

    /// Accepts `inf`, `+inf`, `-inf`, fractions `a/b` and decimals.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "infinity" => Ok(PValue::PosInf),
            "-inf" | "-infinity" => Ok(PValue::NegInf),
            other => Ok(PValue::Finite(to_f64(&parse_rational(other)?))),
        }
    }
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PValue::Finite(p) => write!(f, "{p}"),
            PValue::PosInf => write!(f, "inf"),
            PValue::NegInf => write!(f, "-inf"),
        }
    }
}

impl Serialize for PValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The exponents derived from `(n, p)`; exact at `p = +-inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponents {
    pub n: usize,
    pub p: PValue,
    pub beta: f64,
    pub q: f64,
    pub gamma: f64,
    pub alpha: f64,
}

impl Exponents {
    pub fn new(n: usize, p: PValue) -> Result<Self> {
        let nf = n as f64;
        match p {
            PValue::Finite(v) => {
                if v == -nf {
                    return Err(Error::PoleAtMinusN { n: n as u32 });
                }
                if !v.is_finite() {
                    return Err(Error::InvalidParameter(format!("p = {v} is not a number")));
                }
                Ok(Exponents {
                    n,
                    p,
                    beta: nf / (nf + v),
                    q: v / (nf + v),
                    gamma: nf * (1.0 - v) / (nf + v),
                    alpha: nf * (nf - v) / (nf + v),
                })
            }
            PValue::PosInf | PValue::NegInf => Ok(Exponents {
                n,
                p,
                beta: 0.0,
                q: 1.0,
                gamma: -nf,
                alpha: -nf,
            }),
        }
    }

    /// `p in (-n, 0)`, outside the range where the functionals are first introduced.
    pub fn in_negative_band(&self) -> bool {
        matches!(self.p, PValue::Finite(v) if v > -(self.n as f64) && v < 0.0)
    }

    /// `l` when `beta = l` is a positive integer, so the series is a polynomial.
    pub fn finite_sum_index(&self) -> Option<u32> {
        let l = self.beta.round();
        (self.p.as_f64().is_finite() && l >= 1.0 && (self.beta - l).abs() < 1e-12).then_some(l as u32)
    }
}

/// `base^e` with the flat-face convention for `base = 0`.
///
/// Negative inputs within roundoff of zero are treated as zero.
pub fn flat_power(base: f64, e: f64) -> f64 {
    if base > 0.0 {
        (e * base.ln()).exp()
    } else if e > 0.0 {
        0.0
    } else if e == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// `vol_{n-1}(S^{n-1}) = 2 pi^{n/2} / Gamma(n/2)`.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        _ => 2.0 * std::f64::consts::PI * sphere_area(n - 2) / (n - 2) as f64,
    }
}

/// Flags attached to a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Note {
    /// Zero-curvature pieces exist and contribute nothing (`q > 0`).
    FlatFaceZero,
    /// Zero-curvature pieces exist and contribute with weight one (`q = 0`).
    FlatFaceUnit,
    /// Zero-curvature pieces of positive measure meet a negative power.
    Divergent,
    /// The body has no rolling balls and the curvature power is negative;
    /// the integral may be infinite even if the quadrature returns a number.
    MayDiverge,
    /// Level doubling stopped at the maximum level before meeting the tolerance.
    Unconverged,
    /// `p` lies in `(-n, 0)`.
    NegativeBand,
}

impl fmt::Display for Note {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Note::FlatFaceZero => "flat-face-zero",
            Note::FlatFaceUnit => "flat-face-unit",
            Note::Divergent => "divergent",
            Note::MayDiverge => "may-diverge",
            Note::Unconverged => "unconverged",
            Note::NegativeBand => "negative-band",
        })
    }
}

/// Identifies a computed quantity completely.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalId {
    pub name: &'static str,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<PValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    /// Order `s` of a mixed affine surface area, or `i` of a (dual) quermassintegral.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub body: String,
}

impl FunctionalId {
    fn new(name: &'static str, body: &Body) -> Self {
        FunctionalId {
            name,
            n: body.dim(),
            p: None,
            m: None,
            k: None,
            order: None,
            t: None,
            body: body.label().to_string(),
        }
    }

    fn p(mut self, p: PValue) -> Self {
        self.p = Some(p);
        self
    }

    fn mk(mut self, m: Option<u32>, k: Option<u32>) -> Self {
        self.m = m;
        self.k = k;
        self
    }

    fn order(mut self, s: f64) -> Self {
        self.order = Some(s);
        self
    }
}

impl fmt::Display for FunctionalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[n={}", self.name, self.n)?;
        if let Some(p) = self.p {
            write!(f, ",p={p}")?;
        }
        if let Some(m) = self.m {
            write!(f, ",m={m}")?;
        }
        if let Some(k) = self.k {
            write!(f, ",k={k}")?;
        }
        if let Some(s) = self.order {
            write!(f, ",order={s}")?;
        }
        if let Some(t) = self.t {
            write!(f, ",t={t}")?;
        }
        write!(f, "]({})", self.body)
    }
}

/// One computed functional.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffResult {
    pub value: f64,
    pub error_estimate: f64,
    pub id: FunctionalId,
    pub notes: Vec<Note>,
}

impl CoeffResult {
    pub fn converged(&self) -> bool {
        !self.notes.iter().any(|n| matches!(n, Note::Unconverged | Note::Divergent))
    }
}

fn push_unique(notes: &mut Vec<Note>, note: Note) {
    if !notes.contains(&note) {
        notes.push(note);
    }
}

// ---------------------------------------------------------------------------
// Curvature polynomials

/// Composition-sum coefficients `c(n, p, i(m)) prod_j binom(n-1, j)^{i_j}` for
/// `m = 0..=m_max`, each with the exponent vector `i(m)`.
pub struct CompositionTable {
    rows: Vec<Vec<(f64, Vec<u32>)>>,
}

impl CompositionTable {
    pub fn new(n: usize, beta: f64, m_max: u32) -> Self {
        let rows = (0..=m_max)
            .map(|m| {
                weighted_compositions(m, n - 1)
                    .map(|comp| {
                        let parts: Vec<i64> = comp.parts.iter().map(|&i| i as i64).collect();
                        let c = gen_binom_f64(beta, comp.order() as i64)
                            * to_f64(&multinomial(&parts))
                            * to_f64(&esf_weight(n as u32, &comp));
                        (c, comp.parts)
                    })
                    .collect()
            })
            .collect();
        CompositionTable { rows }
    }

    /// `G_m` from the normalized symmetric functions `h[1..]` (so `h[j] = H_j`).
    pub fn eval(&self, m: usize, h: &[f64]) -> f64 {
        self.rows[m]
            .iter()
            .map(|(c, parts)| {
                let mut term = *c;
                for (j, &i) in parts.iter().enumerate() {
                    if i > 0 {
                        term *= h[j + 1].powi(i as i32);
                    }
                }
                term
            })
            .sum()
    }
}

/// Coefficients `g[0..=m_max]` of `prod_i (1 + k_i t)^beta`.
pub fn curvature_series(curvatures: &[f64], beta: f64, g: &mut [f64]) {
    let len = g.len();
    g.iter_mut().for_each(|v| *v = 0.0);
    g[0] = 1.0;
    let mut factor = vec![0.0; len];
    let mut next = vec![0.0; len];
    for &k in curvatures {
        if k == 0.0 {
            continue;
        }
        factor[0] = 1.0;
        for r in 1..len {
            factor[r] = factor[r - 1] * (beta - (r - 1) as f64) / r as f64 * k;
        }
        for (m, slot) in next.iter_mut().enumerate() {
            *slot = (0..=m).map(|r| factor[r] * g[m - r]).sum();
        }
        g.copy_from_slice(&next);
    }
}

/// `binom(gamma, j) d^{gamma - j}` for `j = 0..len`.
fn support_series(d: f64, gamma: f64, out: &mut [f64]) {
    out[0] = d.powf(gamma);
    for j in 1..out.len() {
        out[j] = out[j - 1] * (gamma - (j - 1) as f64) / (j as f64 * d);
    }
}

// ---------------------------------------------------------------------------
// Integration plumbing

/// What the zero-curvature pieces of a body do to a curvature power `e`.
fn flat_pieces_note(regions: &[Region], e: f64) -> Result<Option<Note>> {
    for region in regions {
        let mid: Vec<f64> = region.axes().iter().map(|a| a.midpoint()).collect();
        if region.jet(&mid)?.gauss_curvature() == 0.0 {
            return Ok(Some(if e > 0.0 {
                Note::FlatFaceZero
            } else if e == 0.0 {
                Note::FlatFaceUnit
            } else {
                Note::Divergent
            }));
        }
    }
    Ok(None)
}

fn estimate_notes(est: &IntegralEstimate, notes: &mut Vec<Note>) {
    if !est.converged {
        push_unique(notes, Note::Unconverged);
    }
}

/// Boundary integral of a vector integrand with curvature power `e` on
/// `H_{n-1}`. Returns `None` for the estimate if flat pieces make it diverge.
fn boundary_vector<F>(
    body: &Body,
    len: usize,
    e: f64,
    acc: &Accuracy,
    f: F,
    notes: &mut Vec<Note>,
) -> Result<Option<IntegralEstimate>>
where
    F: Fn(&BoundaryJet, &mut [f64]) -> Result<()> + Sync,
{
    let regions = body.regions();
    if let Some(note) = flat_pieces_note(&regions, e)? {
        push_unique(notes, note);
        if note == Note::Divergent {
            return Ok(None);
        }
    }
    if e < 0.0 && body.rolling_bounds().is_none() {
        push_unique(notes, Note::MayDiverge);
    }
    let est = integrate_boundary_with(body, &regions, len, acc, &f, componentwise(acc.tol))?;
    estimate_notes(&est, notes);
    Ok(Some(est))
}

fn sphere_vector<F>(body: &Body, len: usize, acc: &Accuracy, f: F, notes: &mut Vec<Note>) -> Result<IntegralEstimate>
where
    F: Fn(&[f64], &mut [f64]) -> Result<()> + Sync,
{
    if !body.has_sphere_form() {
        return Err(Error::Unsupported(format!(
            "{} has no Gauss-map parametrization; use the boundary form",
            body.label()
        )));
    }
    let est = integrate_sphere(body, len, acc, &f, componentwise(acc.tol))?;
    estimate_notes(&est, notes);
    Ok(est)
}

fn base_notes(ex: &Exponents) -> Vec<Note> {
    let mut notes = Vec::new();
    if ex.in_negative_band() {
        notes.push(Note::NegativeBand);
    }
    notes
}

fn scalar_result(id: FunctionalId, est: Option<IntegralEstimate>, notes: Vec<Note>) -> CoeffResult {
    match est {
        Some(est) => CoeffResult {
            value: est.value(),
            error_estimate: est.error_estimate(),
            id,
            notes,
        },
        None => CoeffResult {
            value: f64::INFINITY,
            error_estimate: f64::INFINITY,
            id,
            notes,
        },
    }
}

// ---------------------------------------------------------------------------
// L_p affine surface areas

/// `as_p(K) = int_{dK} H_{n-1}^q <x,N>^gamma`.
pub fn asp_boundary(body: &Body, p: PValue, acc: &Accuracy) -> Result<CoeffResult> {
    let ex = p.exponents(body.dim())?;
    let mut notes = base_notes(&ex);
    let est = boundary_vector(
        body,
        1,
        ex.q,
        acc,
        |jet, out| {
            out[0] = flat_power(jet.gauss_curvature(), ex.q) * jet.support_dot.powf(ex.gamma);
            Ok(())
        },
        &mut notes,
    )?;
    Ok(scalar_result(FunctionalId::new("asp_boundary", body).p(p), est, notes))
}

/// `as_p(K) = int_{S^{n-1}} s_{n-1}^beta h^gamma`; at `p = +-inf` this is
/// `int h^{-n} = n vol_n(K°)`.
pub fn asp_sphere(body: &Body, p: PValue, acc: &Accuracy) -> Result<CoeffResult> {
    let ex = p.exponents(body.dim())?;
    let mut notes = base_notes(&ex);
    let est = sphere_vector(
        body,
        1,
        acc,
        |u, out| {
            out[0] = if p.is_infinite() {
                body.support(u).powi(-(ex.n as i32))
            } else {
                let jet = body.sphere_jet(u)?;
                flat_power(jet.curvature_function(), ex.beta) * jet.h.powf(ex.gamma)
            };
            Ok(())
        },
        &mut notes,
    )?;
    Ok(scalar_result(FunctionalId::new("asp_sphere", body).p(p), Some(est), notes))
}

/// `as_{-n}(K) = max_u s_{n-1}(u)^{1/2} h(u)^{(n+1)/2}`.
///
/// The error estimate is the largest change of the objective under
/// perturbations of the maximizer by `1e-6` along each coordinate.
pub fn as_minus_n(body: &Body) -> Result<CoeffResult> {
    let n = body.dim();
    if !body.has_sphere_form() {
        return Err(Error::Unsupported("as_{-n} needs the Gauss-map parametrization".into()));
    }
    let f = |u: &[f64]| match body.sphere_jet(u) {
        Ok(j) => j.curvature_function().sqrt() * j.h.powf((n as f64 + 1.0) / 2.0),
        Err(_) => f64::NAN,
    };
    let (u, best) = maximize_on_sphere(n, f);
    let mut spread = 0.0f64;
    for i in 0..n {
        for step in [1e-6, -1e-6] {
            let mut v = u.clone();
            v[i] += step;
            let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= nrm);
            let fv = f(&v);
            if fv.is_finite() {
                spread = spread.max((fv - best).abs());
            }
        }
    }
    let mut notes = Vec::new();
    if !best.is_finite() {
        notes.push(Note::Divergent);
    }
    Ok(CoeffResult {
        value: best,
        error_estimate: spread,
        id: FunctionalId::new("as_minus_n", body),
        notes,
    })
}

/// `as_{p,s}(K) = int_{dK} H_{n-1}^{(s+p)/(n+p)} <x,N>^{(1-p)(n-s)/(n+p)}`.
pub fn mixed_asa(body: &Body, p: f64, s: f64, acc: &Accuracy) -> Result<CoeffResult> {
    let n = body.dim() as f64;
    let pv = PValue::Finite(p);
    let ex = pv.exponents(body.dim())?;
    let eh = (s + p) / (n + p);
    let ed = (1.0 - p) * (n - s) / (n + p);
    let mut notes = base_notes(&ex);
    let est = boundary_vector(
        body,
        1,
        eh,
        acc,
        |jet, out| {
            out[0] = flat_power(jet.gauss_curvature(), eh) * jet.support_dot.powf(ed);
            Ok(())
        },
        &mut notes,
    )?;
    Ok(scalar_result(FunctionalId::new("mixed_asa", body).p(pv).order(s), est, notes))
}

// ---------------------------------------------------------------------------
// Steiner coefficients

/// `[W^p_{0,k}, ..., W^p_{m_max,k}]` from one boundary pass, using the
/// composition sum.
pub fn w_table(body: &Body, p: PValue, m_max: u32, k: u32, acc: &Accuracy) -> Result<Vec<CoeffResult>> {
    let ex = p.exponents(body.dim())?;
    let table = CompositionTable::new(ex.n, ex.beta, m_max);
    let len = m_max as usize + 1;
    let mut notes = base_notes(&ex);
    let est = boundary_vector(
        body,
        len,
        ex.q,
        acc,
        |jet, out| {
            let hq = flat_power(jet.gauss_curvature(), ex.q);
            if hq == 0.0 {
                return Ok(());
            }
            let d = jet.support_dot;
            let base = d.powf(ex.gamma - k as f64);
            for (m, slot) in out.iter_mut().enumerate() {
                *slot = base * d.powi(m as i32) * hq * table.eval(m, &jet.esf);
            }
            Ok(())
        },
        &mut notes,
    )?;
    Ok(split(est, len, notes, |m| FunctionalId::new("W", body).p(p).mk(Some(m), Some(k))))
}

/// `[Z^p_{0,k}, ..., Z^p_{m_max,k}]` over the sphere, with `H_j = s_{n-1-j}/s_{n-1}`.
pub fn z_table(body: &Body, p: PValue, m_max: u32, k: u32, acc: &Accuracy) -> Result<Vec<CoeffResult>> {
    let ex = p.exponents(body.dim())?;
    let n = ex.n;
    let table = CompositionTable::new(n, ex.beta, m_max);
    let len = m_max as usize + 1;
    let mut notes = base_notes(&ex);
    let est = sphere_vector(
        body,
        len,
        acc,
        |u, out| {
            let jet = body.sphere_jet(u)?;
            let f = jet.curvature_function();
            let h: Vec<f64> = (0..n).map(|j| jet.s[n - 1 - j] / f).collect();
            let base = jet.h.powf(ex.gamma - k as f64) * flat_power(f, ex.beta);
            for (m, slot) in out.iter_mut().enumerate() {
                *slot = base * jet.h.powi(m as i32) * table.eval(m, &h);
            }
            Ok(())
        },
        &mut notes,
    )?;
    Ok(split(Some(est), len, notes, |m| FunctionalId::new("Z", body).p(p).mk(Some(m), Some(k))))
}

fn split<F>(est: Option<IntegralEstimate>, len: usize, notes: Vec<Note>, id: F) -> Vec<CoeffResult>
where
    F: Fn(u32) -> FunctionalId,
{
    (0..len)
        .map(|i| {
            let (value, error_estimate) = match &est {
                Some(e) => (e.values[i], e.errors[i]),
                None => (f64::INFINITY, f64::INFINITY),
            };
            CoeffResult {
                value,
                error_estimate,
                id: id(i as u32),
                notes: notes.clone(),
            }
        })
        .collect()
}

/// `W^p_{m,k}(K)`, the curvature-weighted boundary integral.
pub fn w_pmk(body: &Body, p: PValue, m: u32, k: u32, acc: &Accuracy) -> Result<CoeffResult> {
    Ok(w_table(body, p, m, k, acc)?.swap_remove(m as usize))
}

/// `Z^p_{m,k}(K)`, the same coefficient written over the sphere.
pub fn z_pmk(body: &Body, p: PValue, m: u32, k: u32, acc: &Accuracy) -> Result<CoeffResult> {
    Ok(z_table(body, p, m, k, acc)?.swap_remove(m as usize))
}

fn combine(parts: &[CoeffResult], gamma: f64, k: u32, id: FunctionalId) -> CoeffResult {
    let mut value = 0.0;
    let mut err = 0.0;
    let mut notes = Vec::new();
    for (m, r) in parts.iter().enumerate() {
        let b = gen_binom_f64(gamma, (k - m as u32) as i64);
        if b != 0.0 {
            value += b * r.value;
            err += b.abs() * r.error_estimate;
        }
        for &n in &r.notes {
            push_unique(&mut notes, n);
        }
    }
    CoeffResult {
        value,
        error_estimate: err,
        id,
        notes,
    }
}

/// `V^p_k(K) = sum_{m<=k} binom(gamma, k-m) W^p_{m,k}(K)`.
pub fn v_pk(body: &Body, p: PValue, k: u32, acc: &Accuracy) -> Result<CoeffResult> {
    let ex = p.exponents(body.dim())?;
    let parts = w_table(body, p, k, k, acc)?;
    Ok(combine(&parts, ex.gamma, k, FunctionalId::new("V", body).p(p).mk(None, Some(k))))
}

/// `U^p_k(K) = sum_{m<=k} binom(gamma, k-m) Z^p_{m,k}(K)`.
pub fn u_pk(body: &Body, p: PValue, k: u32, acc: &Accuracy) -> Result<CoeffResult> {
    let ex = p.exponents(body.dim())?;
    let parts = z_table(body, p, k, k, acc)?;
    Ok(combine(&parts, ex.gamma, k, FunctionalId::new("U", body).p(p).mk(None, Some(k))))
}

/// `[V^p_0, ..., V^p_{k_max}]` from one boundary pass using the product form
/// of the curvature polynomial. `weight_t` sets the stopping rule: level
/// doubling ends when `sum_k |delta V_k| weight_t^k < tol |sum_k V_k weight_t^k|`.
pub fn v_vector(body: &Body, p: PValue, k_max: u32, weight_t: f64, acc: &Accuracy) -> Result<(IntegralEstimate, Vec<Note>)> {
    let ex = p.exponents(body.dim())?;
    let len = k_max as usize + 1;
    let mut notes = base_notes(&ex);
    let regions = body.regions();
    if let Some(note) = flat_pieces_note(&regions, ex.q)? {
        push_unique(&mut notes, note);
        if note == Note::Divergent {
            return Err(Error::Unsupported(format!(
                "{} has flat pieces and q = {} < 0; the coefficients diverge",
                body.label(),
                ex.q
            )));
        }
    }
    let f = |jet: &BoundaryJet, out: &mut [f64]| {
        let hq = flat_power(jet.gauss_curvature(), ex.q);
        if hq == 0.0 {
            return Ok(());
        }
        let mut g = vec![0.0; len];
        let mut a = vec![0.0; len];
        curvature_series(&jet.curvatures, ex.beta, &mut g);
        support_series(jet.support_dot, ex.gamma, &mut a);
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = hq * (0..=k).map(|m| a[k - m] * g[m]).sum::<f64>();
        }
        Ok(())
    };
    let tol = acc.tol;
    let judge = move |prev: &[f64], cur: &[f64]| {
        let mut w = 1.0;
        let mut diff = 0.0;
        let mut total = 0.0;
        for (a, b) in prev.iter().zip(cur) {
            diff += (a - b).abs() * w;
            total += b * w;
            w *= weight_t;
        }
        diff <= tol * total.abs().max(f64::MIN_POSITIVE)
    };
    let est = integrate_boundary_with(body, &regions, len, acc, &f, judge)?;
    estimate_notes(&est, &mut notes);
    Ok((est, notes))
}

// ---------------------------------------------------------------------------
// Classical and dual quermassintegrals

/// `[W_0, ..., W_n]` with `W_0 = (1/n) int <x,N>` and `W_i = (1/n) int H_{i-1}`.
pub fn classical_querm_all(body: &Body, acc: &Accuracy) -> Result<Vec<CoeffResult>> {
    let n = body.dim();
    let mut notes = Vec::new();
    let est = boundary_vector(
        body,
        n + 1,
        1.0,
        acc,
        |jet, out| {
            out[0] = jet.support_dot;
            for i in 1..=n {
                out[i] = jet.esf[i - 1];
            }
            Ok(())
        },
        &mut notes,
    )?
    .expect("a positive curvature power never diverges");
    notes.retain(|n| !matches!(n, Note::FlatFaceZero));
    let nf = n as f64;
    Ok((0..=n)
        .map(|i| CoeffResult {
            value: est.values[i] / nf,
            error_estimate: est.errors[i] / nf,
            id: FunctionalId::new("W_classical", body).order(i as f64),
            notes: notes.clone(),
        })
        .collect())
}

pub fn classical_querm(body: &Body, i: usize, acc: &Accuracy) -> Result<CoeffResult> {
    if i > body.dim() {
        return Err(Error::InvalidParameter(format!("quermassintegral index {i} > n")));
    }
    Ok(classical_querm_all(body, acc)?.swap_remove(i))
}

/// `(1/n) int_{S^{n-1}} rho_K^{n-i} rho_L^i`.
pub fn dual_mixed_volume(k: &Body, l: &Body, i: f64, acc: &Accuracy) -> Result<CoeffResult> {
    let n = k.dim();
    if l.dim() != n {
        return Err(Error::InvalidParameter("bodies live in different dimensions".into()));
    }
    let nf = n as f64;
    let est = integrate_directions(n, 1, acc, |u, out| {
        out[0] = k.radial(u)?.powf(nf - i) * l.radial(u)?.powf(i);
        Ok(())
    })?;
    let mut notes = Vec::new();
    estimate_notes(&est, &mut notes);
    let mut id = FunctionalId::new("dual_mixed_volume", k).order(i);
    id.body = format!("{};{}", k.label(), l.label());
    Ok(CoeffResult {
        value: est.value() / nf,
        error_estimate: est.error_estimate() / nf,
        id,
        notes,
    })
}

/// Dual quermassintegral `W~_i(K) = (1/n) int rho_K^{n-i}`.
pub fn dual_querm(body: &Body, i: f64, acc: &Accuracy) -> Result<CoeffResult> {
    let nf = body.dim() as f64;
    let est = integrate_directions(body.dim(), 1, acc, |u, out| {
        out[0] = body.radial(u)?.powf(nf - i);
        Ok(())
    })?;
    let mut notes = Vec::new();
    estimate_notes(&est, &mut notes);
    Ok(CoeffResult {
        value: est.value() / nf,
        error_estimate: est.error_estimate() / nf,
        id: FunctionalId::new("dual_querm", body).order(i),
        notes,
    })
}

/// `W~_i(K°)` through `rho_{K°} = 1 / h_K`.
pub fn dual_querm_of_polar(body: &Body, i: f64, acc: &Accuracy) -> Result<CoeffResult> {
    let nf = body.dim() as f64;
    let est = integrate_directions(body.dim(), 1, acc, |u, out| {
        out[0] = body.support(u).powf(i - nf);
        Ok(())
    })?;
    let mut notes = Vec::new();
    estimate_notes(&est, &mut notes);
    Ok(CoeffResult {
        value: est.value() / nf,
        error_estimate: est.error_estimate() / nf,
        id: FunctionalId::new("dual_querm_polar", body).order(i),
        notes,
    })
}

// ---------------------------------------------------------------------------
// The series

/// How a series was cut off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truncation {
    /// Three consecutive terms fell below the tolerance at the reference `t`.
    Converged,
    /// `beta` is a positive integer `l` and the terms past `n(2l-1)` vanish.
    FiniteSum,
    MaxKReached,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesResult {
    pub p: PValue,
    /// `V^p_k` for `k = 0..=k_max`.
    pub coefficients: Vec<f64>,
    pub errors: Vec<f64>,
    pub k_max: u32,
    pub truncation: Truncation,
    /// `min_u h_K(u)`.
    pub t_validity: f64,
    /// Reference parameter of the stopping rule, `t_validity / 2`.
    pub t_ref: f64,
    pub notes: Vec<Note>,
}

impl SeriesResult {
    /// `(sum_k V_k t^k, sum_k err_k t^k)`.
    pub fn evaluate(&self, t: f64) -> (f64, f64) {
        let mut w = 1.0;
        let (mut s, mut e) = (0.0, 0.0);
        for (c, err) in self.coefficients.iter().zip(&self.errors) {
            s += c * w;
            e += err * w;
            w *= t;
        }
        (s, e)
    }

    /// Partial sums `sum_{j<=k} V_j t^j` for `k = 0..=k_max`.
    pub fn partial_sums(&self, t: f64) -> Vec<f64> {
        let mut w = 1.0;
        let mut s = 0.0;
        self.coefficients
            .iter()
            .map(|c| {
                s += c * w;
                w *= t;
                s
            })
            .collect()
    }
}

/// Number of extra coefficients computed past a finite sum's last term.
pub const FINITE_SUM_GUARD: u32 = 4;
/// Relative size below which coefficients past a finite sum count as zero.
pub const FINITE_SUM_TOL: f64 = 1e-8;

/// Index after which three consecutive terms are negligible, if any.
fn cutoff(coeffs: &[f64], t: f64, tol: f64) -> Option<usize> {
    let mut w = 1.0;
    let mut partial = 0.0;
    let mut run = 0;
    for (k, c) in coeffs.iter().enumerate() {
        let term = c * w;
        partial += term;
        w *= t;
        if k > 0 && term.abs() < tol * partial.abs() {
            run += 1;
            if run == 3 {
                return Some(k);
            }
        } else {
            run = 0;
        }
    }
    None
}

/// Computes `V^p_k` until the series at `t_ref` is resolved to `tol`, or up to
/// `k_max`.
pub fn series_asp(body: &Body, p: PValue, k_max: u32, tol: f64, acc: &Accuracy) -> Result<SeriesResult> {
    let ex = p.exponents(body.dim())?;
    let (t_validity, _) = body.support_range();
    if !(t_validity > 0.0) {
        return Err(Error::InvalidParameter("the origin must be an interior point".into()));
    }
    let t_ref = 0.5 * t_validity;
    let n = ex.n as u32;
    if let Some(l) = ex.finite_sum_index() {
        let top = n * (2 * l - 1);
        let (est, mut notes) = v_vector(body, p, top + FINITE_SUM_GUARD, t_ref, acc)?;
        let max = est.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tail_ok = est.values[top as usize + 1..].iter().all(|v| v.abs() <= FINITE_SUM_TOL * max);
        if tail_ok {
            let keep = top as usize + 1;
            return Ok(SeriesResult {
                p,
                coefficients: est.values[..keep].to_vec(),
                errors: est.errors[..keep].to_vec(),
                k_max: top,
                truncation: Truncation::FiniteSum,
                t_validity,
                t_ref,
                notes,
            });
        }
        push_unique(&mut notes, Note::Unconverged);
    }
    let mut batch = 16u32.min(k_max);
    loop {
        let (est, notes) = v_vector(body, p, batch, t_ref, acc)?;
        let cut = cutoff(&est.values, t_ref, tol);
        if cut.is_some() || batch >= k_max {
            let (keep, truncation) = match cut {
                Some(k) => (k + 1, Truncation::Converged),
                None => (est.values.len(), Truncation::MaxKReached),
            };
            return Ok(SeriesResult {
                p,
                coefficients: est.values[..keep].to_vec(),
                errors: est.errors[..keep].to_vec(),
                k_max: keep as u32 - 1,
                truncation,
                t_validity,
                t_ref,
                notes,
            });
        }
        batch = (batch * 2).min(k_max);
    }
}

/// `as_p(K + tB)` evaluated on the parallel body itself: over the sphere for
/// `C^2_+` bodies, otherwise regionwise on the boundary so that flat pieces are
/// accounted for.
pub fn direct_asp_parallel(body: &Body, p: PValue, t: f64, acc: &Accuracy) -> Result<CoeffResult> {
    let parallel = body.minkowski_add_ball(t)?;
    let mut r = if body.smoothness() == Smoothness::C2Plus && parallel.has_sphere_form() {
        asp_sphere(&parallel, p, acc)?
    } else {
        asp_boundary(&parallel, p, acc)?
    };
    r.id = FunctionalId::new("direct_asp_parallel", body).p(p);
    r.id.t = Some(t);
    Ok(r)
}

#[cfg(test)]
mod tests;
