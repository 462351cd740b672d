//! Quadrature on the unit sphere and on parametrized boundary regions.
//!
//! Rules are tensor products of Gauss-Legendre axes and uniform periodic
//! (midpoint trapezoid) axes. Every integrand may be vector valued, so whole
//! coefficient tables are computed from one pass over the nodes. Reductions
//! run in parallel over fixed-size chunks and are combined in chunk order with
//! Neumaier summation, so repeated calls are bit-identical regardless of the
//! thread count.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use crate::bodies::{Body, Region};
use crate::error::{Error, Result};

/// Nodes per parallel work unit. Fixed so that reduction order never depends
/// on scheduling.
const CHUNK: usize = 256;

/// One parameter axis of a tensor rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Axis {
    /// Gauss-Legendre on `[lo, hi]`.
    Gauss { lo: f64, hi: f64 },
    /// Uniform midpoint rule on one period `[lo, hi)`.
    Periodic { lo: f64, hi: f64 },
}

impl Axis {
    pub fn length(&self) -> f64 {
        match *self {
            Axis::Gauss { lo, hi } | Axis::Periodic { lo, hi } => hi - lo,
        }
    }

    pub fn midpoint(&self) -> f64 {
        match *self {
            Axis::Gauss { lo, hi } | Axis::Periodic { lo, hi } => 0.5 * (lo + hi),
        }
    }

    fn nodes(&self, count: usize) -> (Vec<f64>, Vec<f64>) {
        match *self {
            Axis::Gauss { lo, hi } => {
                let gl = gauss_legendre(count);
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                let x = gl.0.iter().map(|&t| mid + half * t).collect();
                let w = gl.1.iter().map(|&w| half * w).collect();
                (x, w)
            }
            Axis::Periodic { lo, hi } => {
                let step = (hi - lo) / count as f64;
                let x = (0..count).map(|i| lo + (i as f64 + 0.5) * step).collect();
                (x, vec![step; count])
            }
        }
    }
}

/// What a rule integrates over.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Domain {
    /// Whole sphere `S^{n-1}`; nodes are unit vectors.
    Sphere { n: usize },
    /// One closed coordinate orthant of `S^{n-1}`; nodes are unit vectors.
    Orthant { n: usize, signs: Vec<i8> },
    /// Parameter box of a boundary region.
    Parameters { label: String },
}

/// A fixed set of nodes and positive weights.
#[derive(Debug, Clone, Serialize)]
pub struct QuadratureRule {
    /// Coordinates per node.
    pub dim: usize,
    /// Flattened node coordinates, `dim` values per node.
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    /// Resolution level the rule was built at.
    pub order: u32,
    pub domain: Domain,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    /// Sum of the weights: the measure of the domain.
    pub fn measure(&self) -> f64 {
        let mut acc = Neumaier::default();
        for &w in &self.weights {
            acc.add(w);
        }
        acc.value()
    }
}

/// A converged (or best effort) integral with its a-posteriori error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralEstimate {
    pub values: Vec<f64>,
    /// `|value(level) - value(level - 1)|` per component.
    pub errors: Vec<f64>,
    /// Finest level evaluated.
    pub levels: u32,
    pub converged: bool,
}

impl IntegralEstimate {
    pub fn value(&self) -> f64 {
        self.values[0]
    }

    pub fn error_estimate(&self) -> f64 {
        self.errors[0]
    }
}

/// Settings for adaptive level doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Accuracy {
    /// Stop once successive levels differ by less than `tol * max(1, |value|)`.
    pub tol: f64,
    pub min_level: u32,
    /// Overrides the per-dimension default maximum.
    pub max_level: Option<u32>,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy {
            tol: 1e-12,
            min_level: 3,
            max_level: None,
        }
    }
}

impl Accuracy {
    pub fn with_tol(tol: f64) -> Self {
        Accuracy {
            tol,
            ..Accuracy::default()
        }
    }

    /// Highest level used for dimension `n`: 14 on the circle, 10 per factor in 3D.
    pub fn max_level_for(&self, n: usize) -> u32 {
        self.max_level.unwrap_or(match n {
            2 => 14,
            3 => 10,
            _ => 7,
        })
    }
}

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`, cached per size.
pub fn gauss_legendre(count: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("quadrature cache").get(&count) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(compute_gauss_legendre(count));
    cache
        .lock()
        .expect("quadrature cache")
        .insert(count, Arc::clone(&rule));
    rule
}

fn compute_gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(count >= 1);
    let n = count;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = n.div_ceil(2);
    let roots: Vec<(usize, f64, f64)> = (0..half)
        .into_par_iter()
        .map(|i| {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            if d != 0.0 {
                dp = d;
            }
            (i, z, 2.0 / ((1.0 - z * z) * dp * dp))
        })
        .collect();
    for (i, z, weight) in roots {
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Nodes per axis at a resolution level.
pub fn nodes_at_level(level: u32) -> usize {
    1usize << level
}

/// Tensor product rule over `axes` with `2^level` nodes per axis.
pub fn tensor_rule(axes: &[Axis], level: u32, domain: Domain) -> QuadratureRule {
    let count = nodes_at_level(level);
    let per_axis: Vec<(Vec<f64>, Vec<f64>)> = axes.iter().map(|a| a.nodes(count)).collect();
    let dim = axes.len();
    let total: usize = per_axis.iter().map(|(x, _)| x.len()).product();
    let mut points = Vec::with_capacity(total * dim);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        let mut w = 1.0;
        for (a, &i) in idx.iter().enumerate() {
            points.push(per_axis[a].0[i]);
            w *= per_axis[a].1[i];
        }
        weights.push(w);
        for a in (0..dim).rev() {
            idx[a] += 1;
            if idx[a] < per_axis[a].0.len() {
                break;
            }
            idx[a] = 0;
        }
    }
    if dim == 0 {
        // a single point carrying unit weight
        return QuadratureRule {
            dim,
            points,
            weights: vec![1.0],
            order: level,
            domain,
        };
    }
    QuadratureRule {
        dim,
        points,
        weights,
        order: level,
        domain,
    }
}

/// Rule on `S^{n-1}` with unit-vector nodes.
///
/// `n = 2`: `2^level` equally spaced angles. `n = 3`: Gauss-Legendre in the
/// height `z` times a periodic rule in azimuth. `n = 4`: Gauss-Legendre in the
/// first polar angle with weight `sin^2` times the `n = 3` rule.
pub fn sphere_rule(n: usize, level: u32) -> Result<QuadratureRule> {
    let domain = Domain::Sphere { n };
    match n {
        2 => {
            let base = tensor_rule(&[Axis::Periodic { lo: 0.0, hi: 2.0 * PI }], level, domain.clone());
            let mut points = Vec::with_capacity(2 * base.len());
            for i in 0..base.len() {
                let t = base.point(i)[0];
                points.push(t.cos());
                points.push(t.sin());
            }
            Ok(QuadratureRule {
                dim: 2,
                points,
                weights: base.weights,
                order: level,
                domain,
            })
        }
        3 => {
            let base = tensor_rule(
                &[
                    Axis::Gauss { lo: -1.0, hi: 1.0 },
                    Axis::Periodic { lo: 0.0, hi: 2.0 * PI },
                ],
                level,
                domain.clone(),
            );
            let mut points = Vec::with_capacity(3 * base.len());
            for i in 0..base.len() {
                let (z, phi) = (base.point(i)[0], base.point(i)[1]);
                let rho = (1.0 - z * z).max(0.0).sqrt();
                points.extend_from_slice(&[rho * phi.cos(), rho * phi.sin(), z]);
            }
            Ok(QuadratureRule {
                dim: 3,
                points,
                weights: base.weights,
                order: level,
                domain,
            })
        }
        4 => {
            let inner = sphere_rule(3, level)?;
            let chi = tensor_rule(&[Axis::Gauss { lo: 0.0, hi: PI }], level, domain.clone());
            let mut points = Vec::with_capacity(4 * chi.len() * inner.len());
            let mut weights = Vec::with_capacity(chi.len() * inner.len());
            for i in 0..chi.len() {
                let c = chi.point(i)[0];
                let (s, co) = c.sin_cos();
                for j in 0..inner.len() {
                    let w = inner.point(j);
                    points.extend_from_slice(&[co, s * w[0], s * w[1], s * w[2]]);
                    weights.push(chi.weights[i] * s * s * inner.weights[j]);
                }
            }
            Ok(QuadratureRule {
                dim: 4,
                points,
                weights,
                order: level,
                domain,
            })
        }
        _ => Err(Error::UnsupportedDimension(n as u32)),
    }
}

/// Parameter axes of a closed coordinate orthant of `S^{d-1}` (see [`orthant_point`]).
pub fn orthant_axes(d: usize) -> Vec<Axis> {
    match d {
        1 => vec![],
        2 => vec![Axis::Gauss { lo: 0.0, hi: FRAC_PI_2 }],
        _ => vec![
            Axis::Gauss { lo: 0.0, hi: FRAC_PI_2 },
            Axis::Gauss { lo: 0.0, hi: FRAC_PI_2 },
        ],
    }
}

/// Unit vector and surface density at orthant parameters.
///
/// `d = 1`: the point `signs[0]`. `d = 2`: `(cos t, sin t)`. `d = 3`:
/// `(cos a cos b, cos a sin b, sin a)` with density `cos a`; coordinates are
/// then multiplied by `signs`. The parametrizations are analytic up to the
/// orthant boundary, so Gauss-Legendre converges spectrally on smooth data.
pub fn orthant_point(signs: &[f64], param: &[f64]) -> (Vec<f64>, f64) {
    match signs.len() {
        1 => (vec![signs[0]], 1.0),
        2 => {
            let (s, c) = param[0].sin_cos();
            (vec![signs[0] * c, signs[1] * s], 1.0)
        }
        3 => {
            let (sa, ca) = param[0].sin_cos();
            let (sb, cb) = param[1].sin_cos();
            (
                vec![signs[0] * ca * cb, signs[1] * ca * sb, signs[2] * sa],
                ca,
            )
        }
        d => panic!("orthant parametrization for S^{} is not available", d - 1),
    }
}

/// Rule on one coordinate orthant of `S^{n-1}` with unit-vector nodes.
pub fn orthant_rule(signs: &[f64], level: u32) -> Result<QuadratureRule> {
    let n = signs.len();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n as u32));
    }
    let domain = Domain::Orthant {
        n,
        signs: signs.iter().map(|&s| if s < 0.0 { -1 } else { 1 }).collect(),
    };
    let base = tensor_rule(&orthant_axes(n), level, domain.clone());
    let mut points = Vec::with_capacity(n * base.len());
    let mut weights = Vec::with_capacity(base.len());
    for i in 0..base.len() {
        let (u, dens) = orthant_point(signs, base.point(i));
        points.extend_from_slice(&u);
        weights.push(base.weights[i] * dens);
    }
    Ok(QuadratureRule {
        dim: n,
        points,
        weights,
        order: level,
        domain,
    })
}

/// Tensor rule on a region's parameter box with the surface density folded
/// into the weights.
pub fn region_rule(region: &Region, level: u32) -> QuadratureRule {
    let mut rule = tensor_rule(
        region.axes(),
        level,
        Domain::Parameters {
            label: region.label().to_string(),
        },
    );
    for i in 0..rule.len() {
        let d = region.density(rule.point(i));
        rule.weights[i] *= d;
    }
    rule
}

/// Integrates a vector-valued integrand of length `len` over a rule.
///
/// The closure writes the integrand at a node into its output slice.
pub fn integrate_rule<F>(rule: &QuadratureRule, len: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]) -> Result<()> + Sync,
{
    let count = rule.len();
    let chunks: Vec<usize> = (0..count.div_ceil(CHUNK)).collect();
    let partial: Vec<Result<Vec<Neumaier>>> = chunks
        .par_iter()
        .map(|&c| {
            let mut acc = vec![Neumaier::default(); len];
            let mut buf = vec![0.0; len];
            let end = ((c + 1) * CHUNK).min(count);
            for i in c * CHUNK..end {
                let w = rule.weights[i];
                if w == 0.0 {
                    continue;
                }
                buf.iter_mut().for_each(|b| *b = 0.0);
                f(rule.point(i), &mut buf)?;
                for (a, &b) in acc.iter_mut().zip(&buf) {
                    a.add(w * b);
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![Neumaier::default(); len];
    for chunk in partial {
        for (t, a) in total.iter_mut().zip(chunk?) {
            t.add(a.sum);
            t.add(a.comp);
        }
    }
    Ok(total.iter().map(Neumaier::value).collect())
}

/// Doubles the level until `judge(previous, current)` accepts.
///
/// `eval(level)` computes the full vector at one level. The error estimate of
/// the returned value is the componentwise difference to the previous level.
pub fn refine<E, J>(min_level: u32, max_level: u32, mut eval: E, judge: J) -> Result<IntegralEstimate>
where
    E: FnMut(u32) -> Result<Vec<f64>>,
    J: Fn(&[f64], &[f64]) -> bool,
{
    let max_level = max_level.max(min_level + 1);
    let mut prev = eval(min_level)?;
    for level in min_level + 1..=max_level {
        let cur = eval(level)?;
        let errors: Vec<f64> = cur.iter().zip(&prev).map(|(a, b)| (a - b).abs()).collect();
        let done = judge(&prev, &cur);
        if done || level == max_level {
            return Ok(IntegralEstimate {
                values: cur,
                errors,
                levels: level,
                converged: done,
            });
        }
        prev = cur;
    }
    unreachable!("refinement loop always returns")
}

/// Componentwise stopping rule `|a - b| < tol * max(1, |b|)`.
pub fn componentwise(tol: f64) -> impl Fn(&[f64], &[f64]) -> bool {
    move |prev: &[f64], cur: &[f64]| {
        prev.iter()
            .zip(cur)
            .all(|(a, b)| (a - b).abs() < tol * b.abs().max(1.0) || (a == b))
    }
}

/// Integrates over all boundary regions of a body, summed in region order.
///
/// The closure receives the region index and the boundary jet of each node.
pub fn integrate_boundary<F>(body: &Body, len: usize, acc: &Accuracy, f: F) -> Result<IntegralEstimate>
where
    F: Fn(&crate::bodies::BoundaryJet, &mut [f64]) -> Result<()> + Sync,
{
    let regions = body.regions();
    let judge = componentwise(acc.tol);
    integrate_boundary_with(body, &regions, len, acc, &f, judge)
}

/// As [`integrate_boundary`] over an explicit region list and stopping rule.
pub fn integrate_boundary_with<F, J>(
    body: &Body,
    regions: &[Region],
    len: usize,
    acc: &Accuracy,
    f: &F,
    judge: J,
) -> Result<IntegralEstimate>
where
    F: Fn(&crate::bodies::BoundaryJet, &mut [f64]) -> Result<()> + Sync,
    J: Fn(&[f64], &[f64]) -> bool,
{
    refine(
        acc.min_level,
        acc.max_level_for(body.dim()),
        |level| boundary_at_level(regions, len, level, f),
        judge,
    )
}

/// Sum of region integrals at one fixed level.
pub fn boundary_at_level<F>(regions: &[Region], len: usize, level: u32, f: &F) -> Result<Vec<f64>>
where
    F: Fn(&crate::bodies::BoundaryJet, &mut [f64]) -> Result<()> + Sync,
{
    let mut total = vec![Neumaier::default(); len];
    for region in regions {
        let rule = region_rule(region, level);
        let part = integrate_rule(&rule, len, |param, out| {
            let jet = region.jet(param)?;
            f(&jet, out)
        })?;
        for (t, v) in total.iter_mut().zip(part) {
            t.add(v);
        }
    }
    Ok(total.iter().map(Neumaier::value).collect())
}

/// Integrates `f(u)` over `S^{n-1}` with adaptive level doubling.
///
/// Bodies whose support function has kinks (rounded boxes) supply orthant
/// pieces through [`Body::sphere_rules`] so that each piece is smooth.
pub fn integrate_sphere<F, J>(body: &Body, len: usize, acc: &Accuracy, f: &F, judge: J) -> Result<IntegralEstimate>
where
    F: Fn(&[f64], &mut [f64]) -> Result<()> + Sync,
    J: Fn(&[f64], &[f64]) -> bool,
{
    refine(
        acc.min_level,
        acc.max_level_for(body.dim()),
        |level| {
            let mut total = vec![Neumaier::default(); len];
            for rule in body.sphere_rules(level)? {
                for (t, v) in total.iter_mut().zip(integrate_rule(&rule, len, f)?) {
                    t.add(v);
                }
            }
            Ok(total.iter().map(Neumaier::value).collect())
        },
        judge,
    )
}

/// Integrates a plain function of the direction over the whole sphere.
pub fn integrate_directions<F>(n: usize, len: usize, acc: &Accuracy, f: F) -> Result<IntegralEstimate>
where
    F: Fn(&[f64], &mut [f64]) -> Result<()> + Sync,
{
    let judge = componentwise(acc.tol);
    refine(
        acc.min_level,
        acc.max_level_for(n),
        |level| integrate_rule(&sphere_rule(n, level)?, len, &f),
        judge,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar<F: Fn(&[f64]) -> f64 + Sync>(rule: &QuadratureRule, f: F) -> f64 {
        integrate_rule(rule, 1, |x, out| {
            out[0] = f(x);
            Ok(())
        })
        .unwrap()[0]
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for count in [1usize, 2, 5, 16, 33] {
            let gl = gauss_legendre(count);
            let total: f64 = gl.1.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "count={count}");
            for deg in 0..(2 * count) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let approx: f64 = gl.0.iter().zip(&gl.1).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((approx - exact).abs() < 1e-13, "count={count} deg={deg}");
            }
            assert!(gl.0.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn large_gauss_legendre_weights_sum() {
        let gl = gauss_legendre(4096);
        let mut acc = Neumaier::default();
        gl.1.iter().for_each(|&w| acc.add(w));
        assert!((acc.value() - 2.0).abs() < 1e-12);
        assert!(gl.1.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn sphere_measures() {
        let c = sphere_rule(2, 5).unwrap();
        assert!((c.measure() - 2.0 * PI).abs() < 1e-14);
        let s = sphere_rule(3, 5).unwrap();
        assert!((s.measure() - 4.0 * PI).abs() < 1e-12);
        let s3 = sphere_rule(4, 5).unwrap();
        assert!((s3.measure() - 2.0 * PI * PI).abs() < 1e-10);
        assert!(matches!(sphere_rule(5, 2), Err(Error::UnsupportedDimension(5))));
    }

    #[test]
    fn circle_cos_squared() {
        let rule = sphere_rule(2, 4).unwrap();
        let v = scalar(&rule, |u| u[0] * u[0]);
        assert!((v - PI).abs() < 1e-14);
    }

    #[test]
    fn sphere_second_moment() {
        // int_{S^2} z^2 = 4 pi / 3
        let rule = sphere_rule(3, 4).unwrap();
        let v = scalar(&rule, |u| u[2] * u[2]);
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
        let v = scalar(&rule, |u| u[0].powi(4));
        assert!((v - 4.0 * PI / 5.0).abs() < 1e-12);
    }

    #[test]
    fn orthant_rules_tile_the_sphere() {
        let mut total = 0.0;
        for s0 in [-1.0, 1.0] {
            for s1 in [-1.0, 1.0] {
                for s2 in [-1.0, 1.0] {
                    let r = orthant_rule(&[s0, s1, s2], 4).unwrap();
                    assert!((r.measure() - PI / 2.0).abs() < 1e-12);
                    total += scalar(&r, |u| u[0] * u[0] + u[1].abs());
                }
            }
        }
        // int x^2 = 4pi/3, int |y| = 2 pi
        assert!((total - (4.0 * PI / 3.0 + 2.0 * PI)).abs() < 1e-10);
        let q = orthant_rule(&[1.0, -1.0], 4).unwrap();
        assert!((q.measure() - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn spectral_convergence_on_the_circle() {
        // int exp(cos t) dt = 2 pi I_0(1)
        let exact = 2.0 * PI * 1.266_065_877_752_008_4;
        let f = |u: &[f64]| u[0].exp();
        let errs: Vec<f64> = (2..6)
            .map(|l| (scalar(&sphere_rule(2, l).unwrap(), f) - exact).abs())
            .collect();
        // errors fall by far more than a polynomial rate once resolved
        assert!(errs[2] < 1e-2 * errs[1]);
        assert!(errs[3] < 1e-13);
    }

    #[test]
    fn deterministic_reduction() {
        let rule = sphere_rule(3, 7).unwrap();
        let f = |u: &[f64]| (3.0 * u[0] + u[1] * u[2]).sin().exp();
        let a = scalar(&rule, f);
        let b = scalar(&rule, f);
        assert_eq!(a.to_bits(), b.to_bits());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| scalar(&rule, f));
        assert_eq!(a.to_bits(), c.to_bits());
    }

    #[test]
    fn refine_reports_nonconvergence() {
        let est = refine(1, 4, |l| Ok(vec![l as f64]), componentwise(1e-3)).unwrap();
        assert!(!est.converged);
        assert_eq!(est.levels, 4);
        assert_eq!(est.errors, vec![1.0]);
        let est = refine(1, 6, |l| Ok(vec![1.0 + 0.5f64.powi(10 * l as i32)]), componentwise(1e-12)).unwrap();
        assert!(est.converged);
    }
}
