//! Concrete convex bodies.
//!
//! A [`Body`] is a canonical shape (axis aligned, centred at the origin)
//! placed by a similarity `x -> shift + scale * Q x`. Each shape provides its
//! support function, curvature data on the sphere ([`SphereJet`]), and a list
//! of boundary [`Region`]s with explicit parametrizations whose union covers
//! the boundary up to a set of measure zero.

mod catalog;
mod fd;
pub mod geom;
mod search;
mod shapes;

use serde::Serialize;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{orthant_rule, sphere_rule, Axis, QuadratureRule};

pub use catalog::{parse_body, BodySpec, CapSide};
pub use fd::{fd_sphere_jet, FD_STEP};
pub use search::{maximize_on_sphere, minimize_on_sphere};

use geom::{dot, normalized_esf};
use shapes::{Patch, Shape};

/// A unit vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Accepts `coords` if its norm is 1 within `1e-12`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let l = geom::norm(&coords);
        if (l - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "direction has norm {l}, expected 1"
            )));
        }
        Ok(Direction(coords))
    }

    /// Normalizes an arbitrary non-zero vector.
    pub fn normalize(coords: &[f64]) -> Result<Self> {
        let l = geom::norm(coords);
        if l == 0.0 || !l.is_finite() {
            return Err(Error::InvalidParameter("cannot normalize a zero vector".into()));
        }
        Ok(Direction(coords.iter().map(|x| x / l).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Support value and principal radii at a direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereJet {
    pub h: f64,
    /// Principal radii of curvature, ascending.
    pub radii: Vec<f64>,
    /// Normalized elementary symmetric functions `s_0 .. s_{n-1}` of the radii.
    pub s: Vec<f64>,
}

impl SphereJet {
    pub fn new(h: f64, mut radii: Vec<f64>) -> Self {
        radii.sort_by(f64::total_cmp);
        let s = normalized_esf(&radii);
        SphereJet { h, radii, s }
    }

    /// Curvature function `s_{n-1}`, the product of the radii.
    pub fn curvature_function(&self) -> f64 {
        *self.s.last().unwrap_or(&1.0)
    }
}

/// Position, normal and curvature data at a boundary point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryJet {
    pub x: Vec<f64>,
    pub normal: Vec<f64>,
    /// Principal curvatures, ascending.
    pub curvatures: Vec<f64>,
    /// Normalized elementary symmetric functions `H_0 .. H_{n-1}`.
    pub esf: Vec<f64>,
    /// `<x, N(x)>`.
    pub support_dot: f64,
}

impl BoundaryJet {
    pub fn new(x: Vec<f64>, normal: Vec<f64>, mut curvatures: Vec<f64>) -> Self {
        curvatures.sort_by(f64::total_cmp);
        let esf = normalized_esf(&curvatures);
        let support_dot = dot(&x, &normal);
        BoundaryJet {
            x,
            normal,
            curvatures,
            esf,
            support_dot,
        }
    }

    /// Gauss curvature `H_{n-1}`.
    pub fn gauss_curvature(&self) -> f64 {
        *self.esf.last().unwrap_or(&1.0)
    }

    /// True when every principal curvature vanishes.
    pub fn is_flat(&self) -> bool {
        self.curvatures.iter().all(|&k| k == 0.0)
    }
}

/// Geometric type of a boundary region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    /// Piece of a round sphere, parametrized through its normals.
    SpherePatch,
    /// Planar piece; all curvatures vanish.
    FlatFace,
    /// Any other smooth parametrized piece.
    AnalyticPatch,
}

/// Smoothness of a body's boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    /// `C^2` with strictly positive Gauss curvature.
    C2Plus,
    /// Inner and outer rolling balls of fixed radii at every boundary point.
    RollingBalls,
    /// Finitely many smooth pieces; curvature may vanish or be undefined on edges.
    PiecewiseSmooth,
    Polytope,
}

/// Similarity `x -> shift + scale * Q x` with `Q` orthogonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Similarity {
    pub scale: f64,
    /// Row-major `n x n` orthogonal matrix.
    pub rotation: Vec<f64>,
    pub shift: Vec<f64>,
}

impl Similarity {
    pub fn identity(n: usize) -> Self {
        let mut rotation = vec![0.0; n * n];
        for i in 0..n {
            rotation[i * n + i] = 1.0;
        }
        Similarity {
            scale: 1.0,
            rotation,
            shift: vec![0.0; n],
        }
    }

    fn n(&self) -> usize {
        self.shift.len()
    }

    pub fn direction(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| self.rotation[i * n + j] * y[j]).sum())
            .collect()
    }

    pub fn inverse_direction(&self, u: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|j| (0..n).map(|i| self.rotation[i * n + j] * u[i]).sum())
            .collect()
    }

    pub fn point(&self, y: &[f64]) -> Vec<f64> {
        self.direction(y)
            .iter()
            .zip(&self.shift)
            .map(|(q, v)| v + self.scale * q)
            .collect()
    }

    pub fn inverse_point(&self, x: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
        self.inverse_direction(&d)
            .iter()
            .map(|v| v / self.scale)
            .collect()
    }

    /// `self` applied after `inner`.
    pub fn compose(&self, inner: &Similarity) -> Similarity {
        let n = self.n();
        let mut rotation = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                rotation[i * n + j] = (0..n)
                    .map(|k| self.rotation[i * n + k] * inner.rotation[k * n + j])
                    .sum();
            }
        }
        Similarity {
            scale: self.scale * inner.scale,
            rotation,
            shift: self.point(&inner.shift),
        }
    }

    pub fn is_identity(&self) -> bool {
        let n = self.n();
        self.scale == 1.0
            && self.shift.iter().all(|&v| v == 0.0)
            && self
                .rotation
                .iter()
                .enumerate()
                .all(|(idx, &q)| q == if idx / n == idx % n { 1.0 } else { 0.0 })
    }

    fn map_boundary(&self, jet: BoundaryJet) -> BoundaryJet {
        if self.is_identity() {
            return jet;
        }
        let a = self.scale;
        let x = self.point(&jet.x);
        let normal = self.direction(&jet.normal);
        let curvatures = jet.curvatures.iter().map(|k| k / a).collect();
        BoundaryJet::new(x, normal, curvatures)
    }

    fn map_sphere(&self, u: &[f64], jet: SphereJet) -> SphereJet {
        if self.is_identity() {
            return jet;
        }
        let h = self.scale * jet.h + dot(&self.shift, u);
        SphereJet::new(h, jet.radii.iter().map(|r| r * self.scale).collect())
    }
}

/// Rigid motions and dilations accepted by [`Body::transform`].
#[derive(Debug, Clone, PartialEq)]
pub enum Transform {
    Scale(f64),
    /// Row-major orthogonal matrix (rotation or reflection).
    Rotate(Vec<f64>),
    Translate(Vec<f64>),
}

/// One smooth piece of a body's boundary with its parametrization.
#[derive(Debug, Clone)]
pub struct Region {
    kind: RegionKind,
    axes: Vec<Axis>,
    patch: Arc<Patch>,
    frame: Similarity,
    label: String,
}

impl Region {
    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Surface-measure density with respect to the parameter box.
    pub fn density(&self, param: &[f64]) -> f64 {
        let n = self.frame.n();
        self.patch.density(param) * self.frame.scale.powi(n as i32 - 1)
    }

    pub fn jet(&self, param: &[f64]) -> Result<BoundaryJet> {
        Ok(self.frame.map_boundary(self.patch.jet(param)?))
    }
}

/// A convex body with the origin (normally) in its interior.
#[derive(Debug, Clone)]
pub struct Body {
    n: usize,
    shape: Arc<Shape>,
    frame: Similarity,
    label: String,
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn check_dims(n: usize) -> Result<()> {
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n as u32));
    }
    Ok(())
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
}

/// Euclidean ball of the given radius and centre.
pub fn make_ball(n: usize, radius: f64, center: &[f64]) -> Result<Body> {
    check_dims(n)?;
    if !(radius > 0.0) || center.len() != n {
        return Err(Error::InvalidParameter(format!(
            "ball needs radius > 0 and a centre in R^{n}"
        )));
    }
    let body = Body::canonical(
        n,
        Shape::Ellipsoid {
            axes: vec![radius; n],
            ball: true,
        },
        format!("ball:{n}:r={radius}"),
    );
    if center.iter().all(|&c| c == 0.0) {
        Ok(body)
    } else {
        body.transform(&Transform::Translate(center.to_vec()))
    }
}

/// Axis-aligned ellipsoid centred at the origin.
pub fn make_ellipsoid(semi_axes: &[f64]) -> Result<Body> {
    let n = semi_axes.len();
    check_dims(n)?;
    if semi_axes.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter("semi-axes must be positive".into()));
    }
    let ball = semi_axes.iter().all(|&a| a == semi_axes[0]);
    Ok(Body::canonical(
        n,
        Shape::Ellipsoid {
            axes: semi_axes.to_vec(),
            ball,
        },
        format!("ellipsoid:{}", fmt_list(semi_axes)),
    ))
}

/// Unit ball of the `l_r` norm, `sum |x_i|^r <= 1`, for `r > 2`.
pub fn make_lr_ball(n: usize, r: f64) -> Result<Body> {
    check_dims(n)?;
    if !(r > 2.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "l_r ball needs 2 < r < infinity, got r = {r}"
        )));
    }
    Ok(Body::canonical(n, Shape::LrBall { r }, format!("lr-ball:{n}:r={r}")))
}

/// Minkowski sum of the box `[-c_1, c_1] x ... x [-c_n, c_n]` and a ball of radius `radius`.
pub fn make_rounded_box(core: &[f64], radius: f64) -> Result<Body> {
    let n = core.len();
    check_dims(n)?;
    if core.iter().any(|&c| !(c >= 0.0)) || !(radius >= 0.0) {
        return Err(Error::InvalidParameter("rounded box needs core >= 0, radius >= 0".into()));
    }
    if radius == 0.0 && core.iter().any(|&c| c == 0.0) {
        return Err(Error::InvalidParameter("degenerate box".into()));
    }
    Ok(Body::canonical(
        n,
        Shape::RoundedBox {
            core: core.to_vec(),
            radius,
        },
        format!("rounded-box:{}:radius={radius}", fmt_list(core)),
    ))
}

/// `K_l = (1 - 1/l) B_inf + (1/l) B_2`.
pub fn make_rounded_cube(n: usize, l: u32) -> Result<Body> {
    check_dims(n)?;
    if l < 1 {
        return Err(Error::InvalidParameter("rounded cube needs l >= 1".into()));
    }
    let lf = l as f64;
    let mut body = make_rounded_box(&vec![1.0 - 1.0 / lf; n], 1.0 / lf)?;
    body.label = format!("rounded-cube:{n}:l={l}");
    Ok(body)
}

/// Cube `[-h, h]^n`.
pub fn make_box(n: usize, half_width: f64) -> Result<Body> {
    check_dims(n)?;
    if !(half_width > 0.0) {
        return Err(Error::InvalidParameter("box needs half_width > 0".into()));
    }
    let mut body = make_rounded_box(&vec![half_width; n], 0.0)?;
    body.label = format!("box:{n}:h={half_width}");
    Ok(body)
}

/// `E ∩ {x_axis <= cut}` (`Below`) or `E ∩ {x_axis >= cut}` (`Above`).
pub fn make_capped_ellipsoid(semi_axes: &[f64], normal_axis: usize, cut: f64, side: CapSide) -> Result<Body> {
    let a = *semi_axes
        .get(normal_axis)
        .ok_or_else(|| Error::InvalidParameter("cut axis out of range".into()))?;
    let (lo, hi) = match side {
        CapSide::Below => (-a, cut.min(a)),
        CapSide::Above => (cut.max(-a), a),
    };
    let mut body = make_slab_ellipsoid(semi_axes, normal_axis, lo, hi)?;
    body.label = format!(
        "capped-ellipsoid:{}:axis={normal_axis},cut={cut},side={side}",
        fmt_list(semi_axes)
    );
    Ok(body)
}

/// `E ∩ {lo <= x_axis <= hi}`; requires `lo < 0 < hi` so the origin is interior.
pub fn make_slab_ellipsoid(semi_axes: &[f64], axis: usize, lo: f64, hi: f64) -> Result<Body> {
    let n = semi_axes.len();
    check_dims(n)?;
    if semi_axes.iter().any(|&a| !(a > 0.0)) || axis >= n {
        return Err(Error::InvalidParameter("invalid ellipsoid for cutting".into()));
    }
    let a = semi_axes[axis];
    let (lo, hi) = (lo.max(-a), hi.min(a));
    if !(lo < 0.0 && hi > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cuts must satisfy lo < 0 < hi, got lo = {lo}, hi = {hi}"
        )));
    }
    if lo == -a && hi == a {
        let mut body = make_ellipsoid(semi_axes)?;
        body.label = format!("slab-ellipsoid:{}:axis={axis},lo={lo},hi={hi}", fmt_list(semi_axes));
        return Ok(body);
    }
    Ok(Body::canonical(
        n,
        Shape::Capped {
            axes: semi_axes.to_vec(),
            axis,
            lo,
            hi,
        },
        format!("slab-ellipsoid:{}:axis={axis},lo={lo},hi={hi}", fmt_list(semi_axes)),
    ))
}

impl Body {
    fn canonical(n: usize, shape: Shape, label: String) -> Self {
        Body {
            n,
            shape: Arc::new(shape),
            frame: Similarity::identity(n),
            label,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn frame(&self) -> &Similarity {
        &self.frame
    }

    pub fn smoothness(&self) -> Smoothness {
        self.shape.smoothness()
    }

    /// Whether the sphere (Gauss-map) parametrization is available almost everywhere.
    pub fn has_sphere_form(&self) -> bool {
        self.shape.sphere_pieces(self.n).is_ok()
    }

    /// Bounds `(r, R)` on the principal radii when the body has rolling balls.
    pub fn rolling_bounds(&self) -> Option<(f64, f64)> {
        self.shape
            .radius_bounds()
            .map(|(r, big)| (r * self.frame.scale, big * self.frame.scale))
    }

    /// `h_K(u)` for a unit vector `u`.
    pub fn support(&self, u: &[f64]) -> f64 {
        let uc = self.frame.inverse_direction(u);
        self.frame.scale * self.shape.support(&uc) + dot(&self.frame.shift, u)
    }

    pub fn sphere_jet(&self, u: &[f64]) -> Result<SphereJet> {
        let uc = self.frame.inverse_direction(u);
        let jet = self.shape.sphere_jet(self.n, &uc)?;
        Ok(self.frame.map_sphere(u, jet))
    }

    /// Boundary regions in a fixed order.
    pub fn regions(&self) -> Vec<Region> {
        self.shape
            .regions(self.n)
            .into_iter()
            .map(|(kind, axes, patch, label)| Region {
                kind,
                axes,
                patch: Arc::new(patch),
                frame: self.frame.clone(),
                label,
            })
            .collect()
    }

    /// Quadrature rules covering the sphere by pieces on which the support
    /// function is smooth.
    pub fn sphere_rules(&self, level: u32) -> Result<Vec<QuadratureRule>> {
        match self.shape.sphere_pieces(self.n)? {
            None => Ok(vec![sphere_rule(self.n, level)?]),
            Some(orthants) => orthants
                .iter()
                .map(|signs| {
                    let mut rule = orthant_rule(signs, level)?;
                    if !self.frame.is_identity() {
                        for i in 0..rule.len() {
                            let p = self.frame.direction(rule.point(i));
                            rule.points[i * self.n..(i + 1) * self.n].copy_from_slice(&p);
                        }
                    }
                    Ok(rule)
                })
                .collect(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.shape.contains(&self.frame.inverse_point(x))
    }

    /// Boundary jet at a boundary point `x`.
    pub fn locate(&self, x: &[f64]) -> Result<BoundaryJet> {
        let y = self.frame.inverse_point(x);
        Ok(self.frame.map_boundary(self.shape.locate(self.n, &y)?))
    }

    /// Radial function `rho_K(u) = max { l : l u in K }`.
    pub fn radial(&self, u: &[f64]) -> Result<f64> {
        let origin = self.frame.inverse_point(&vec![0.0; self.n]);
        let w: Vec<f64> = self
            .frame
            .inverse_direction(u)
            .iter()
            .map(|x| x / self.frame.scale)
            .collect();
        if let Some(l) = self.shape.ray_exit(&origin, &w) {
            return Ok(l);
        }
        if !self.contains(&vec![0.0; self.n])? {
            return Err(Error::InvalidParameter("origin is not inside the body".into()));
        }
        let point = |l: f64| -> Vec<f64> { u.iter().map(|x| x * l).collect() };
        let mut hi = self.support(u).abs().max(1e-300);
        let mut guard = 0;
        while self.contains(&point(hi))? {
            hi *= 2.0;
            guard += 1;
            if guard > 200 {
                return Err(Error::InvalidParameter("unbounded body".into()));
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.contains(&point(mid))? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `(min_u h(u), max_u h(u))`.
    pub fn support_range(&self) -> (f64, f64) {
        let (_, lo) = minimize_on_sphere(self.n, |u| self.support(u));
        let (_, hi) = maximize_on_sphere(self.n, |u| self.support(u));
        (lo, hi)
    }

    /// Largest `a` with `B(0, a) ⊂ K ⊂ B(0, 1/a)`.
    pub fn inradius_bound(&self) -> f64 {
        let (lo, hi) = self.support_range();
        lo.min(1.0 / hi)
    }

    pub fn transform(&self, op: &Transform) -> Result<Body> {
        let n = self.n;
        let (outer, tag) = match op {
            Transform::Scale(a) => {
                if !(*a > 0.0) {
                    return Err(Error::InvalidParameter("scale factor must be positive".into()));
                }
                let mut s = Similarity::identity(n);
                s.scale = *a;
                (s, format!("scale({a})"))
            }
            Transform::Rotate(q) => {
                if q.len() != n * n {
                    return Err(Error::InvalidParameter("rotation has wrong size".into()));
                }
                let mut dev = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        let g: f64 = (0..n).map(|k| q[k * n + i] * q[k * n + j]).sum();
                        let e = if i == j { 1.0 } else { 0.0 };
                        dev = dev.max((g - e).abs());
                    }
                }
                if dev > 1e-12 {
                    return Err(Error::NonOrthogonal(dev));
                }
                let mut s = Similarity::identity(n);
                s.rotation = q.clone();
                (s, format!("rotate({})", fmt_list(q)))
            }
            Transform::Translate(v) => {
                if v.len() != n {
                    return Err(Error::InvalidParameter("translation has wrong size".into()));
                }
                let mut s = Similarity::identity(n);
                s.shift = v.clone();
                (s, format!("translate({})", fmt_list(v)))
            }
        };
        Ok(Body {
            n,
            shape: Arc::clone(&self.shape),
            frame: outer.compose(&self.frame),
            label: format!("{}@{tag}", self.label),
        })
    }

    pub fn scaled(&self, a: f64) -> Result<Body> {
        self.transform(&Transform::Scale(a))
    }

    /// Outer parallel body `K + t B`.
    pub fn minkowski_add_ball(&self, t: f64) -> Result<Body> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter("t must be non-negative".into()));
        }
        if t == 0.0 {
            return Ok(self.clone());
        }
        let tc = t / self.frame.scale;
        let shape = self.shape.parallel(tc)?;
        Ok(Body {
            n: self.n,
            shape: Arc::new(shape),
            frame: self.frame.clone(),
            label: format!("{}+{t}B", self.label),
        })
    }

    /// Generic finite-difference sphere jet from the support function.
    pub fn fd_sphere_jet(&self, u: &[f64]) -> SphereJet {
        fd_sphere_jet(|v| self.support(v), u, FD_STEP)
    }
}

/// Hausdorff distance `max_u |h_K(u) - h_L(u)|`.
pub fn hausdorff_distance(k: &Body, l: &Body) -> Result<f64> {
    if k.dim() != l.dim() {
        return Err(Error::InvalidParameter("bodies live in different dimensions".into()));
    }
    let (_, v) = maximize_on_sphere(k.dim(), |u| (k.support(u) - l.support(u)).abs());
    Ok(v)
}
