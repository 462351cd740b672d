//! Canonical shapes and their boundary parametrizations.

use std::f64::consts::PI;
use std::sync::Arc;

use super::geom::{dot, implicit_curvatures_diag, norm, restrict_diag, sym_eigenvalues, tangent_basis};
use super::{BoundaryJet, RegionKind, SphereJet, Smoothness};
use crate::error::{Error, Result};
use crate::quadrature::{orthant_axes, orthant_point, Axis};

/// Shape in canonical position. Dimension is carried by the owning body.
#[derive(Debug, Clone)]
pub(crate) enum Shape {
    /// `sum (x_i / a_i)^2 <= 1`; `ball` when all axes agree.
    Ellipsoid { axes: Vec<f64>, ball: bool },
    /// `sum |x_i|^r <= 1`.
    LrBall { r: f64 },
    /// `[-c, c] + radius B`.
    RoundedBox { core: Vec<f64>, radius: f64 },
    /// Ellipsoid intersected with `lo <= x_axis <= hi`.
    Capped { axes: Vec<f64>, axis: usize, lo: f64, hi: f64 },
    /// `base + t B`.
    Parallel { base: Arc<Shape>, t: f64 },
}

pub(crate) type RegionParts = (RegionKind, Vec<Axis>, Patch, String);

/// Parametrized boundary piece in canonical coordinates.
#[derive(Debug, Clone)]
pub(crate) enum Patch {
    /// Ellipsoid surface `x = diag(axes) w`. In 2D the parameter is the angle
    /// of `w` from `e_axis`; in 3D it is `(w_axis, azimuth)`.
    Ellipsoid { axes: Vec<f64>, ball: bool, axis: usize },
    /// Planar elliptical disk `center + sum_j s_j b_j`. Parameters: `s` in 2D,
    /// polar `(rho, phi)` in 3D.
    Disk { center: Vec<f64>, normal: Vec<f64>, b: Vec<Vec<f64>> },
    /// Piece of a rounded box curved in the coordinates `curved`.
    Rounded {
        core: Vec<f64>,
        radius: f64,
        curved: Vec<usize>,
        signs: Vec<f64>,
        free: Vec<usize>,
    },
    /// One orthant of the `l_r` sphere, radially parametrized.
    LrOrthant { r: f64, signs: Vec<f64> },
    /// Normal offset of a base patch by `t`.
    Parallel { base: Box<Patch>, t: f64 },
}

fn ellipsoid_direction(n: usize, axis: usize, param: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; n];
    if n == 2 {
        let (s, c) = param[0].sin_cos();
        w[axis] = c;
        w[1 - axis] = s;
    } else {
        let z = param[0];
        let rho = (1.0 - z * z).max(0.0).sqrt();
        let (s, c) = param[1].sin_cos();
        w[axis] = z;
        w[(axis + 1) % 3] = rho * c;
        w[(axis + 2) % 3] = rho * s;
    }
    w
}

/// Boundary jet and surface density (relative to `d sigma(w)`) at `x = A w`.
fn ellipsoid_jet(axes: &[f64], ball: bool, w: &[f64]) -> (BoundaryJet, f64) {
    let n = axes.len();
    if ball {
        let r = axes[0];
        let x = w.iter().map(|v| r * v).collect();
        let jet = BoundaryJet::new(x, w.to_vec(), vec![1.0 / r; n - 1]);
        return (jet, r.powi(n as i32 - 1));
    }
    let x: Vec<f64> = axes.iter().zip(w).map(|(a, v)| a * v).collect();
    let g: Vec<f64> = axes.iter().zip(w).map(|(a, v)| v / a).collect();
    let gl = norm(&g);
    let normal: Vec<f64> = g.iter().map(|v| v / gl).collect();
    let inv_sq: Vec<f64> = axes.iter().map(|a| 1.0 / (a * a)).collect();
    let basis = tangent_basis(&normal);
    let mut shape = restrict_diag(&inv_sq, &basis);
    shape.iter_mut().for_each(|v| *v /= gl);
    let curv = sym_eigenvalues(&shape, n - 1);
    let det: f64 = axes.iter().product();
    (BoundaryJet::new(x, normal, curv), det * gl)
}

fn ellipsoid_sphere_jet(axes: &[f64], ball: bool, u: &[f64]) -> SphereJet {
    let n = axes.len();
    if ball {
        return SphereJet::new(axes[0], vec![axes[0]; n - 1]);
    }
    let a2u: Vec<f64> = axes.iter().zip(u).map(|(a, v)| a * a * v).collect();
    let h = dot(&a2u, u).sqrt();
    let basis = tangent_basis(u);
    let m = basis.len();
    let mut hess = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let diag: f64 = (0..n).map(|c| basis[i][c] * basis[j][c] * axes[c] * axes[c]).sum();
            let v = diag / h - dot(&basis[i], &a2u) * dot(&basis[j], &a2u) / (h * h * h);
            hess[i * m + j] = v;
            hess[j * m + i] = v;
        }
    }
    SphereJet::new(h, sym_eigenvalues(&hess, m))
}

fn lr_point_jet(r: f64, x: Vec<f64>) -> BoundaryJet {
    let grad: Vec<f64> = x.iter().map(|&v| r * v.signum() * v.abs().powf(r - 1.0)).collect();
    let hess: Vec<f64> = x.iter().map(|&v| r * (r - 1.0) * v.abs().powf(r - 2.0)).collect();
    let (normal, curv) = implicit_curvatures_diag(&grad, &hess);
    BoundaryJet::new(x, normal, curv)
}

fn lr_norm(v: &[f64], r: f64) -> f64 {
    v.iter().map(|x| x.abs().powf(r)).sum::<f64>().powf(1.0 / r)
}

impl Patch {
    fn kind(&self) -> RegionKind {
        match self {
            Patch::Ellipsoid { ball: true, .. } => RegionKind::SpherePatch,
            Patch::Ellipsoid { .. } | Patch::LrOrthant { .. } => RegionKind::AnalyticPatch,
            Patch::Disk { .. } => RegionKind::FlatFace,
            Patch::Rounded { curved, core, .. } => match curved.len() {
                1 => RegionKind::FlatFace,
                d if d == core.len() => RegionKind::SpherePatch,
                _ => RegionKind::AnalyticPatch,
            },
            Patch::Parallel { base, .. } => match base.kind() {
                RegionKind::FlatFace => RegionKind::FlatFace,
                _ => RegionKind::AnalyticPatch,
            },
        }
    }

    pub(crate) fn density(&self, param: &[f64]) -> f64 {
        match self {
            Patch::Ellipsoid { axes, ball, axis } => {
                let n = axes.len();
                let w = ellipsoid_direction(n, *axis, param);
                if *ball {
                    axes[0].powi(n as i32 - 1)
                } else {
                    let g: Vec<f64> = axes.iter().zip(&w).map(|(a, v)| v / a).collect();
                    axes.iter().product::<f64>() * norm(&g)
                }
            }
            Patch::Disk { b, .. } => {
                if b.len() == 1 {
                    norm(&b[0])
                } else {
                    param[0] * norm(&b[0]) * norm(&b[1])
                }
            }
            Patch::Rounded { radius, curved, signs, .. } => {
                let d = curved.len();
                let (_, dens) = orthant_point(signs, &param[..d.saturating_sub(1).min(2)]);
                radius.powi(d as i32 - 1) * dens
            }
            Patch::LrOrthant { .. } => self.jet_and_density(param).map_or(0.0, |(_, d)| d),
            Patch::Parallel { base, t } => {
                let base_density = base.density(param);
                match base.jet(param) {
                    Ok(jet) => base_density * jet.curvatures.iter().map(|k| 1.0 + t * k).product::<f64>(),
                    Err(_) => 0.0,
                }
            }
        }
    }

    pub(crate) fn jet(&self, param: &[f64]) -> Result<BoundaryJet> {
        Ok(match self {
            Patch::Ellipsoid { axes, ball, axis } => {
                let w = ellipsoid_direction(axes.len(), *axis, param);
                ellipsoid_jet(axes, *ball, &w).0
            }
            Patch::Disk { center, normal, b } => {
                let mut x = center.clone();
                if b.len() == 1 {
                    x.iter_mut().zip(&b[0]).for_each(|(xi, bi)| *xi += param[0] * bi);
                } else {
                    let (s, c) = param[1].sin_cos();
                    for i in 0..x.len() {
                        x[i] += param[0] * (c * b[0][i] + s * b[1][i]);
                    }
                }
                BoundaryJet::new(x, normal.clone(), vec![0.0; center.len() - 1])
            }
            Patch::Rounded {
                core,
                radius,
                curved,
                signs,
                free,
            } => {
                let n = core.len();
                let d = curved.len();
                let k = d.saturating_sub(1).min(2);
                let (w, _) = orthant_point(signs, &param[..k]);
                let mut x = vec![0.0; n];
                let mut normal = vec![0.0; n];
                for (a, &c) in curved.iter().enumerate() {
                    x[c] = signs[a] * core[c] + radius * w[a];
                    normal[c] = w[a];
                }
                for (b, &f) in free.iter().enumerate() {
                    x[f] = param[k + b];
                }
                let mut curv = vec![0.0; n - 1];
                for c in curv.iter_mut().skip(n - d) {
                    *c = 1.0 / radius;
                }
                BoundaryJet::new(x, normal, curv)
            }
            Patch::LrOrthant { .. } => self.jet_and_density(param)?.0,
            Patch::Parallel { base, t } => {
                let jet = base.jet(param)?;
                let x = jet.x.iter().zip(&jet.normal).map(|(x, nn)| x + t * nn).collect();
                let curv = jet.curvatures.iter().map(|k| k / (1.0 + t * k)).collect();
                BoundaryJet::new(x, jet.normal, curv)
            }
        })
    }

    fn jet_and_density(&self, param: &[f64]) -> Result<(BoundaryJet, f64)> {
        match self {
            Patch::LrOrthant { r, signs } => {
                let n = signs.len();
                let (w, dens) = orthant_point(signs, param);
                let rho = 1.0 / lr_norm(&w, *r);
                let x: Vec<f64> = w.iter().map(|v| rho * v).collect();
                let jet = lr_point_jet(*r, x);
                let cos = dot(&w, &jet.normal);
                let density = rho.powi(n as i32 - 1) / cos * dens;
                Ok((jet, density))
            }
            _ => Ok((self.jet(param)?, self.density(param))),
        }
    }
}

fn sign_vectors(d: usize) -> Vec<Vec<f64>> {
    (0..1usize << d)
        .map(|mask| {
            (0..d)
                .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect()
        })
        .collect()
}

fn sign_label(signs: &[f64]) -> String {
    signs.iter().map(|&s| if s < 0.0 { '-' } else { '+' }).collect()
}

impl Shape {
    pub(crate) fn smoothness(&self) -> Smoothness {
        match self {
            Shape::Ellipsoid { .. } => Smoothness::C2Plus,
            Shape::LrBall { .. } | Shape::Capped { .. } => Smoothness::PiecewiseSmooth,
            Shape::RoundedBox { radius, .. } => {
                if *radius > 0.0 {
                    Smoothness::PiecewiseSmooth
                } else {
                    Smoothness::Polytope
                }
            }
            Shape::Parallel { base, .. } => base.smoothness(),
        }
    }

    /// Bounds on the principal radii for bodies with two-sided rolling balls.
    pub(crate) fn radius_bounds(&self) -> Option<(f64, f64)> {
        match self {
            Shape::Ellipsoid { axes, .. } => {
                let lo = axes.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = axes.iter().copied().fold(0.0, f64::max);
                Some((lo * lo / hi, hi * hi / lo))
            }
            Shape::Parallel { base, t } => base.radius_bounds().map(|(a, b)| (a + t, b + t)),
            _ => None,
        }
    }

    pub(crate) fn support(&self, u: &[f64]) -> f64 {
        match self {
            Shape::Ellipsoid { axes, ball } => {
                if *ball {
                    axes[0] * norm(u)
                } else {
                    axes.iter().zip(u).map(|(a, v)| a * a * v * v).sum::<f64>().sqrt()
                }
            }
            Shape::LrBall { r } => lr_norm(u, r / (r - 1.0)),
            Shape::RoundedBox { core, radius } => {
                core.iter().zip(u).map(|(c, v)| c * v.abs()).sum::<f64>() + radius * norm(u)
            }
            Shape::Capped { axes, axis, lo, hi } => {
                let h = Shape::ellipsoid_support(axes, u);
                let top = axes[*axis] * axes[*axis] * u[*axis] / h;
                let plane = if top > *hi {
                    *hi
                } else if top < *lo {
                    *lo
                } else {
                    return h;
                };
                let a = axes[*axis];
                let shrink = (1.0 - (plane / a).powi(2)).max(0.0);
                let rest: f64 = (0..axes.len())
                    .filter(|&j| j != *axis)
                    .map(|j| axes[j] * axes[j] * shrink * u[j] * u[j])
                    .sum();
                plane * u[*axis] + rest.sqrt()
            }
            Shape::Parallel { base, t } => base.support(u) + t * norm(u),
        }
    }

    fn ellipsoid_support(axes: &[f64], u: &[f64]) -> f64 {
        axes.iter().zip(u).map(|(a, v)| a * a * v * v).sum::<f64>().sqrt()
    }

    pub(crate) fn sphere_jet(&self, n: usize, u: &[f64]) -> Result<SphereJet> {
        match self {
            Shape::Ellipsoid { axes, ball } => Ok(ellipsoid_sphere_jet(axes, *ball, u)),
            Shape::LrBall { r } => {
                let q = 1.0 / (r - 1.0);
                let y: Vec<f64> = u.iter().map(|v| v.signum() * v.abs().powf(q)).collect();
                let l = lr_norm(&y, *r);
                let x: Vec<f64> = y.iter().map(|v| v / l).collect();
                let jet = lr_point_jet(*r, x);
                if jet.curvatures.iter().any(|&k| !(k > 0.0)) {
                    return Err(Error::EdgeOrFace(u.to_vec()));
                }
                let h = dot(&jet.x, u);
                Ok(SphereJet::new(h, jet.curvatures.iter().map(|k| 1.0 / k).collect()))
            }
            Shape::RoundedBox { core, radius } => {
                let kink = core.iter().zip(u).any(|(&c, &v)| c > 0.0 && v == 0.0);
                if *radius == 0.0 || kink {
                    return Err(Error::EdgeOrFace(u.to_vec()));
                }
                Ok(SphereJet::new(self.support(u), vec![*radius; n - 1]))
            }
            Shape::Capped { axes, axis, lo, hi } => {
                let h = Shape::ellipsoid_support(axes, u);
                let a = axes[*axis];
                let top = a * a * u[*axis] / h;
                // an uncut end at -a or a is a smooth pole, not a rim
                let above_lo = top > *lo || *lo <= -a;
                let below_hi = top < *hi || *hi >= a;
                if above_lo && below_hi {
                    Ok(ellipsoid_sphere_jet(axes, false, u))
                } else {
                    Err(Error::EdgeOrFace(u.to_vec()))
                }
            }
            Shape::Parallel { base, t } => {
                let jet = base.sphere_jet(n, u)?;
                Ok(SphereJet::new(jet.h + t, jet.radii.iter().map(|r| r + t).collect()))
            }
        }
    }

    /// `None` for the whole sphere, otherwise the coordinate orthants on which
    /// the support function is smooth.
    pub(crate) fn sphere_pieces(&self, n: usize) -> Result<Option<Vec<Vec<f64>>>> {
        match self {
            Shape::Ellipsoid { .. } => Ok(None),
            Shape::LrBall { .. } => Ok(Some(sign_vectors(n))),
            Shape::RoundedBox { radius, .. } => {
                if *radius > 0.0 {
                    Ok(Some(sign_vectors(n)))
                } else {
                    Err(Error::Unsupported("polytopes have no Gauss-map parametrization".into()))
                }
            }
            Shape::Capped { .. } => Err(Error::Unsupported(
                "capped bodies have edges; use boundary integrals".into(),
            )),
            Shape::Parallel { base, .. } => base.sphere_pieces(n),
        }
    }

    pub(crate) fn regions(&self, n: usize) -> Vec<RegionParts> {
        match self {
            Shape::Ellipsoid { axes, ball } => {
                let patch = Patch::Ellipsoid {
                    axes: axes.clone(),
                    ball: *ball,
                    axis: if n == 2 { 0 } else { 2 },
                };
                let axes_p = if n == 2 {
                    vec![Axis::Periodic { lo: 0.0, hi: 2.0 * PI }]
                } else {
                    vec![Axis::Gauss { lo: -1.0, hi: 1.0 }, Axis::Periodic { lo: 0.0, hi: 2.0 * PI }]
                };
                vec![(patch.kind(), axes_p, patch, "surface".into())]
            }
            Shape::LrBall { r } => sign_vectors(n)
                .into_iter()
                .map(|signs| {
                    let label = format!("orthant{}", sign_label(&signs));
                    let patch = Patch::LrOrthant { r: *r, signs };
                    (patch.kind(), orthant_axes(n), patch, label)
                })
                .collect(),
            Shape::RoundedBox { core, radius } => rounded_box_regions(core, *radius),
            Shape::Capped { axes, axis, lo, hi } => capped_regions(axes, *axis, *lo, *hi),
            Shape::Parallel { base, t } => base
                .regions(n)
                .into_iter()
                .map(|(_, ax, patch, label)| {
                    let p = Patch::Parallel {
                        base: Box::new(patch),
                        t: *t,
                    };
                    (p.kind(), ax, p, label)
                })
                .collect(),
        }
    }

    pub(crate) fn contains(&self, y: &[f64]) -> Result<bool> {
        let eps = 1e-14;
        Ok(match self {
            Shape::Ellipsoid { axes, .. } => {
                axes.iter().zip(y).map(|(a, v)| (v / a).powi(2)).sum::<f64>() <= 1.0 + eps
            }
            Shape::LrBall { r } => y.iter().map(|v| v.abs().powf(*r)).sum::<f64>() <= 1.0 + eps,
            Shape::RoundedBox { core, radius } => {
                let d2: f64 = core
                    .iter()
                    .zip(y)
                    .map(|(c, v)| (v.abs() - c).max(0.0).powi(2))
                    .sum();
                if *radius == 0.0 {
                    d2 <= eps
                } else {
                    d2 <= radius * radius * (1.0 + eps)
                }
            }
            Shape::Capped { axes, axis, lo, hi } => {
                axes.iter().zip(y).map(|(a, v)| (v / a).powi(2)).sum::<f64>() <= 1.0 + eps
                    && y[*axis] >= lo - eps
                    && y[*axis] <= hi + eps
            }
            Shape::Parallel { .. } => {
                return Err(Error::Unsupported("membership test for parallel bodies".into()))
            }
        })
    }

    /// Exit parameter `l` of the ray `o + l w` when available in closed form.
    pub(crate) fn ray_exit(&self, o: &[f64], w: &[f64]) -> Option<f64> {
        match self {
            Shape::Ellipsoid { axes, .. } => {
                let qa: f64 = axes.iter().zip(w).map(|(a, v)| (v / a).powi(2)).sum();
                let qb: f64 = axes.iter().zip(w).zip(o).map(|((a, v), c)| v * c / (a * a)).sum();
                let qc: f64 = axes.iter().zip(o).map(|(a, c)| (c / a).powi(2)).sum::<f64>() - 1.0;
                let disc = qb * qb - qa * qc;
                if disc < 0.0 || qc > 0.0 {
                    return None;
                }
                // larger root of qa l^2 + 2 qb l + qc = 0, in a cancellation-free form
                let root = if qb <= 0.0 {
                    (-qb + disc.sqrt()) / qa
                } else {
                    -qc / (qb + disc.sqrt())
                };
                Some(root)
            }
            _ => None,
        }
    }

    pub(crate) fn locate(&self, n: usize, y: &[f64]) -> Result<BoundaryJet> {
        match self {
            Shape::Ellipsoid { axes, ball } => {
                let g: Vec<f64> = axes.iter().zip(y).map(|(a, v)| v / a).collect();
                let l = norm(&g);
                let w: Vec<f64> = g.iter().map(|v| v / l).collect();
                Ok(ellipsoid_jet(axes, *ball, &w).0)
            }
            Shape::LrBall { r } => {
                let l = lr_norm(y, *r);
                Ok(lr_point_jet(*r, y.iter().map(|v| v / l).collect()))
            }
            Shape::Capped { axes, axis, lo, hi } => {
                let tol = 1e-12 * axes[*axis];
                let a = axes[*axis];
                for (plane, sign) in [(*hi, 1.0), (*lo, -1.0)] {
                    if (y[*axis] - plane).abs() <= tol && plane.abs() < a {
                        let mut normal = vec![0.0; n];
                        normal[*axis] = sign;
                        let inside: f64 = (0..n)
                            .filter(|&j| j != *axis)
                            .map(|j| (y[j] / axes[j]).powi(2))
                            .sum::<f64>()
                            + (plane / a).powi(2);
                        if inside < 1.0 - 1e-12 {
                            let mut x = y.to_vec();
                            x[*axis] = plane;
                            return Ok(BoundaryJet::new(x, normal, vec![0.0; n - 1]));
                        }
                    }
                }
                if y[*axis] < lo - tol || y[*axis] > hi + tol {
                    return Err(Error::InvalidParameter("point is outside the capped body".into()));
                }
                Shape::Ellipsoid {
                    axes: axes.clone(),
                    ball: false,
                }
                .locate(n, y)
            }
            _ => Err(Error::Unsupported("point location on this shape".into())),
        }
    }

    pub(crate) fn parallel(&self, t: f64) -> Result<Shape> {
        Ok(match self {
            Shape::Ellipsoid { axes, ball: true } => Shape::Ellipsoid {
                axes: axes.iter().map(|a| a + t).collect(),
                ball: true,
            },
            Shape::Ellipsoid { .. } | Shape::LrBall { .. } => Shape::Parallel {
                base: Arc::new(self.clone()),
                t,
            },
            Shape::RoundedBox { core, radius } => Shape::RoundedBox {
                core: core.clone(),
                radius: radius + t,
            },
            Shape::Parallel { base, t: t0 } => Shape::Parallel {
                base: Arc::clone(base),
                t: t0 + t,
            },
            Shape::Capped { .. } => {
                return Err(Error::Unsupported(
                    "parallel bodies of capped ellipsoids (edge tubes are not modelled)".into(),
                ))
            }
        })
    }
}

fn rounded_box_regions(core: &[f64], radius: f64) -> Vec<RegionParts> {
    let n = core.len();
    let mut out = Vec::new();
    for mask in 1usize..(1 << n) {
        let curved: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let free: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        let d = curved.len();
        if (radius == 0.0 && d >= 2) || free.iter().any(|&j| core[j] == 0.0) {
            continue;
        }
        for signs in sign_vectors(d) {
            let mut axes = orthant_axes(d);
            for &f in &free {
                axes.push(Axis::Gauss {
                    lo: -core[f],
                    hi: core[f],
                });
            }
            let label = format!(
                "{}[{}]{}",
                match d {
                    1 => "face",
                    x if x == n => "corner",
                    _ => "edge",
                },
                curved.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(""),
                sign_label(&signs)
            );
            let patch = Patch::Rounded {
                core: core.to_vec(),
                radius,
                curved: curved.clone(),
                signs,
                free: free.clone(),
            };
            out.push((patch.kind(), axes, patch, label));
        }
    }
    out
}

fn capped_regions(axes: &[f64], axis: usize, lo: f64, hi: f64) -> Vec<RegionParts> {
    let n = axes.len();
    let a = axes[axis];
    let (zlo, zhi) = (lo / a, hi / a);
    let mut out = Vec::new();
    let patch = || Patch::Ellipsoid {
        axes: axes.to_vec(),
        ball: false,
        axis,
    };
    if n == 2 {
        let (t0, t1) = (zhi.clamp(-1.0, 1.0).acos(), zlo.clamp(-1.0, 1.0).acos());
        out.push((
            RegionKind::AnalyticPatch,
            vec![Axis::Gauss { lo: t0, hi: t1 }],
            patch(),
            "surface+".into(),
        ));
        out.push((
            RegionKind::AnalyticPatch,
            vec![Axis::Gauss { lo: -t1, hi: -t0 }],
            patch(),
            "surface-".into(),
        ));
    } else {
        out.push((
            RegionKind::AnalyticPatch,
            vec![Axis::Gauss { lo: zlo, hi: zhi }, Axis::Periodic { lo: 0.0, hi: 2.0 * PI }],
            patch(),
            "surface".into(),
        ));
    }
    for (plane, sign, label) in [(hi, 1.0, "cap-top"), (lo, -1.0, "cap-bottom")] {
        if plane.abs() >= a {
            continue;
        }
        let shrink = (1.0 - (plane / a).powi(2)).sqrt();
        let mut center = vec![0.0; n];
        center[axis] = plane;
        let mut normal = vec![0.0; n];
        normal[axis] = sign;
        let b: Vec<Vec<f64>> = (0..n)
            .filter(|&j| j != axis)
            .map(|j| {
                let mut v = vec![0.0; n];
                v[j] = axes[j] * shrink;
                v
            })
            .collect();
        let ax = if n == 2 {
            vec![Axis::Gauss { lo: -1.0, hi: 1.0 }]
        } else {
            vec![Axis::Gauss { lo: 0.0, hi: 1.0 }, Axis::Periodic { lo: 0.0, hi: 2.0 * PI }]
        };
        out.push((RegionKind::FlatFace, ax, Patch::Disk { center, normal, b }, label.into()));
    }
    out
}
