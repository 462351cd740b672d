//! String addressable body catalog.
//!
//! Grammar: `name[:dim][:key=value,...]`, or `name:a1,a2[,a3][:key=value,...]`
//! for shapes given by semi-axes or half-widths.
//!
//! | spec | body |
//! |---|---|
//! | `ball:<n>[:r=<radius>]` | Euclidean ball centred at 0 (default `r=1`) |
//! | `ellipsoid:<a1>,...,<an>` | axis-aligned ellipsoid with these semi-axes |
//! | `box:<n>[:h=<half width>]` | cube `[-h, h]^n` (default `h=1`) |
//! | `rounded-cube:<n>:l=<l>` | `(1 - 1/l) B_inf + (1/l) B_2` |
//! | `rounded-box:<c1>,...,<cn>:radius=<r>` | box `prod [-c_i, c_i]` plus `r B_2` |
//! | `lr-ball:<n>:r=<r>` | unit ball of the `l_r` norm, `r > 2` |
//! | `capped-ellipsoid:<a..>:axis=<i>,cut=<c>,side=below\|above` | `E ∩ {x_i <= c}` or `E ∩ {x_i >= c}` |
//! | `slab-ellipsoid:<a..>:axis=<i>,lo=<lo>,hi=<hi>` | `E ∩ {lo <= x_i <= hi}` |
//!
//! Numbers are printed in shortest round-trip form, so `parse(format(s))`
//! reproduces the same spec.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{
    make_ball, make_box, make_capped_ellipsoid, make_ellipsoid, make_lr_ball, make_rounded_box,
    make_rounded_cube, make_slab_ellipsoid, Body,
};
use crate::error::{Error, Result};

/// Which side of the cutting plane is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CapSide {
    Below,
    Above,
}

impl fmt::Display for CapSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapSide::Below => "below",
            CapSide::Above => "above",
        })
    }
}

/// Parsed catalog entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum BodySpec {
    Ball { n: usize, r: f64 },
    Ellipsoid { axes: Vec<f64> },
    Box { n: usize, h: f64 },
    RoundedCube { n: usize, l: u32 },
    RoundedBox { core: Vec<f64>, radius: f64 },
    LrBall { n: usize, r: f64 },
    CappedEllipsoid { axes: Vec<f64>, axis: usize, cut: f64, side: CapSide },
    SlabEllipsoid { axes: Vec<f64>, axis: usize, lo: f64, hi: f64 },
}

fn bad(s: &str, why: &str) -> Error {
    Error::Parse(format!("body spec {s:?}: {why}"))
}

fn number(s: &str, field: &str) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| bad(s, &format!("{field:?} is not a number")))?;
    if !v.is_finite() {
        return Err(bad(s, "numbers must be finite"));
    }
    Ok(v)
}

fn list(s: &str, field: &str) -> Result<Vec<f64>> {
    field.split(',').map(|x| number(s, x)).collect()
}

fn keys(s: &str, field: Option<&str>) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    if let Some(field) = field {
        for kv in field.split(',').filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| bad(s, &format!("expected key=value, got {kv:?}")))?;
            if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(bad(s, &format!("duplicate key {k:?}")));
            }
        }
    }
    Ok(out)
}

struct Keys<'a> {
    spec: &'a str,
    map: BTreeMap<String, String>,
}

impl Keys<'_> {
    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn num(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.take(key) {
            Some(v) => number(self.spec, &v),
            None => default.ok_or_else(|| bad(self.spec, &format!("missing key {key:?}"))),
        }
    }

    fn int(&mut self, key: &str) -> Result<u64> {
        let v = self
            .take(key)
            .ok_or_else(|| bad(self.spec, &format!("missing key {key:?}")))?;
        v.parse().map_err(|_| bad(self.spec, &format!("{key} must be a non-negative integer")))
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            Some(k) => Err(bad(self.spec, &format!("unknown key {k:?}"))),
            None => Ok(()),
        }
    }
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
}

impl FromStr for BodySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fields = s.trim().splitn(3, ':');
        let name = fields.next().unwrap_or_default();
        let first = fields.next().ok_or_else(|| bad(s, "missing dimension or semi-axes"))?;
        let mut k = Keys {
            spec: s,
            map: keys(s, fields.next())?,
        };
        let dim = || -> Result<usize> {
            first
                .trim()
                .parse()
                .map_err(|_| bad(s, &format!("dimension {first:?} is not an integer")))
        };
        let spec = match name {
            "ball" => BodySpec::Ball {
                n: dim()?,
                r: k.num("r", Some(1.0))?,
            },
            "ellipsoid" => BodySpec::Ellipsoid { axes: list(s, first)? },
            "box" => BodySpec::Box {
                n: dim()?,
                h: k.num("h", Some(1.0))?,
            },
            "rounded-cube" => BodySpec::RoundedCube {
                n: dim()?,
                l: u32::try_from(k.int("l")?).map_err(|_| bad(s, "l too large"))?,
            },
            "rounded-box" => BodySpec::RoundedBox {
                core: list(s, first)?,
                radius: k.num("radius", None)?,
            },
            "lr-ball" => BodySpec::LrBall {
                n: dim()?,
                r: k.num("r", None)?,
            },
            "capped-ellipsoid" => {
                let axes = list(s, first)?;
                let axis = k.int("axis")? as usize;
                let cut = k.num("cut", None)?;
                let side = match k.take("side").as_deref() {
                    Some("below") | None => CapSide::Below,
                    Some("above") => CapSide::Above,
                    Some(other) => return Err(bad(s, &format!("side must be below or above, got {other:?}"))),
                };
                BodySpec::CappedEllipsoid { axes, axis, cut, side }
            }
            "slab-ellipsoid" => BodySpec::SlabEllipsoid {
                axes: list(s, first)?,
                axis: k.int("axis")? as usize,
                lo: k.num("lo", None)?,
                hi: k.num("hi", None)?,
            },
            other => return Err(bad(s, &format!("unknown body {other:?}"))),
        };
        k.finish()?;
        Ok(spec)
    }
}

impl fmt::Display for BodySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodySpec::Ball { n, r } => write!(f, "ball:{n}:r={r}"),
            BodySpec::Ellipsoid { axes } => write!(f, "ellipsoid:{}", fmt_list(axes)),
            BodySpec::Box { n, h } => write!(f, "box:{n}:h={h}"),
            BodySpec::RoundedCube { n, l } => write!(f, "rounded-cube:{n}:l={l}"),
            BodySpec::RoundedBox { core, radius } => {
                write!(f, "rounded-box:{}:radius={radius}", fmt_list(core))
            }
            BodySpec::LrBall { n, r } => write!(f, "lr-ball:{n}:r={r}"),
            BodySpec::CappedEllipsoid { axes, axis, cut, side } => write!(
                f,
                "capped-ellipsoid:{}:axis={axis},cut={cut},side={side}",
                fmt_list(axes)
            ),
            BodySpec::SlabEllipsoid { axes, axis, lo, hi } => {
                write!(f, "slab-ellipsoid:{}:axis={axis},lo={lo},hi={hi}", fmt_list(axes))
            }
        }
    }
}

impl BodySpec {
    pub fn build(&self) -> Result<Body> {
        let mut body = match self {
            BodySpec::Ball { n, r } => make_ball(*n, *r, &vec![0.0; *n])?,
            BodySpec::Ellipsoid { axes } => make_ellipsoid(axes)?,
            BodySpec::Box { n, h } => make_box(*n, *h)?,
            BodySpec::RoundedCube { n, l } => make_rounded_cube(*n, *l)?,
            BodySpec::RoundedBox { core, radius } => make_rounded_box(core, *radius)?,
            BodySpec::LrBall { n, r } => make_lr_ball(*n, *r)?,
            BodySpec::CappedEllipsoid { axes, axis, cut, side } => {
                make_capped_ellipsoid(axes, *axis, *cut, *side)?
            }
            BodySpec::SlabEllipsoid { axes, axis, lo, hi } => make_slab_ellipsoid(axes, *axis, *lo, *hi)?,
        };
        body.label = self.to_string();
        Ok(body)
    }
}

/// Parses and builds a catalog body.
pub fn parse_body(spec: &str) -> Result<Body> {
    spec.parse::<BodySpec>()?.build()
}
