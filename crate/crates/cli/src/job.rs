//! Job descriptions and their canonical text form.
//!
//! A job prints as `command key=value ...` with keys in a fixed order and
//! defaults omitted; parsing that text gives back the same job.

use std::fmt;
use std::str::FromStr;

use lpsteiner::bodies::parse_body;
use lpsteiner::combinatorics::{format_rational, integer, parse_rational, to_f64, Rational};
use lpsteiner::verify::Suite;
use lpsteiner::{Accuracy, PValue};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Coeff,
    Asa,
    Steiner,
    Series,
    Verify,
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Coeff => "coeff",
            Command::Asa => "asa",
            Command::Steiner => "steiner",
            Command::Series => "series",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "coeff" => Command::Coeff,
            "asa" => Command::Asa,
            "steiner" => Command::Steiner,
            "series" => Command::Series,
            "verify" => Command::Verify,
            "sweep" => Command::Sweep,
            _ => return Err(CliError::Usage(format!("unknown command '{s}'"))),
        })
    }
}

/// The Lp parameter: exact on combinatorial paths, converted to `f64` for
/// numerics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PArg {
    Exact(Rational),
    PosInf,
    NegInf,
}

impl PArg {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            PArg::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn value(&self) -> PValue {
        match self {
            PArg::Exact(r) => PValue::Finite(to_f64(r)),
            PArg::PosInf => PValue::PosInf,
            PArg::NegInf => PValue::NegInf,
        }
    }

    pub fn is_minus(&self, n: usize) -> bool {
        matches!(self, PArg::Exact(r) if *r == -integer(n as i64))
    }
}

impl FromStr for PArg {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(PArg::PosInf),
            "-inf" | "-infinity" => Ok(PArg::NegInf),
            t => parse_rational(t).map(PArg::Exact).map_err(|e| CliError::Usage(e.to_string())),
        }
    }
}

impl fmt::Display for PArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PArg::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            PArg::Exact(r) => f.write_str(&format_rational(r)),
            PArg::PosInf => f.write_str("inf"),
            PArg::NegInf => f.write_str("-inf"),
        }
    }
}

impl Serialize for PArg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Inclusive index range `a..b`, or a single index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: u32,
    pub hi: u32,
}

impl IndexRange {
    pub fn single(k: u32) -> Self {
        IndexRange { lo: k, hi: k }
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<u32> {
        self.lo..=self.hi
    }
}

impl FromStr for IndexRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("not an index or range 'a..b': {s:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
            }
            None => {
                let k = s.trim().parse().map_err(|_| bad())?;
                (k, k)
            }
        };
        if lo > hi {
            return Err(CliError::Usage(format!("empty range {s:?}")));
        }
        Ok(IndexRange { lo, hi })
    }
}

impl fmt::Display for IndexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

impl Serialize for IndexRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Which coefficient family `coeff` tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CoeffKind {
    /// `C(n,p,k)`
    #[default]
    C,
    /// `F_m(n,p)`, the composition sums
    F,
}

/// Integration route of `asa` and `steiner`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// Sphere form when the body has one, boundary form otherwise.
    #[default]
    Auto,
    Boundary,
    Sphere,
}

/// Parameter families of `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    /// `V^p_k(K_l)` and `d_H(K_l, B_inf)` over `l`.
    RoundedCube,
    /// `as_p` of an `l_r` ball at fixed quadrature levels.
    LrBall,
    /// `as_p(K + tB)` over `t`.
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

macro_rules! keyword_enum {
    ($ty:ty { $($name:literal => $v:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = CliError;
            fn from_str(s: &str) -> Result<Self, CliError> {
                match s {
                    $($name => Ok($v),)+
                    _ => Err(CliError::Usage(format!("unknown {} '{s}'", stringify!($ty)))),
                }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $v { return f.write_str($name); })+
                unreachable!()
            }
        }
    };
}

keyword_enum!(CoeffKind { "c" => CoeffKind::C, "f" => CoeffKind::F });
keyword_enum!(Form { "auto" => Form::Auto, "boundary" => Form::Boundary, "sphere" => Form::Sphere });
keyword_enum!(SweepKind { "rounded-cube" => SweepKind::RoundedCube, "lr-ball" => SweepKind::LrBall, "parallel" => SweepKind::Parallel });
keyword_enum!(Format { "json" => Format::Json, "csv" => Format::Csv });

/// Default truncation cap of `series`.
pub const DEFAULT_K_MAX: u32 = 400;
/// Default truncation tolerance of `series`.
pub const DEFAULT_SERIES_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobSpec {
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<SweepKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<PArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<IndexRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<IndexRange>,
    /// Order of a mixed affine surface area.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "crate::output::ser_f17_opt")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", serialize_with = "crate::output::ser_f17_vec")]
    pub t: Vec<f64>,
    /// Rounded-cube indices of `sweep rounded-cube`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub l: Vec<u32>,
    /// The `r` of `sweep lr-ball`.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "crate::output::ser_f17_opt")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<u32>,
    pub coeff: CoeffKind,
    pub form: Form,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "crate::output::ser_f17_opt")]
    pub series_tol: Option<f64>,
    /// Quadrature tolerance override.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "crate::output::ser_f17_opt")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_level: Option<u32>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            kind: None,
            suite: None,
            body: None,
            n: None,
            p: None,
            m: None,
            k: None,
            s: None,
            t: Vec::new(),
            l: Vec::new(),
            r: None,
            levels: Vec::new(),
            coeff: CoeffKind::default(),
            form: Form::default(),
            k_max: None,
            series_tol: None,
            tol: None,
            max_level: None,
            format: Format::default(),
            output: None,
        }
    }

    pub fn accuracy(&self) -> Accuracy {
        let mut acc = Accuracy::default();
        if let Some(t) = self.tol {
            acc.tol = t;
        }
        acc.max_level = self.max_level;
        acc
    }

    /// Dimension from `n` or the body spec.
    pub fn dim(&self) -> Option<usize> {
        self.n.or_else(|| self.body.as_ref().and_then(|b| parse_body(b).ok()).map(|b| b.dim()))
    }

    /// Checks required fields, normalizes the body spec and rejects `p = -n`.
    pub fn validate(mut self) -> Result<Self, CliError> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{} needs {what}", self.command.name())))
            }
        };
        if let Some(b) = &self.body {
            let body = parse_body(b).map_err(|e| CliError::Usage(e.to_string()))?;
            if let Some(n) = self.n {
                if n != body.dim() {
                    return Err(CliError::Usage(format!("n = {n} but the body lives in dimension {}", body.dim())));
                }
            }
            self.body = Some(body.label().to_string());
        }
        match self.command {
            Command::Coeff => {
                need(self.n.is_some(), "--n")?;
                need(self.k.is_some(), "--k")?;
                need(matches!(self.p, Some(PArg::Exact(_))), "a finite rational --p")?;
            }
            Command::Asa | Command::Steiner | Command::Series => {
                need(self.body.is_some(), "--body")?;
                need(self.p.is_some(), "--p")?;
                if self.command == Command::Steiner {
                    need(self.k.is_some(), "--k")?;
                }
                if self.command == Command::Series {
                    need(!self.t.is_empty(), "--t")?;
                }
            }
            Command::Verify => need(self.suite.is_some(), "--suite")?,
            Command::Sweep => {
                need(self.p.is_some(), "--p")?;
                match self.kind {
                    Some(SweepKind::RoundedCube) => {
                        need(self.n.is_some(), "--n")?;
                        need(!self.l.is_empty(), "--l")?;
                        need(self.k.is_some(), "--k")?;
                    }
                    Some(SweepKind::LrBall) => {
                        need(self.n.is_some(), "--n")?;
                        need(self.r.is_some(), "--r")?;
                        need(!self.levels.is_empty(), "--levels")?;
                    }
                    Some(SweepKind::Parallel) => {
                        need(self.body.is_some(), "--body")?;
                        need(!self.t.is_empty(), "--t")?;
                    }
                    None => need(false, "a sweep kind")?,
                }
            }
        }
        if let (Some(p), Some(n)) = (&self.p, self.dim()) {
            if p.is_minus(n) {
                return Err(CliError::Usage(format!("p = -{n} is a pole of the exponents")));
            }
        }
        Ok(self)
    }

    /// The canonical text form.
    pub fn canonical(&self) -> String {
        let mut out = vec![self.command.name().to_string()];
        let mut push = |k: &str, v: String| out.push(format!("{k}={v}"));
        if let Some(v) = self.kind {
            push("kind", v.to_string());
        }
        if let Some(v) = self.suite {
            push("suite", v.to_string());
        }
        if let Some(v) = &self.body {
            push("body", v.clone());
        }
        if let Some(v) = self.n {
            push("n", v.to_string());
        }
        if let Some(v) = &self.p {
            push("p", v.to_string());
        }
        if let Some(v) = self.m {
            push("m", v.to_string());
        }
        if let Some(v) = self.k {
            push("k", v.to_string());
        }
        if let Some(v) = self.s {
            push("s", float(v));
        }
        if !self.t.is_empty() {
            push("t", self.t.iter().map(|x| float(*x)).collect::<Vec<_>>().join(","));
        }
        if !self.l.is_empty() {
            push("l", join(&self.l));
        }
        if let Some(v) = self.r {
            push("r", float(v));
        }
        if !self.levels.is_empty() {
            push("levels", join(&self.levels));
        }
        if self.coeff != CoeffKind::default() {
            push("coeff", self.coeff.to_string());
        }
        if self.form != Form::default() {
            push("form", self.form.to_string());
        }
        if let Some(v) = self.k_max {
            push("k-max", v.to_string());
        }
        if let Some(v) = self.series_tol {
            push("series-tol", float(v));
        }
        if let Some(v) = self.tol {
            push("tol", float(v));
        }
        if let Some(v) = self.max_level {
            push("max-level", v.to_string());
        }
        if self.format != Format::default() {
            push("format", self.format.to_string());
        }
        if let Some(v) = &self.output {
            push("output", v.clone());
        }
        out.join(" ")
    }
}

/// Shortest of the plain and exponent forms; both parse back exactly.
fn float(x: f64) -> String {
    let plain = x.to_string();
    let exp = format!("{x:e}");
    if exp.len() < plain.len() { exp } else { plain }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list<T: FromStr>(key: &str, s: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("bad {key} value {x:?}"))))
        .collect()
}

fn parse_one<T: FromStr>(key: &str, s: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("bad {key} value {s:?}")))
}

impl FromStr for JobSpec {
    type Err = CliError;

    /// Parses the canonical form and validates the result.
    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut words = s.split_whitespace();
        let command: Command = words.next().ok_or_else(|| CliError::Usage("empty job".into()))?.parse()?;
        let mut job = JobSpec::new(command);
        for w in words {
            let (key, v) = w
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got {w:?}")))?;
            match key {
                "kind" => job.kind = Some(v.parse()?),
                "suite" => job.suite = Some(v.parse().map_err(|e: lpsteiner::Error| CliError::Usage(e.to_string()))?),
                "body" => job.body = Some(v.to_string()),
                "n" => job.n = Some(parse_one(key, v)?),
                "p" => job.p = Some(v.parse()?),
                "m" => job.m = Some(v.parse()?),
                "k" => job.k = Some(v.parse()?),
                "s" => job.s = Some(parse_one(key, v)?),
                "t" => job.t = parse_list(key, v)?,
                "l" => job.l = parse_list(key, v)?,
                "r" => job.r = Some(parse_one(key, v)?),
                "levels" => job.levels = parse_list(key, v)?,
                "coeff" => job.coeff = v.parse()?,
                "form" => job.form = v.parse()?,
                "k-max" => job.k_max = Some(parse_one(key, v)?),
                "series-tol" => job.series_tol = Some(parse_one(key, v)?),
                "tol" => job.tol = Some(parse_one(key, v)?),
                "max-level" => job.max_level = Some(parse_one(key, v)?),
                "format" => job.format = v.parse()?,
                "output" => job.output = Some(v.to_string()),
                _ => return Err(CliError::Usage(format!("unknown key '{key}'"))),
            }
        }
        job.validate()
    }
}

impl fmt::Display for JobSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}
