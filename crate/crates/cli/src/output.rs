//! Result rows and their JSON and CSV encodings.
//!
//! JSON: `{schema_version, job, results: [{id, inputs, value, error_estimate, flags}]}`.
//! Floats carry 17 significant digits, exact rationals are `"num/den"`
//! strings and non-finite floats are the strings `"inf"`, `"-inf"`, `"nan"`.
//!
//! CSV columns, always in this order:
//! `id,n,p,m,k,s,t,l,r,level,body,value,error_estimate,flags`
//! with flags joined by `;` and absent inputs left empty.

use std::io::Write;

use lpsteiner::combinatorics::{format_rational, Rational};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::job::JobSpec;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 14] = [
    "id",
    "n",
    "p",
    "m",
    "k",
    "s",
    "t",
    "l",
    "r",
    "level",
    "body",
    "value",
    "error_estimate",
    "flags",
];

/// `x` with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// A float serialized with [`format_f64`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(format_f64(self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_str(&format_f64(self.0))
        }
    }
}

pub fn ser_f17_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => F17(*x).serialize(s),
        None => s.serialize_none(),
    }
}

pub fn ser_f17_vec<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&F17(*x))?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Num {
    Float(f64),
    Exact(Rational),
    Text(String),
}

impl Num {
    fn text(&self) -> String {
        match self {
            Num::Float(x) => format_f64(*x),
            Num::Exact(r) => format_rational(r),
            Num::Text(t) => t.clone(),
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Num::Float(x) => F17(*x).serialize(s),
            _ => s.serialize_str(&self.text()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RowInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_f17_opt")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_f17_opt")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_f17_opt")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub id: String,
    pub inputs: RowInputs,
    pub value: Num,
    #[serde(serialize_with = "ser_f17_opt")]
    pub error_estimate: Option<f64>,
    pub flags: Vec<String>,
    /// Expectation and tolerance of a verification check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckInfo {
    pub expected: Num,
    pub source: String,
    pub tolerance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Row {
    pub fn new(id: impl Into<String>, inputs: RowInputs, value: Num) -> Self {
        Row {
            id: id.into(),
            inputs,
            value,
            error_estimate: None,
            flags: Vec::new(),
            check: None,
        }
    }

    pub fn error(mut self, e: f64) -> Self {
        self.error_estimate = Some(e);
        self
    }

    pub fn flag(mut self, f: impl Into<String>) -> Self {
        let f = f.into();
        if !self.flags.contains(&f) {
            self.flags.push(f);
        }
        self
    }

    pub fn has_flag(&self, f: &str) -> bool {
        self.flags.iter().any(|x| x == f)
    }
}

struct Rows<'a>(&'a [Row]);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for r in self.0 {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

#[derive(Serialize)]
struct JobOut<'a> {
    canonical: String,
    #[serde(flatten)]
    spec: &'a JobSpec,
}

#[derive(Serialize)]
struct Report<'a> {
    schema_version: u32,
    job: JobOut<'a>,
    results: Rows<'a>,
}

pub fn write_json<W: Write>(job: &JobSpec, rows: &[Row], mut w: W) -> Result<(), CliError> {
    let report = Report {
        schema_version: SCHEMA_VERSION,
        job: JobOut {
            canonical: job.canonical(),
            spec: job,
        },
        results: Rows(rows),
    };
    serde_json::to_writer_pretty(&mut w, &report).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w).map_err(|e| CliError::Io(e.to_string()))
}

pub fn write_csv<W: Write>(rows: &[Row], w: W) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_COLUMNS).map_err(io)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in rows {
        let i = &r.inputs;
        out.write_record([
            r.id.clone(),
            opt(i.n.map(|v| v.to_string())),
            opt(i.p.clone()),
            opt(i.m.map(|v| v.to_string())),
            opt(i.k.map(|v| v.to_string())),
            opt(i.s.map(format_f64)),
            opt(i.t.map(format_f64)),
            opt(i.l.map(|v| v.to_string())),
            opt(i.r.map(format_f64)),
            opt(i.level.map(|v| v.to_string())),
            opt(i.body.clone()),
            r.value.text(),
            opt(r.error_estimate.map(format_f64)),
            r.flags.join(";"),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}
