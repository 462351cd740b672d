//! Executes a job into result rows.

use lpsteiner::bodies::{hausdorff_distance, make_box, make_lr_ball, make_rounded_cube, parse_body, Body};
use lpsteiner::combinatorics::{c_npk_closed, f_m, sign_prediction, SignClass};
use lpsteiner::quadrature::boundary_at_level;
use lpsteiner::steiner::{
    asp_boundary, asp_sphere, direct_asp_parallel, flat_power, mixed_asa, series_asp, u_pk, v_pk, w_table, z_table,
    CoeffResult,
};
use lpsteiner::verify::{run_suite, Status, Tolerance, Value};
use lpsteiner::{Accuracy, Exponents, PValue, Truncation};

use crate::job::{CoeffKind, Command, Form, JobSpec, PArg, SweepKind, DEFAULT_K_MAX, DEFAULT_SERIES_TOL};
use crate::output::{format_f64, CheckInfo, Num, Row, RowInputs};
use crate::CliError;

/// Flag of results whose quadrature or series did not converge.
pub const UNCONVERGED: &str = "unconverged";
/// Flag of failed verification checks.
pub const FAILED: &str = "fail";

/// Outcome of a job; the exit code follows from the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub rows: Vec<Row>,
}

impl Outcome {
    pub fn failed_checks(&self) -> usize {
        self.rows.iter().filter(|r| r.has_flag(FAILED)).count()
    }

    pub fn unconverged(&self) -> usize {
        self.rows.iter().filter(|r| r.has_flag(UNCONVERGED)).count()
    }

    /// 0 on success, 1 on a failed check, 3 on non-convergence.
    pub fn exit_code(&self) -> i32 {
        if self.failed_checks() > 0 {
            1
        } else if self.unconverged() > 0 {
            3
        } else {
            0
        }
    }
}

fn body_of(job: &JobSpec) -> Result<Body, CliError> {
    let spec = job.body.as_deref().ok_or_else(|| CliError::Usage("missing --body".into()))?;
    Ok(parse_body(spec)?)
}

fn p_of(job: &JobSpec) -> Result<&PArg, CliError> {
    job.p.as_ref().ok_or_else(|| CliError::Usage("missing --p".into()))
}

fn inputs(body: &Body, p: &PArg) -> RowInputs {
    RowInputs {
        n: Some(body.dim()),
        p: Some(p.to_string()),
        body: Some(body.label().to_string()),
        ..RowInputs::default()
    }
}

fn coeff_row(c: &CoeffResult, inputs: RowInputs) -> Row {
    let mut row = Row::new(c.id.to_string(), inputs, Num::Float(c.value)).error(c.error_estimate);
    for n in &c.notes {
        row = row.flag(n.to_string());
    }
    if !c.converged() && !c.value.is_infinite() {
        row = row.flag(UNCONVERGED);
    }
    row
}

pub fn run(job: &JobSpec) -> Result<Outcome, CliError> {
    let acc = job.accuracy();
    let rows = match job.command {
        Command::Coeff => coeff(job)?,
        Command::Asa => asa(job, &acc)?,
        Command::Steiner => steiner(job, &acc)?,
        Command::Series => series(job, &acc)?,
        Command::Verify => verify(job, &acc)?,
        Command::Sweep => sweep(job, &acc)?,
    };
    Ok(Outcome { rows })
}

fn coeff(job: &JobSpec) -> Result<Vec<Row>, CliError> {
    let n = job.n.ok_or_else(|| CliError::Usage("missing --n".into()))?;
    let pa = p_of(job)?;
    let p = pa.exact().ok_or_else(|| CliError::Usage("coeff needs a finite rational p".into()))?;
    let k = job.k.ok_or_else(|| CliError::Usage("missing --k".into()))?;
    let mut rows = Vec::new();
    for k in k.iter() {
        let base = RowInputs {
            n: Some(n),
            p: Some(pa.to_string()),
            ..RowInputs::default()
        };
        rows.push(match job.coeff {
            CoeffKind::C => {
                let c = c_npk_closed(n as u32, p, k)?;
                let predicted = sign_prediction(n as u32, p, k)?;
                let mut row = Row::new(format!("C[n={n},p={pa},k={k}]"), RowInputs { k: Some(k), ..base }, Num::Exact(c.clone()))
                    .flag(format!("sign={}", SignClass::of(&c)));
                if predicted != SignClass::of(&c) {
                    row = row.flag(format!("predicted={predicted}"));
                }
                row
            }
            CoeffKind::F => {
                let f = f_m(n as u32, p, k)?;
                Row::new(format!("F[n={n},p={pa},m={k}]"), RowInputs { m: Some(k), ..base }, Num::Exact(f.clone()))
                    .flag(format!("sign={}", SignClass::of(&f)))
            }
        });
    }
    Ok(rows)
}

fn use_sphere(job: &JobSpec, body: &Body) -> Result<bool, CliError> {
    Ok(match job.form {
        Form::Auto => body.has_sphere_form(),
        Form::Boundary => false,
        Form::Sphere => {
            if !body.has_sphere_form() {
                return Err(CliError::Usage(format!("{} has no sphere parametrization", body.label())));
            }
            true
        }
    })
}

fn asa(job: &JobSpec, acc: &Accuracy) -> Result<Vec<Row>, CliError> {
    let body = body_of(job)?;
    let pa = p_of(job)?;
    let c = match job.s {
        Some(s) => {
            let PValue::Finite(p) = pa.value() else {
                return Err(CliError::Usage("mixed affine surface areas need a finite p".into()));
            };
            mixed_asa(&body, p, s, acc)?
        }
        None if use_sphere(job, &body)? => asp_sphere(&body, pa.value(), acc)?,
        None => asp_boundary(&body, pa.value(), acc)?,
    };
    Ok(vec![coeff_row(&c, RowInputs { s: job.s, ..inputs(&body, pa) })])
}

fn steiner(job: &JobSpec, acc: &Accuracy) -> Result<Vec<Row>, CliError> {
    let body = body_of(job)?;
    let pa = p_of(job)?;
    let p = pa.value();
    let sphere = use_sphere(job, &body)?;
    let k_range = job.k.expect("validated");
    let mut rows = Vec::new();
    for k in k_range.iter() {
        let m_hi = job.m.map_or(k, |m| m.hi.min(k));
        let m_lo = job.m.map_or(0, |m| m.lo);
        let table = if sphere { z_table(&body, p, m_hi, k, acc)? } else { w_table(&body, p, m_hi, k, acc)? };
        for (m, c) in table.iter().enumerate().skip(m_lo as usize) {
            rows.push(coeff_row(c, RowInputs { m: Some(m as u32), k: Some(k), ..inputs(&body, pa) }));
        }
        let v = if sphere { u_pk(&body, p, k, acc)? } else { v_pk(&body, p, k, acc)? };
        rows.push(coeff_row(&v, RowInputs { k: Some(k), ..inputs(&body, pa) }));
    }
    Ok(rows)
}

fn series(job: &JobSpec, acc: &Accuracy) -> Result<Vec<Row>, CliError> {
    let body = body_of(job)?;
    let pa = p_of(job)?;
    let p = pa.value();
    let s = series_asp(
        &body,
        p,
        job.k_max.unwrap_or(DEFAULT_K_MAX),
        job.series_tol.unwrap_or(DEFAULT_SERIES_TOL),
        acc,
    )?;
    let truncation = match s.truncation {
        Truncation::Converged => "truncation=converged",
        Truncation::FiniteSum => "truncation=finite-sum",
        Truncation::MaxKReached => "truncation=max-k",
    };
    let mut rows = Vec::new();
    for (k, (v, e)) in s.coefficients.iter().zip(&s.errors).enumerate() {
        let mut row = Row::new(
            format!("V[n={},p={pa},k={k}]({})", body.dim(), body.label()),
            RowInputs { k: Some(k as u32), ..inputs(&body, pa) },
            Num::Float(*v),
        )
        .error(*e);
        for n in &s.notes {
            row = row.flag(n.to_string());
        }
        rows.push(row);
    }
    for &t in &job.t {
        let base = RowInputs { t: Some(t), ..inputs(&body, pa) };
        for (k, ps) in s.partial_sums(t).iter().enumerate() {
            rows.push(Row::new("partial-sum", RowInputs { k: Some(k as u32), ..base.clone() }, Num::Float(*ps)));
        }
        let (sum, err) = s.evaluate(t);
        let mut srow = Row::new("series", base.clone(), Num::Float(sum)).error(err).flag(truncation);
        if s.truncation == Truncation::MaxKReached {
            srow = srow.flag(UNCONVERGED);
        }
        if t > s.t_validity {
            srow = srow.flag(format!("beyond-t-validity={}", format_f64(s.t_validity)));
        }
        rows.push(srow);
        let d = direct_asp_parallel(&body, p, t, acc)?;
        rows.push(coeff_row(&d, base.clone()));
        rows.push(
            Row::new("residual", base, Num::Float((sum - d.value).abs() / d.value.abs()))
                .error((err + d.error_estimate) / d.value.abs())
                .flag("relative"),
        );
    }
    Ok(rows)
}

fn tolerance_text(t: &Tolerance) -> String {
    match t {
        Tolerance::Exact => "exact".into(),
        Tolerance::Absolute(a) => format!("absolute {}", format_f64(*a)),
        Tolerance::Relative(a) => format!("relative {}", format_f64(*a)),
        Tolerance::Scaled { tol, scale } => format!("{} times {}", format_f64(*tol), format_f64(*scale)),
    }
}

fn num(v: &Value) -> Num {
    match v {
        Value::Float(x) => Num::Float(*x),
        Value::Exact(r) => Num::Exact(r.clone()),
        Value::Sign(c) => Num::Text(c.to_string()),
    }
}

fn verify(job: &JobSpec, acc: &Accuracy) -> Result<Vec<Row>, CliError> {
    let suite = job.suite.expect("validated");
    let reports = run_suite(suite, acc)?;
    Ok(reports
        .iter()
        .map(|r| {
            let i = &r.inputs;
            let inputs = RowInputs {
                n: i.n,
                p: i.p.clone(),
                m: i.m,
                k: i.k,
                t: i.t,
                body: i.body.clone(),
                ..RowInputs::default()
            };
            let mut row = Row::new(r.id.clone(), inputs, num(&r.computed)).error(r.error()).flag(match r.status {
                Status::Pass => "pass",
                Status::Fail => FAILED,
                Status::Recorded => "recorded",
            });
            row.check = Some(CheckInfo {
                expected: num(&r.expected),
                source: r.source.to_string(),
                tolerance: tolerance_text(&r.tolerance),
                detail: r.detail.clone(),
            });
            row
        })
        .collect())
}

fn sweep(job: &JobSpec, acc: &Accuracy) -> Result<Vec<Row>, CliError> {
    let pa = p_of(job)?;
    let p = pa.value();
    let mut rows = Vec::new();
    match job.kind.expect("validated") {
        SweepKind::RoundedCube => {
            let n = job.n.expect("validated");
            let cube = make_box(n, 1.0)?;
            for &l in &job.l {
                let body = make_rounded_cube(n, l)?;
                let base = RowInputs { l: Some(l), ..inputs(&body, pa) };
                rows.push(
                    Row::new("hausdorff-to-cube", base.clone(), Num::Float(hausdorff_distance(&body, &cube)?)),
                );
                for k in job.k.expect("validated").iter() {
                    let v = v_pk(&body, p, k, acc)?;
                    rows.push(coeff_row(&v, RowInputs { k: Some(k), ..base.clone() }));
                }
            }
        }
        SweepKind::LrBall => {
            let n = job.n.expect("validated");
            let r = job.r.expect("validated");
            let body = make_lr_ball(n, r)?;
            let ex = Exponents::new(n, p)?;
            let regions = body.regions();
            let f = |jet: &lpsteiner::bodies::BoundaryJet, out: &mut [f64]| {
                out[0] = flat_power(jet.gauss_curvature(), ex.q) * jet.support_dot.powf(ex.gamma);
                Ok(())
            };
            for &level in &job.levels {
                let v = boundary_at_level(&regions, 1, level, &f)?[0];
                rows.push(
                    Row::new(
                        format!("as[n={n},p={pa},level={level}]({})", body.label()),
                        RowInputs { r: Some(r), level: Some(level), ..inputs(&body, pa) },
                        Num::Float(v),
                    )
                    .flag("fixed-level"),
                );
            }
        }
        SweepKind::Parallel => {
            let body = body_of(job)?;
            for &t in &job.t {
                let d = direct_asp_parallel(&body, p, t, acc)?;
                rows.push(coeff_row(&d, RowInputs { t: Some(t), ..inputs(&body, pa) }));
            }
        }
    }
    Ok(rows)
}
