//! Command-line front end of `lpsteiner`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage error,
//! 3 a quadrature or series did not converge.
//!
//! The worker thread count is read from `LPSTEINER_THREADS`; results do not
//! depend on it.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::{Args, Parser, Subcommand};

pub mod job;
pub mod output;
pub mod run;

use job::{CoeffKind, Command, Form, Format, IndexRange, JobSpec, PArg, SweepKind};

pub const THREADS_ENV: &str = "LPSTEINER_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] lpsteiner::Error),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Lib(_) | CliError::Io(_) => 2,
        }
    }
}

const BODY_HELP: &str = "Body spec `name[:dim][:key=value,...]`:
  ball:<n>[:r=<radius>]
  ellipsoid:<a1>,...,<an>
  box:<n>[:h=<half width>]
  rounded-cube:<n>:l=<l>                (1 - 1/l) B_inf + (1/l) B_2
  rounded-box:<c1>,...,<cn>:radius=<r>
  lr-ball:<n>:r=<r>                     unit ball of the l_r norm, r > 2
  capped-ellipsoid:<a..>:axis=<i>,cut=<c>,side=below|above
  slab-ellipsoid:<a..>:axis=<i>,lo=<lo>,hi=<hi>";

#[derive(Debug, Parser)]
#[command(name = "lpsteiner", version, about = "Lp Steiner coefficients of convex bodies", after_help = BODY_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, default_value = "json", global = true)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    pub output: Option<String>,
    /// Quadrature tolerance (relative difference of successive levels).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Highest quadrature level.
    #[arg(long, global = true)]
    pub max_level: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Exact coefficients C(n,p,k) or composition sums F_m(n,p).
    Coeff {
        #[arg(long)]
        n: usize,
        /// Rational `a/b` or decimal.
        #[arg(long, allow_hyphen_values = true)]
        p: PArg,
        /// Index or inclusive range `a..b`.
        #[arg(long)]
        k: IndexRange,
        #[arg(long, default_value = "c")]
        kind: CoeffKind,
        #[command(flatten)]
        common: Common,
    },
    /// L_p affine surface area, or the mixed one with --s.
    Asa {
        #[arg(long)]
        body: String,
        /// Rational, decimal, `inf` or `-inf`.
        #[arg(long, allow_hyphen_values = true)]
        p: PArg,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
        #[arg(long, default_value = "auto")]
        form: Form,
        #[command(flatten)]
        common: Common,
    },
    /// Tables of W (or Z) coefficients and V (or U) per k.
    Steiner {
        #[arg(long)]
        body: String,
        #[arg(long, allow_hyphen_values = true)]
        p: PArg,
        #[arg(long)]
        k: IndexRange,
        #[arg(long)]
        m: Option<IndexRange>,
        #[arg(long, default_value = "auto")]
        form: Form,
        #[command(flatten)]
        common: Common,
    },
    /// Series coefficients, partial sums, direct values and residuals.
    Series {
        #[arg(long)]
        body: String,
        #[arg(long, allow_hyphen_values = true)]
        p: PArg,
        /// Comma separated radii of the parallel bodies.
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long)]
        k_max: Option<u32>,
        #[arg(long)]
        series_tol: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Verification suites; `all` runs every suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Parameter sweeps: rounded-cube, lr-ball or parallel.
    Sweep {
        kind: SweepKind,
        #[arg(long, allow_hyphen_values = true)]
        p: PArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        body: Option<String>,
        #[arg(long, value_delimiter = ',')]
        l: Vec<u32>,
        #[arg(long)]
        k: Option<IndexRange>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        levels: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
}

fn apply(job: &mut JobSpec, c: Common) {
    job.format = c.format;
    job.output = c.output;
    job.tol = c.tol;
    job.max_level = c.max_level;
}

impl Sub {
    pub fn into_job(self) -> Result<JobSpec, CliError> {
        let job = match self {
            Sub::Coeff { n, p, k, kind, common } => {
                let mut j = JobSpec::new(Command::Coeff);
                (j.n, j.p, j.k, j.coeff) = (Some(n), Some(p), Some(k), kind);
                apply(&mut j, common);
                j
            }
            Sub::Asa { body, p, s, form, common } => {
                let mut j = JobSpec::new(Command::Asa);
                (j.body, j.p, j.s, j.form) = (Some(body), Some(p), s, form);
                apply(&mut j, common);
                j
            }
            Sub::Steiner { body, p, k, m, form, common } => {
                let mut j = JobSpec::new(Command::Steiner);
                (j.body, j.p, j.k, j.m, j.form) = (Some(body), Some(p), Some(k), m, form);
                apply(&mut j, common);
                j
            }
            Sub::Series { body, p, t, k_max, series_tol, common } => {
                let mut j = JobSpec::new(Command::Series);
                (j.body, j.p, j.t, j.k_max, j.series_tol) = (Some(body), Some(p), t, k_max, series_tol);
                apply(&mut j, common);
                j
            }
            Sub::Verify { suite, common } => {
                let mut j = JobSpec::new(Command::Verify);
                j.suite = Some(suite.parse().map_err(|e: lpsteiner::Error| CliError::Usage(e.to_string()))?);
                apply(&mut j, common);
                j
            }
            Sub::Sweep { kind, p, n, body, l, k, r, levels, t, common } => {
                let mut j = JobSpec::new(Command::Sweep);
                (j.kind, j.p, j.n, j.body, j.l, j.k, j.r, j.levels, j.t) =
                    (Some(kind), Some(p), n, body, l, k, r, levels, t);
                apply(&mut j, common);
                j
            }
        };
        job.validate()
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs a validated job and writes its output; returns the exit code.
pub fn execute(job: &JobSpec) -> Result<i32, CliError> {
    let outcome = run::run(job)?;
    let w: Box<dyn Write> = match &job.output {
        Some(path) => Box::new(File::create(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(w);
    match job.format {
        Format::Json => output::write_json(job, &outcome.rows, &mut w)?,
        Format::Csv => output::write_csv(&outcome.rows, &mut w)?,
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    if job.command == Command::Verify {
        let fail = outcome.failed_checks();
        let total = outcome.rows.len();
        let recorded = outcome.rows.iter().filter(|r| r.has_flag("recorded")).count();
        eprintln!("{} checks: {} pass, {fail} fail, {recorded} recorded", total, total - fail - recorded);
        for r in outcome.rows.iter().filter(|r| r.has_flag(run::FAILED)) {
            eprintln!("  fail: {} {:?}", r.id, r.inputs);
        }
    }
    if outcome.unconverged() > 0 {
        eprintln!("{} results did not converge", outcome.unconverged());
    }
    Ok(outcome.exit_code())
}

/// Parses arguments, runs and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|_| cli.command.into_job()).and_then(|job| execute(&job));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("lpsteiner: {e}");
            e.exit_code()
        }
    }
}
