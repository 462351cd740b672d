use std::process::Command as Process;

use lpsteiner_cli::job::{JobSpec, PArg};
use lpsteiner_cli::output::format_f64;
use lpsteiner_cli::{main_with, run};
use proptest::prelude::*;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_lpsteiner");

fn run_bin(args: &[&str], threads: Option<&str>) -> (i32, String) {
    let mut cmd = Process::new(BIN);
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("LPSTEINER_THREADS", t);
    }
    let out = cmd.output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out) = run_bin(args, None);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn canonical_jobs_round_trip() {
    for s in [
        "coeff n=3 p=1 k=0..8 format=csv",
        "coeff n=4 p=-7/2 k=3 coeff=f",
        "asa body=ellipsoid:1,1.2,0.8 p=inf",
        "asa body=ball:2:r=1.5 p=1/2 s=1 form=boundary",
        "steiner body=rounded-cube:3:l=5 p=2 m=0..1 k=0..3 tol=1e-10 max-level=8",
        "series body=ellipsoid:1,1.2 p=2 t=0.1,0.2 k-max=100 series-tol=1e-12",
        "verify suite=all",
        "sweep kind=rounded-cube n=2 p=-3 k=1..3 l=2,4,8",
        "sweep kind=lr-ball n=2 p=-1 r=4 levels=4,6,8 format=csv output=out.csv",
        "sweep kind=parallel body=ellipsoid:1,2 p=1 t=0.5",
    ] {
        let job: JobSpec = s.parse().unwrap();
        assert_eq!(job.canonical(), s);
        assert_eq!(job.canonical().parse::<JobSpec>().unwrap(), job);
    }
}

#[test]
fn jobs_normalize_to_canonical_form() {
    let job: JobSpec = "asa p=0.5 body=ellipsoid:1.0,1.20".parse().unwrap();
    assert_eq!(job.canonical(), "asa body=ellipsoid:1,1.2 p=1/2");
    let job: JobSpec = "coeff n=2 p=4/2 k=0..=3".parse().unwrap();
    assert_eq!(job.canonical(), "coeff n=2 p=2 k=0..3");
}

#[test]
fn pole_is_rejected_at_parse_time() {
    assert!("coeff n=3 p=-3 k=0".parse::<JobSpec>().is_err());
    assert!("asa body=ellipsoid:1,2 p=-2".parse::<JobSpec>().is_err());
    assert!("asa body=ellipsoid:1,2 p=-6/3".parse::<JobSpec>().is_err());
    assert!("asa body=ellipsoid:1,2,3 p=-2".parse::<JobSpec>().is_ok());
    assert_eq!(main_with(["lpsteiner", "coeff", "--n", "2", "--p", "-2", "--k", "0"]), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(main_with(["lpsteiner", "verify", "--suite", "nope"]), 2);
    assert_eq!(main_with(["lpsteiner", "asa", "--body", "teapot:3", "--p", "1"]), 2);
    assert_eq!(main_with(["lpsteiner", "series", "--body", "ball:2", "--p", "1"]), 2);
    assert!("steiner body=box:2 p=1 k=0 form=sphere".parse::<JobSpec>().is_ok());
    let job: JobSpec = "steiner body=box:2 p=1 k=0 form=sphere".parse().unwrap();
    assert!(run::run(&job).is_err());
}

#[test]
fn p_accepts_rationals_decimals_and_infinities() {
    assert_eq!("0.25".parse::<PArg>().unwrap(), "1/4".parse::<PArg>().unwrap());
    assert_eq!("inf".parse::<PArg>().unwrap(), PArg::PosInf);
    assert_eq!("-inf".parse::<PArg>().unwrap(), PArg::NegInf);
    assert!("1/0".parse::<PArg>().is_err());
}

#[test]
fn coeff_csv_is_exact() {
    let (code, out) = run_bin(&["coeff", "--n", "3", "--p", "1", "--k", "0..4", "--format", "csv"], None);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "id,n,p,m,k,s,t,l,r,level,body,value,error_estimate,flags");
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    // binom(3/2, k)
    let values: Vec<&str> = records.iter().map(|r| &r[11]).collect();
    assert_eq!(values, ["1/1", "3/2", "3/8", "-1/16", "3/128"]);
}

#[test]
fn series_json_schema() {
    let v = json(&["series", "--body", "ellipsoid:1,1.2", "--p", "2", "--t", "0.1,0.2"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["job"]["canonical"], "series body=ellipsoid:1,1.2 p=2 t=0.1,0.2");
    let results = v["results"].as_array().unwrap();
    for r in results {
        for key in ["id", "inputs", "value", "error_estimate", "flags"] {
            assert!(r.get(key).is_some(), "{key} missing in {r}");
        }
    }
    let residuals: Vec<f64> = results
        .iter()
        .filter(|r| r["id"] == "residual")
        .map(|r| r["value"].as_f64().unwrap())
        .collect();
    assert_eq!(residuals.len(), 2);
    assert!(residuals.iter().all(|r| *r < 1e-6));
    assert!(results.iter().any(|r| r["id"] == "partial-sum"));
    assert_eq!(results.iter().filter(|r| r["id"] == "series").count(), 2);
}

#[test]
fn floats_carry_17_significant_digits() {
    assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
    assert_eq!(format_f64(f64::INFINITY), "inf");
    let (_, out) = run_bin(&["asa", "--body", "ellipsoid:1,2", "--p", "inf"], None);
    let line = out.lines().find(|l| l.trim_start().starts_with("\"value\"")).unwrap();
    let digits = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = digits.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
    // 2 pi / (a b)
    assert!((digits.parse::<f64>().unwrap() - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str| {
        vec![
            "steiner".to_string(),
            "--body".into(),
            "ellipsoid:1,1.2,0.8".into(),
            "--p".into(),
            "1/2".into(),
            "--k".into(),
            "0..2".into(),
            "--format".into(),
            "csv".into(),
            "--output".into(),
            dir.path().join(name).to_string_lossy().into_owned(),
        ]
    };
    let mut files = Vec::new();
    for (name, threads) in [("a.csv", "1"), ("b.csv", "1"), ("c.csv", "3")] {
        let a = args(name);
        let refs: Vec<&str> = a.iter().map(|s| s.as_str()).collect();
        let (code, _) = run_bin(&refs, Some(threads));
        assert_eq!(code, 0);
        files.push(std::fs::read(dir.path().join(name)).unwrap());
    }
    assert!(!files[0].is_empty());
    assert_eq!(files[0], files[1]);
    assert_eq!(files[0], files[2]);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let (code, _) = run_bin(&["coeff", "--n", "2", "--p", "1", "--k", "0"], Some("many"));
    assert_eq!(code, 2);
}

#[test]
fn truncated_series_exits_3() {
    let (code, out) = run_bin(&["series", "--body", "ellipsoid:1,1.2", "--p", "1/2", "--t", "0.3", "--k-max", "3"], None);
    assert_eq!(code, 3);
    assert!(out.contains("truncation=max-k"));
}

#[test]
fn verify_reports_and_exits_0() {
    let v = json(&["verify", "--suite", "combinatorics"]);
    let results = v["results"].as_array().unwrap();
    assert!(!results.is_empty());
    assert!(results.iter().all(|r| r["flags"][0] == "pass"));
    assert!(results[0]["check"]["expected"].is_string());
    let v = json(&["verify", "--suite", "dual"]);
    assert!(v["results"].as_array().unwrap().iter().any(|r| r["flags"][0] == "recorded"));
}

#[test]
fn sweeps_produce_rows() {
    let v = json(&["sweep", "rounded-cube", "--n", "2", "--p", "-3", "--l", "2,4", "--k", "1..3"]);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 2 * 4);
    let d: Vec<f64> = rows
        .iter()
        .filter(|r| r["id"] == "hausdorff-to-cube")
        .map(|r| r["value"].as_f64().unwrap())
        .collect();
    assert!((d[0] - (2f64.sqrt() - 1.0) / 2.0).abs() < 1e-9);
    let v = json(&["sweep", "lr-ball", "--n", "2", "--p", "-1", "--r", "4", "--levels", "4,6,8"]);
    let vals: Vec<f64> = v["results"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[1] > w[0]));
}

proptest! {
    #[test]
    fn coeff_jobs_round_trip(n in 2usize..7, num in -20i64..20, den in 1i64..9, lo in 0u32..5, len in 0u32..6) {
        let s = format!("coeff n={n} p={num}/{den} k={lo}..{}", lo + len);
        match s.parse::<JobSpec>() {
            Ok(job) => {
                let again: JobSpec = job.canonical().parse().unwrap();
                prop_assert_eq!(&again, &job);
                prop_assert_eq!(again.canonical(), job.canonical());
            }
            Err(_) => prop_assert_eq!(num * 1, -(n as i64) * den),
        }
    }
}
