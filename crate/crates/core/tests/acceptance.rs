//! The twelve acceptance criteria, one line each.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use lpsteiner::bodies::make_ellipsoid;
use lpsteiner::combinatorics::integer;
use lpsteiner::quadrature::Accuracy;
use lpsteiner::verify::{self, tolerances, CheckReport, Status};

struct Outcome {
    passed: bool,
    line: String,
}

fn summarize(id: u32, name: &str, reports: &[CheckReport], elapsed: Duration, limit: Option<Duration>) -> Outcome {
    let (pass, fail, recorded) = verify::tally(reports);
    let worst = reports
        .iter()
        .filter(|r| r.status != Status::Recorded)
        .map(|r| r.error())
        .fold(0.0f64, f64::max);
    let slow = limit.is_some_and(|l| elapsed > l);
    let passed = fail == 0 && !reports.is_empty() && !slow;
    let mut line = format!(
        "criterion {id:>2} {}: {name}: {pass} pass, {fail} fail, {recorded} recorded, max err {worst:.2e}, {:.2}s",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    if let Some(l) = limit {
        line.push_str(&format!(" (limit {}s)", l.as_secs()));
    }
    for r in reports.iter().filter(|r| r.failed()).take(5) {
        line.push_str(&format!("\n    {r}"));
    }
    Outcome { passed, line }
}

fn timed<F: FnOnce() -> Vec<CheckReport>>(f: F) -> (Vec<CheckReport>, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn main() {
    let acc = Accuracy::default();
    let grid = verify::default_p_grid();
    let ellipse = make_ellipsoid(&verify::ELLIPSE).unwrap();
    let ellipsoid = make_ellipsoid(&verify::ELLIPSOID).unwrap();
    let mut outcomes = Vec::new();

    let (r, dt) = timed(|| verify::check_combinatorial_identity(2..=6, &grid, 12).unwrap());
    outcomes.push(summarize(1, "combinatorial identity", &r, dt, Some(Duration::from_secs(5))));

    let (r, dt) = timed(|| {
        let mut v = verify::check_series_vs_direct(&ellipse, &verify::SERIES_P_GRID, &verify::SERIES_T_FRACTIONS, tolerances::SERIES_2D, &acc)
            .unwrap();
        v.extend(
            verify::check_series_vs_direct(&ellipsoid, &verify::SERIES_P_GRID, &verify::SERIES_T_FRACTIONS, tolerances::SERIES_3D, &acc)
                .unwrap(),
        );
        v
    });
    outcomes.push(summarize(2, "series vs parallel body", &r, dt, Some(Duration::from_secs(120))));

    let (r, dt) = timed(|| verify::check_finite_sum(&ellipse, 2, &acc).unwrap());
    outcomes.push(summarize(3, "finite sum at p = -1", &r, dt, None));

    let (r, dt) = timed(|| {
        let mut v = verify::check_classical_ball(2, &acc).unwrap();
        v.extend(verify::check_classical_ball(3, &acc).unwrap());
        v.extend(verify::check_classical_reduction(&ellipse, None, tolerances::CLASSICAL, &acc).unwrap());
        v
    });
    outcomes.push(summarize(4, "classical reduction", &r, dt, None));

    let (r, dt) = timed(|| {
        let mut v = verify::check_ball_closed_form(2, &[0.5, 1.0, 2.0], &grid, 8, &acc).unwrap();
        v.extend(verify::check_ball_closed_form(3, &[0.5, 1.0, 2.0], &grid, 8, &acc).unwrap());
        v
    });
    outcomes.push(summarize(5, "ball closed form", &r, dt, None));

    let (r, dt) = timed(|| {
        let mut v = verify::check_homogeneity_invariance(&ellipse, &[0.5, 1.0, 2.0], 3, 20, &acc).unwrap();
        v.extend(verify::check_homogeneity_invariance(&ellipsoid, &[0.5, 1.0, 2.0], 3, 20, &acc).unwrap());
        v
    });
    outcomes.push(summarize(6, "homogeneity and isometry", &r, dt, None));

    let (r, dt) = timed(|| verify::check_gauss_map(&ellipsoid, &[0.5, 1.0, 2.0], 3, 3, &acc).unwrap());
    outcomes.push(summarize(7, "gauss-map equivalence", &r, dt, None));

    let (r, dt) = timed(|| {
        let mk: Vec<(u32, u32)> = (0..3).flat_map(|m| (0..3).map(move |k| (m, k))).collect();
        verify::check_valuation(&verify::ELLIPSOID, 0, 0.2, &[1.0, 2.0], &mk, &acc).unwrap()
    });
    outcomes.push(summarize(8, "valuation", &r, dt, None));

    let (r, dt) = timed(|| {
        let ls = [2, 4, 8, 16];
        let mut v = verify::check_rounded_cube_coefficients(2, &ls, 5, tolerances::ROUNDED_CUBE_2D, &acc).unwrap();
        v.extend(verify::check_rounded_cube_coefficients(3, &ls, 5, tolerances::ROUNDED_CUBE_3D, &acc).unwrap());
        v.extend(verify::check_rounded_cube_distance(2, &ls).unwrap());
        v.extend(verify::check_rounded_cube_distance(3, &ls).unwrap());
        v.extend(verify::check_rounded_cube_divergence(2, integer(-3), &[2, 4, 8, 16, 32, 64], &[1, 2, 3], &acc).unwrap());
        v
    });
    outcomes.push(summarize(9, "rounded-cube sequence", &r, dt, None));

    let (r, dt) = timed(|| verify::check_sign_predictions(2..=6, &grid, 12).unwrap());
    outcomes.push(summarize(10, "sign predictions", &r, dt, None));

    let (r, dt) = timed(|| verify::check_f_m_closed_forms(2..=6, &grid).unwrap());
    outcomes.push(summarize(11, "F_m closed forms", &r, dt, None));

    let (r, dt) = timed(|| {
        let body = make_ellipsoid(&[1.0, 2.0]).unwrap();
        let polar = make_ellipsoid(&[1.0, 0.5]).unwrap();
        verify::check_dual_reduction(&body, Some(&polar), 4, &acc).unwrap()
    });
    let mut dual = summarize(12, "dual normalization (recorded)", &r, dt, None);
    for rep in r.iter().filter(|r| r.status == Status::Recorded) {
        dual.line.push_str(&format!("\n    {rep}"));
    }
    outcomes.push(dual);

    println!();
    for o in &outcomes {
        println!("{}", o.line);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} of {} criteria pass", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
