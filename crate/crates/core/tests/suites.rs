use lpsteiner::quadrature::Accuracy;
use lpsteiner::verify::{run_suite, tally, Status, Suite};

fn run(suite: Suite) {
    let reports = run_suite(suite, &Accuracy::default()).unwrap();
    let (pass, fail, recorded) = tally(&reports);
    println!("{suite}: {pass} pass, {fail} fail, {recorded} recorded");
    for r in reports.iter().filter(|r| r.status != Status::Pass) {
        println!("  {r}");
    }
    assert!(!reports.is_empty());
    assert_eq!(fail, 0, "{suite} has failing checks");
}

#[test]
fn classical_suite() {
    run(Suite::Classical);
}

#[test]
fn series_suite() {
    run(Suite::Series);
}

#[test]
fn bridges_suite() {
    run(Suite::Bridges);
}

#[test]
fn divergence_suite() {
    run(Suite::Divergence);
}

#[test]
fn semicontinuity_suite() {
    run(Suite::Semicontinuity);
}

#[test]
fn suite_all_covers_each() {
    let all = run_suite(Suite::All, &Accuracy::default()).unwrap();
    let mut total = 0;
    for s in Suite::EACH {
        total += run_suite(s, &Accuracy::default()).unwrap().len();
    }
    assert_eq!(all.len(), total);
}
