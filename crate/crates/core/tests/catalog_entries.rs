//! Every catalog entry must pass its own axiom checkers and match its
//! expected classification flags at load time.

use gengeo::catalog;
use gengeo::SamplePlan;

#[test]
fn contact_r3_loads() {
    let report = catalog::load("contact-r3", &SamplePlan::default()).unwrap();
    println!("{}", report.render_text(0));
    assert!(report.passed());
}

#[test]
fn sasakian_heisenberg_loads() {
    let report = catalog::load("sasakian-heisenberg", &SamplePlan::default()).unwrap();
    println!("{}", report.render_text(0));
    assert!(report.passed());
}

#[test]
fn rplus_line_loads() {
    let report = catalog::load("rplus-line", &SamplePlan::default()).unwrap();
    println!("{}", report.render_text(0));
    assert!(report.passed());
}

#[test]
fn cokahler_r3_loads() {
    let report = catalog::load("cokahler-r3", &SamplePlan::default()).unwrap();
    println!("{}", report.render_text(0));
    assert!(report.passed());
}

#[test]
fn kahler_r2_loads() {
    let report = catalog::load("kahler-r2", &SamplePlan::default()).unwrap();
    println!("{}", report.render_text(0));
    assert!(report.passed());
}

#[test]
fn sasakian_times_rplus_loads() {
    let report = catalog::load("sasakian-times-rplus", &SamplePlan::default()).unwrap();
    println!("{}", report.render_text(0));
    assert!(report.passed());
}

#[test]
fn sasakian_cone_loads() {
    let report = catalog::load("sasakian-cone", &SamplePlan::default()).unwrap();
    println!("{}", report.render_text(0));
    assert!(report.passed());
}

#[test]
fn unknown_entry_is_an_error() {
    assert!(matches!(
        catalog::load("no-such-entry", &SamplePlan::default()),
        Err(gengeo::Error::UnknownEntry(_))
    ));
}
