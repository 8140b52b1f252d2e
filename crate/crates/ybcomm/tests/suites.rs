use ybcomm::degeneration::{exponent_identity, ExponentData};
use ybcomm::report::Status;
use ybcomm::sample::SamplePlan;
use ybcomm::suites::{run_suite, Caps, Suite, SuiteConfig};
use ybcomm::{Error, RFlavor};

#[test]
fn worked_exponents() {
    let d = ExponentData::new(&[1, 1, 1]);
    assert_eq!((d.alpha, d.beta, d.gamma), (9, 6, 3));
    assert_eq!(exponent_identity(&[1, 1, 1], &SamplePlan::new(0, 1)).status, Status::Pass);
}

#[test]
fn unknown_names_are_configuration_errors() {
    assert!(matches!("everything".parse::<Suite>(), Err(Error::Config(_))));
    assert!(matches!("depth=3".parse::<Caps>(), Err(Error::Config(_))));
    assert!(matches!("nested=9".parse::<Caps>(), Err(Error::Config(_))));
    let cfg = SuiteConfig { jobs: Some(0), ..Default::default() };
    assert!(matches!(run_suite(Suite::Golden, &cfg), Err(Error::Config(_))));
}

#[test]
fn filtered_suite_is_reproducible() {
    let cfg = SuiteConfig { flavor: Some(RFlavor::Rational), rank: Some(2), seed: 4, ..Default::default() };
    let strip = |mut rs: Vec<ybcomm::report::VerificationReport>| {
        rs.iter_mut().for_each(|r| r.duration_ms = 0);
        format!("{rs:?}")
    };
    let a = run_suite(Suite::Rmatrix, &cfg).unwrap();
    assert!(!a.is_empty());
    assert!(a.iter().all(|r| r.passed() && r.flavor.as_deref().is_none_or(|f| f == "rational")));
    let b = run_suite(Suite::Rmatrix, &cfg).unwrap();
    assert_eq!(strip(a), strip(b));
}
