use ybcomm::commutation::{rank_one_ik_form, verify_coefficient_routes, verify_grid_coefficients, verify_multiple_commutation, CommutationInstance};
use ybcomm::report::Status;
use ybcomm::sample::SamplePlan;
use ybcomm::RFlavor;

fn pass(flavor: RFlavor, sizes: &[usize], extra: usize) {
    let n = sizes.iter().sum::<usize>() + extra;
    let inst = CommutationInstance::new(flavor, sizes, n).unwrap();
    let r = verify_multiple_commutation(&inst, &SamplePlan::new(11, 2));
    assert_eq!(r.status, Status::Pass, "{r:?}");
}

#[test]
fn rank_two_relations() {
    for flavor in [RFlavor::TrigA, RFlavor::Rational] {
        pass(flavor, &[1, 1], 0);
        pass(flavor, &[2, 1], 0);
        pass(flavor, &[1, 2], 1);
    }
}

#[test]
fn rank_three_relations() {
    for flavor in [RFlavor::TrigA, RFlavor::Rational] {
        pass(flavor, &[1, 1, 1], 0);
    }
}

#[test]
fn grid_coefficients_and_routes() {
    let inst = CommutationInstance::new(RFlavor::TrigA, &[1, 1, 1], 3).unwrap();
    assert!(verify_grid_coefficients(&inst, &SamplePlan::new(3, 1)).passed());
    for flavor in [RFlavor::TrigA, RFlavor::Rational] {
        let inst = CommutationInstance::new(flavor, &[2, 1, 1], 4).unwrap();
        assert!(verify_coefficient_routes(&inst, &SamplePlan::new(5, 3)).passed());
    }
}

#[test]
fn izergin_korepin_form() {
    assert!(rank_one_ik_form(RFlavor::TrigA, [2, 2], 4, &SamplePlan::new(1, 1)).passed());
    assert!(rank_one_ik_form(RFlavor::Rational, [2, 1], 3, &SamplePlan::new(1, 2)).passed());
}
