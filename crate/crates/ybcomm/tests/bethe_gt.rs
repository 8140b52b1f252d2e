use ybcomm::bethe::{verify_b_equals_bhat, verify_psi_closed_forms, GtPartition};
use ybcomm::gt::{golden_example, verify_qdet_diagonalization, verify_relation_gz, verify_singular_ladder};
use ybcomm::report::Status;
use ybcomm::sample::SamplePlan;
use ybcomm::scalar::q_int;
use ybcomm::RFlavor;

#[test]
fn bethe_vectors_agree_at_rank_three() {
    let plan = SamplePlan::new(3, 2);
    assert_eq!(verify_b_equals_bhat(3, 2, 1, &plan).status, Status::Pass);
    assert_eq!(verify_psi_closed_forms(3, 2, &plan).status, Status::Pass);
}

#[test]
fn gt_relation_and_eigenvalues() {
    let plan = SamplePlan::new(5, 2);
    for flavor in [RFlavor::TrigA, RFlavor::Rational] {
        assert_eq!(verify_relation_gz(flavor, 3, 3, 2, &plan).status, Status::Pass);
        assert_eq!(verify_qdet_diagonalization(flavor, 3, 2, &plan).status, Status::Pass);
        assert_eq!(verify_singular_ladder(flavor, 3, 2, &plan).status, Status::Pass);
    }
}

#[test]
fn relation_is_skipped_where_it_does_not_apply() {
    let r = verify_relation_gz(RFlavor::TrigB, 3, 3, 2, &SamplePlan::new(0, 1));
    assert_eq!(r.status, Status::Skipped);
}

#[test]
fn golden_values_at_a_fixed_point() {
    let g = golden_example(&q_int(3), &[q_int(2), q_int(-5), q_int(7)]).unwrap();
    assert!(g.all_hold(), "{g:?}");
}

#[test]
fn partition_labels() {
    let p = GtPartition::new(3, vec![vec![1], vec![2, 3], vec![]]).unwrap();
    assert_eq!(p.label(), "{1}{2,3}{}");
    assert_eq!(p.sizes(), vec![1, 2, 0]);
    assert!(GtPartition::new(3, vec![vec![1], vec![1, 3]]).is_err());
}
