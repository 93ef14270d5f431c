mod common;

fn check(suite: fn() -> Result<u32, String>) {
    let cases = suite().unwrap_or_else(|e| panic!("{e}"));
    assert!(cases >= 200);
}

#[test]
fn ring_axioms() {
    check(common::ring_axioms);
}

#[test]
fn exp_log_round_trip() {
    check(common::exp_log_round_trip);
}

#[test]
fn derivative_commutation() {
    check(common::derivative_commutation);
}

#[test]
fn mult_seq_chern_inversion() {
    check(common::mult_seq_inversion);
}

#[test]
fn intersection_symmetry() {
    check(common::intersection_symmetry);
}
