use telewit::suite::{self, CheckOutcome};
use telewit::witness::tw_isotropic_expectation;

const SEED: u64 = 20_240_601;

fn report(index: usize, o: CheckOutcome) {
    println!(
        "[criterion {index:>2}] {} {}: {}",
        if o.passed { "PASS" } else { "FAIL" },
        o.name,
        o.detail
    );
    assert!(o.passed, "{}: {}", o.name, o.detail);
}

#[test]
fn criterion_01_isotropic_closed_form() {
    report(1, suite::check_eq18_closed_form(|d, f0, b| tw_isotropic_expectation(d, f0, b).unwrap()));
}

#[test]
fn criterion_02_witness_equivalence_at_one_over_d() {
    report(2, suite::check_witness_equivalence());
}

#[test]
fn criterion_03_witness_and_ppt_thresholds_coincide() {
    report(3, suite::check_threshold_coincidence());
}

#[test]
fn criterion_04_schmidt_witness_proportionality() {
    report(4, suite::check_schmidt_proportionality());
}

#[test]
fn criterion_05_schmidt_number_ranges() {
    report(5, suite::check_schmidt_ranges());
}

#[test]
fn criterion_06_fef_matches_oracles() {
    report(6, suite::check_fef_oracles(SEED));
}

#[test]
fn criterion_07_witness_conditions() {
    report(7, suite::check_witness_conditions(SEED));
}

#[test]
fn criterion_08_bound_entangled_fixture() {
    report(8, suite::check_bound_entangled_consistency(SEED));
}

#[test]
fn criterion_09_local_decomposition() {
    report(9, suite::check_decomposition());
}

#[test]
fn criterion_10_scalar_witness_containment() {
    report(10, suite::check_scalar_containment());
}
