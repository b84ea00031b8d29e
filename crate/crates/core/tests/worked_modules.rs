//! Explicit calibrated modules compared entrywise with hand-computed matrices.

mod common;

use common::fixtures;

#[test]
fn c2p_two_dimensional_module_at_sign_character() {
    fixtures::c2p_two_dimensional_module_at_sign_character();
}

#[test]
fn c2p_sign_module_restricts_to_two_one_dimensionals() {
    fixtures::c2p_sign_module_restricts_to_two_one_dimensionals();
}

#[test]
fn c2q_three_dimensional_module() {
    fixtures::c2q_three_dimensional_module();
}

#[test]
fn c2p_three_dimensional_module_both_lifts() {
    fixtures::c2p_three_dimensional_module_both_lifts();
}

#[test]
fn g2_three_dimensional_module_generic() {
    fixtures::g2_three_dimensional_module_generic();
}

#[test]
fn g2_equal_parameter_specialization() {
    fixtures::g2_equal_parameter_specialization();
}

#[test]
fn g2_cubic_specialization_is_a_module() {
    fixtures::g2_cubic_specialization_is_a_module();
}

#[test]
fn g2_trace_continuous_into_equal_parameters() {
    fixtures::g2_trace_continuous_into_equal_parameters();
}
