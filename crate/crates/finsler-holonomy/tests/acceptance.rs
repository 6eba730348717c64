//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see the measured numbers).
//!
//! The same checks back the `verify` CLI command; tolerances live in
//! `finsler_holonomy::suite` next to the criterion implementations.

use finsler_holonomy::suite::{run_criterion, SuiteConfig};

fn check(id: usize) {
    let outcome = run_criterion(id, &SuiteConfig::default());
    println!("{}", outcome.line());
    assert!(outcome.pass, "{}", outcome.line());
}

#[test]
fn criterion_01_funk_constant_curvature() {
    check(1);
}

#[test]
fn criterion_02_projective_flatness() {
    check(2);
}

#[test]
fn criterion_03_norm_preservation() {
    check(3);
}

#[test]
fn criterion_04_generator_closed_forms() {
    check(4);
}

#[test]
fn criterion_05_generator_spanning() {
    check(5);
}

#[test]
fn criterion_06_bracket_closure_dimension() {
    check(6);
}

#[test]
fn criterion_07_small_loop_limit() {
    check(7);
}

#[test]
fn criterion_08_flow_correctness() {
    check(8);
}

#[test]
fn criterion_09_algebra_identities() {
    check(9);
}

#[test]
fn criterion_10_bryant_shen_hypotheses() {
    check(10);
}

#[test]
fn criterion_11_dual_path_spray() {
    check(11);
}
