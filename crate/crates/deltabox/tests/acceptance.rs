//! Acceptance gate: every quantitative claim at its pinned tolerance, one
//! summary line per criterion. A failed criterion prints the measured
//! values it missed by; nothing here may be loosened to force a pass.

use deltabox::validate::{self, CriterionReport};

fn run(result: deltabox::Result<CriterionReport>) {
    let report = result.expect("criterion crashed before producing a report");
    println!("{}", report.summary_line());
    for line in &report.lines {
        println!("{line}");
    }
    assert!(
        report.passed,
        "{}\n{}",
        report.summary_line(),
        report.lines.join("\n")
    );
}

#[test]
fn criterion_1_bethe_reference_energies() {
    run(validate::criterion_1());
}

#[test]
fn criterion_2_diagonalization_against_exact_energies() {
    run(validate::criterion_2());
}

#[test]
fn criterion_3_dark_catalog() {
    run(validate::criterion_3());
}

#[test]
fn criterion_4_dark_flatness() {
    run(validate::criterion_4());
}

#[test]
fn criterion_5_matrix_element_oracle() {
    run(validate::criterion_5());
}

#[test]
fn criterion_6_strong_coupling_benchmark() {
    run(validate::criterion_6());
}

#[test]
fn criterion_7_limit_identities() {
    run(validate::criterion_7());
}

#[test]
fn criterion_8_localization_weights() {
    run(validate::criterion_8());
}

#[test]
fn criterion_9_eigensolver_contract() {
    run(validate::criterion_9());
}
