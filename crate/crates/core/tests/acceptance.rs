//! One test per acceptance criterion, each printing its PASS/FAIL line.
//!
//! Tolerances and runtime budgets are pinned in `frozen_spectra::verify::acceptance`.

use std::io::Write;
use std::sync::Mutex;

use frozen_spectra::verify::{acceptance, Check};

// criteria carry wall-clock budgets, so they never share the machine with each other
static SERIAL: Mutex<()> = Mutex::new(());

fn gate(run: fn() -> Check) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let check = run();
    // straight to the handle, so the line survives output capture
    let _ = writeln!(std::io::stderr(), "{}", check.line());
    assert!(check.passed, "{}", check.line());
}

#[test]
fn criterion_1_dual_path_identity() {
    gate(acceptance::criterion_1);
}

#[test]
fn criterion_2_unperturbed_spectra() {
    gate(acceptance::criterion_2);
}

#[test]
fn criterion_3_box_bump_pairs() {
    gate(acceptance::criterion_3);
}

#[test]
fn criterion_4_bumps_kill_a_terms() {
    gate(acceptance::criterion_4);
}

#[test]
fn criterion_5_kappa_flattening_and_galerkin() {
    gate(acceptance::criterion_5);
}

#[test]
fn criterion_6_regularized_traces() {
    gate(acceptance::criterion_6);
}

#[test]
fn criterion_7_inverse_round_trip() {
    gate(acceptance::criterion_7);
}

#[test]
fn criterion_8_certification_soundness() {
    gate(acceptance::criterion_8);
}

#[test]
fn criterion_9_moments_against_quadrature() {
    gate(acceptance::criterion_9);
}
