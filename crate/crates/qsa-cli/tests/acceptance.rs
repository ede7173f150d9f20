//! Release acceptance suite: one test per criterion, each printing its
//! pass/fail lines. A global lock keeps criteria serial so the per-criterion
//! runtime budgets are measured without contention.

use std::sync::Mutex;

use qsa_cli::acceptance::{self, CriterionReport};

static GATE: Mutex<()> = Mutex::new(());

fn run_and_report(report: CriterionReport) {
    let mark = if report.passed { "PASS" } else { "FAIL" };
    println!(
        "[{mark}] criterion {:2}: {} ({:.1}s / {:.0}s)",
        report.id, report.name, report.runtime_s, report.runtime_limit_s
    );
    for check in &report.checks {
        println!("    {} {}", if check.passed { "ok  " } else { "FAIL" }, check.label);
    }
    assert!(report.passed, "criterion {} failed:\n{:#?}", report.id, report.checks);
}

#[test]
fn criterion_01_point_charge_law() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_1());
}

#[test]
fn criterion_02_coupling_scaling() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_2());
}

#[test]
fn criterion_03_mode_oracle() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_3());
}

#[test]
fn criterion_04_avoided_crossing_fit() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_4(7));
}

#[test]
fn criterion_05_heating_properties() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_5());
}

#[test]
fn criterion_06_dc_switch_dynamics() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_6());
}

#[test]
fn criterion_07_ms_gate_heating() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_7());
}

#[test]
fn criterion_08_ms_gate_dephasing() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_8());
}

#[test]
fn criterion_09_exchange_sequence() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_9());
}

#[test]
fn criterion_10_lightshift_gate() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_10());
}

#[test]
fn criterion_11_pseudopotential() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_11());
}

#[test]
fn criterion_12_qec_layouts() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_12());
}

#[test]
fn criterion_13_determinism() {
    let _g = GATE.lock().unwrap();
    run_and_report(acceptance::criterion_13(7));
}
