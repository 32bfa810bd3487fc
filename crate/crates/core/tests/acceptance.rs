//! The acceptance suite: each criterion runs at full size with a fixed
//! seed and must pass within its time budget. One pass/fail line prints
//! per criterion (visible with --nocapture; cargo's own per-test lines
//! mirror them).

use std::time::{Duration, Instant};

use siegelcf::selftest::{run_criterion, Profile};

const SEED: u64 = 7;

fn run(id: u32, budget: Duration) {
    let t0 = Instant::now();
    let report = run_criterion(id, SEED, Profile::Full);
    let elapsed = t0.elapsed();
    let status = if report.pass { "PASS" } else { "FAIL" };
    println!(
        "{status} criterion {}: {} — {} ({:.2?})",
        report.id, report.name, report.details, elapsed
    );
    assert!(report.pass, "criterion {}: {}", report.id, report.details);
    assert!(
        elapsed <= budget,
        "criterion {} exceeded its budget: {:.2?} > {:.2?}",
        report.id,
        elapsed,
        budget
    );
}

#[test]
fn acceptance_01_diagonal_enumeration() {
    run(1, Duration::from_secs(1));
}

#[test]
fn acceptance_02_generator_identities() {
    run(2, Duration::from_secs(30));
}

#[test]
fn acceptance_03_decomposition_round_trip() {
    run(3, Duration::from_secs(120));
}

#[test]
fn acceptance_04_relation_iff() {
    run(4, Duration::from_secs(60));
}

#[test]
fn acceptance_05_euler_direction() {
    run(5, Duration::from_secs(120));
}

#[test]
fn acceptance_06_lagrange_closed_loop() {
    run(6, Duration::from_secs(300));
}

#[test]
fn acceptance_07_algorithmic_periodicity() {
    run(7, Duration::from_secs(600));
}

#[test]
fn acceptance_08_rational_termination() {
    run(8, Duration::from_secs(60));
}

#[test]
fn acceptance_09_reduction_bound() {
    run(9, Duration::from_secs(60));
}

#[test]
fn acceptance_10_orbit_identities() {
    run(10, Duration::from_secs(120));
}
