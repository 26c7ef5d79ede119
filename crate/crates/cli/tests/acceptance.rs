//! Acceptance gate: every release criterion as its own test, each printing
//! one `criterion NN <name> ... PASS|FAIL` line (visible under
//! `--nocapture`) and enforcing its wall-clock budget. Criteria 1-10 run the
//! shared battery in process; criterion 11 runs the installed binary twice
//! and compares report bytes.

use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use quarkcap::battery::{self, CriterionOutcome};
use quarkcap::error::CliError;

const SEED: u64 = 0;

/// Budgets are wall-clock per criterion; the guard serializes the heavy
/// criteria so parallel test threads cannot distort them.
static GATE: Mutex<()> = Mutex::new(());

fn check(budget: Option<Duration>, f: impl FnOnce() -> Result<CriterionOutcome, CliError>) {
    let _guard = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    let outcome = f().expect("criterion evaluates");
    let elapsed = started.elapsed();
    println!(
        "criterion {:02} {} ... {}",
        outcome.index,
        outcome.name,
        if outcome.verdict { "PASS" } else { "FAIL" }
    );
    if let Some(budget) = budget {
        assert!(
            elapsed <= budget,
            "criterion {:02} took {:.1?}, budget {:.1?}",
            outcome.index,
            elapsed,
            budget
        );
    }
    assert!(
        outcome.verdict,
        "criterion {:02} {} failed: {}",
        outcome.index,
        outcome.name,
        serde_json::to_string_pretty(&outcome.details).unwrap_or_default()
    );
}

#[test]
fn criterion_01_enumeration_fixtures() {
    check(Some(Duration::from_secs(60)), battery::criterion_01);
}

#[test]
fn criterion_02_composition_bounds() {
    check(Some(Duration::from_secs(180)), battery::criterion_02);
}

#[test]
fn criterion_03_table2_identities() {
    check(Some(Duration::from_secs(60)), battery::criterion_03);
}

#[test]
fn criterion_04_product_decomposition() {
    check(None, battery::criterion_04);
}

#[test]
fn criterion_05_synaptic_gating() {
    check(Some(Duration::from_secs(120)), battery::criterion_05);
}

#[test]
fn criterion_06_separators_and_multiplexing() {
    check(None, battery::criterion_06);
}

#[test]
fn criterion_07_embedding_pipeline() {
    check(None, battery::criterion_07);
}

#[test]
fn criterion_08_approximator() {
    check(None, battery::criterion_08);
}

#[test]
fn criterion_09_transformer() {
    check(None, || battery::criterion_09(SEED));
}

#[test]
fn criterion_10_netsim_equivalences() {
    check(None, || battery::criterion_10(SEED));
}

#[test]
fn criterion_11_byte_identical_reports() {
    let _guard = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_quarkcap"))
            .args(["verify", "all", "--level", "desk", "--seed", "0"])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    let verdict = first.status.success()
        && second.status.success()
        && first.stdout == second.stdout
        && !first.stdout.is_empty();
    println!(
        "criterion 11 byte_identical_reports ... {}",
        if verdict { "PASS" } else { "FAIL" }
    );
    assert!(first.status.success(), "first run failed: {:?}", first.status);
    assert!(second.status.success(), "second run failed: {:?}", second.status);
    assert!(!first.stdout.is_empty(), "report was empty");
    assert_eq!(first.stdout, second.stdout, "reports differ between runs");
}
