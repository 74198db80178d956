//! Acceptance suite: every headline property at its stated corpus size and
//! tolerance, one test per criterion, printing one pass/fail line each.
//! Comparisons are exact or certified by directed rounding at 50 digits.

use std::time::{Duration, Instant};

use slopebound_core::corpus::run_suite;
use slopebound_core::par::ExecMode;
use slopebound_core::report::{CorpusConfig, RunReport};

const SEED: u64 = 20250808;

fn config(suite: &str, count: u32) -> CorpusConfig {
    CorpusConfig { suite: suite.into(), count, seed: SEED, digits: 50, params: Default::default() }
}

fn run(cfg: &CorpusConfig) -> (RunReport, Duration) {
    let start = Instant::now();
    let report = run_suite(cfg, ExecMode::default_mode()).expect("suite runs");
    (report, start.elapsed())
}

fn verdict(criterion: u32, label: &str, report: &RunReport, elapsed: Duration, budget: Option<Duration>) {
    let within = budget.is_none_or(|b| elapsed <= b);
    let status = if report.all_pass() && within { "PASS" } else { "FAIL" };
    println!(
        "ACCEPTANCE {criterion}: {status} — {label}: {}/{} in {elapsed:.2?}{}",
        report.passed,
        report.passed + report.failed,
        budget
            .map(|b| format!(" (budget {b:.0?})"))
            .unwrap_or_default()
    );
    if let Some(first) = report.results.iter().find(|r| !r.pass) {
        println!("  first failure [{}]: {}", first.index, first.detail);
    }
    assert!(report.all_pass(), "criterion {criterion} has failing instances");
    assert!(within, "criterion {criterion} exceeded its runtime budget: {elapsed:.2?}");
}

#[test]
fn criterion_01_bigirth_trivalent_bound() {
    let (report, t) = run(&config("bigirth-trivalent", 500));
    verdict(1, "bigirth <= 4 log2 V on min-valence-3 graphs", &report, t, Some(Duration::from_secs(60)));
}

#[test]
fn criterion_02_bigirth_general_bound() {
    let (report, t) = run(&config("bigirth-general", 500));
    verdict(2, "bigirth and witness within 4 log2|2chi| floor(len/|chi|)", &report, t, None);
}

#[test]
fn criterion_03_tree_translation_length() {
    let (report, t) = run(&config("tree-length", 500));
    verdict(3, "descent oracle = 2 max(0,-v(tr)), even displacement", &report, t, Some(Duration::from_secs(120)));
}

#[test]
fn criterion_04_fixed_arc_commutators() {
    let (report, t) = run(&config("tree-commutator", 500));
    verdict(4, "v(tr[X,Y] - 2) >= t for stabilizer pairs, t in 1..=5", &report, t, None);
}

#[test]
fn criterion_05_key_inequality() {
    let (report, t) = run(&config("arcsys-keyineq", 100));
    verdict(5, "labeled extraction: injective, exclusion-free, chi<0, strict exact ratio", &report, t, None);
}

#[test]
fn criterion_06_key_consequence() {
    let (report, t) = run(&config("arcsys-keycons", 100));
    verdict(6, "Betti-2 subgraph with certified unreduced length bound", &report, t, None);
}

#[test]
fn criterion_07_standard_weights() {
    let (report, t) = run(&config("arcsys-weights", 200));
    verdict(7, "widened length <= (3/2) lambda, exact", &report, t, None);
}

#[test]
fn criterion_08_dual_graph_genus() {
    let (report, t) = run(&config("arcsys-dualgenus", 200));
    verdict(8, "b1(dual) >= genus on all-planar-region models", &report, t, None);
}

#[test]
fn criterion_09_minkowski_and_chain() {
    let (mink, t1) = run(&config("norms-minkowski", 1000));
    verdict(9, "lattice-free balanced parallelograms have area <= 4", &mink, t1, None);
    let (chain, t2) = run(&config("norms-chain", 500));
    verdict(9, "q1^2/Delta <= 2 ratio, exact", &chain, t2, None);
}

#[test]
fn criterion_10_torus_knot_corollary() {
    // all coprime 2 <= p < q <= 25; count is ignored in favor of the grid
    let (report, t) = run(&config("bounds-torus", 1));
    assert_eq!(report.passed + report.failed, 175, "expected 175 coprime pairs");
    verdict(10, "(g-1)/(4 log2(2g-2)) <= (pq)^2 with 50-digit margins", &report, t, None);
}

#[test]
fn criterion_11_calculus_and_precalculus() {
    let mut cfg = config("bounds-calculus", 256);
    cfg.params.insert("lo".into(), 333.into());
    cfg.params.insert("hi".into(), 1_000_000.into());
    let (report, t) = run(&cfg);
    verdict(
        11,
        "f monotone on [333, 1e6], sign facts at 333/334, q-tau certificates on the grid",
        &report,
        t,
        Some(Duration::from_secs(300)),
    );
}

#[test]
fn criterion_12_constant_consistency() {
    let (report, t) = run(&config("bounds-consistency", 100));
    verdict(12, "easy-bound coefficient identity and the formal chi-bound implication", &report, t, None);
}
