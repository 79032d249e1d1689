//! Acceptance gate: one test per exit criterion, each printing a single
//! PASS/FAIL line before asserting.
//!
//! Two criteria are expected to fail and are left failing on purpose: the
//! bare module bracket identities for the charge fields and the vanishing of
//! the squared zero mode of the deformation field are both refuted by exact
//! counterexamples the engine produces (see the failure messages).  The
//! corrected forms of those identities are verified elsewhere; these tests
//! record the discrepancy honestly instead of weakening the checks.

use voalab::config::RunConfig;
use voalab::exactmath::{int, Scalar};
use voalab::fockspace::{enumerate_basis, graded_dimension, LatticeContext, SpaceSpec};
use voalab::report::{CheckRecord, CheckStatus, Report};
use voalab::screenings::{apply_screening, triplet_generators, ScreeningKind};
use voalab::suites::run_suites;
use voalab::vertexops::Evaluator;

fn verdict(number: u32, name: &str, ok: bool, detail: String) {
    println!(
        "ACCEPTANCE {number:02} {name}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance criterion {number} ({name}): {detail}");
}

fn run(p: u32, pprime: Option<u32>, suites: &[&str]) -> Report {
    let cfg = RunConfig {
        p,
        pprime,
        suites: suites.iter().map(|s| s.to_string()).collect(),
        ..RunConfig::default()
    };
    run_suites(&cfg).expect("suite selection is valid")
}

fn check<'a>(report: &'a Report, name: &str) -> &'a CheckRecord {
    report
        .checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("missing check {name}"))
}

fn describe(c: &CheckRecord) -> String {
    match &c.counterexample {
        Some(ce) => format!("{} [{:?}] {} | counterexample: {ce}", c.name, c.status, c.details),
        None => format!("{} [{:?}] {}", c.name, c.status, c.details),
    }
}

#[test]
fn acceptance_01_virasoro_closure() {
    let mut detail = String::new();
    let mut ok = true;
    for (p, c) in [(2u32, -2i64), (3, -7)] {
        let ctx = LatticeContext::rank_one_triplet(p);
        if ctx.central_charge() != int(c) {
            ok = false;
            detail = format!("central charge at p = {p} is {}, expected {c}", ctx.central_charge());
        }
        let report = run(p, None, &["virasoro"]);
        if !report.all_pass() {
            ok = false;
            detail = report.checks.iter().map(describe).collect::<Vec<_>>().join("; ");
        }
    }
    verdict(1, "virasoro-closure", ok, detail);
}

#[test]
fn acceptance_02_screening_commutation() {
    let mut detail = String::new();
    let mut ok = true;
    for p in [2u32, 3] {
        let report = run(p, None, &["screening-commute"]);
        if !report.all_pass() {
            ok = false;
            detail = report.checks.iter().map(describe).collect::<Vec<_>>().join("; ");
        }
    }
    verdict(2, "screening-commutation", ok, detail);
}

#[test]
fn acceptance_03_kernel_generators() {
    let mut failures = Vec::new();
    for p in [2u32, 3] {
        let ctx = LatticeContext::rank_one_triplet(p);
        let ev = Evaluator::new(ctx.clone());
        let g = triplet_generators(&ev);
        for (label, s) in [("omega", &g.omega), ("F", &g.f), ("H", &g.h), ("E", &g.e)] {
            if !apply_screening(&ev, ScreeningKind::Short, s).is_zero() {
                failures.push(format!("p = {p}: short screening does not annihilate {label}"));
            }
        }
        let want = int(2 * p as i64 - 1);
        for (label, s) in [("F", &g.f), ("H", &g.h), ("E", &g.e)] {
            if s.homogeneous_weight(&ctx) != Some(want.clone()) {
                failures.push(format!("p = {p}: {label} is not homogeneous of weight {want}"));
            }
            if s.is_zero() {
                failures.push(format!("p = {p}: {label} vanished"));
            }
        }
        if !apply_screening(&ev, ScreeningKind::Long, &g.e).is_zero() {
            failures.push(format!("p = {p}: long screening does not annihilate E"));
        }
    }
    verdict(3, "kernel-generators", failures.is_empty(), failures.join("; "));
}

#[test]
fn acceptance_04_kernel_equals_generated_span() {
    let report = run(2, None, &["strong-generation"]);
    let ok = report.all_pass();
    let detail = report.checks.iter().map(describe).collect::<Vec<_>>().join("; ");
    verdict(4, "kernel-equals-generated-span", ok, detail);
}

#[test]
fn acceptance_05_c2_quotient_structure() {
    let report = run(2, None, &["c2-structure"]);
    let mut failures = Vec::new();
    if !report.all_pass() {
        failures.push(report.checks.iter().map(describe).collect::<Vec<_>>().join("; "));
    }
    // Frozen quotient profile: total 11 = 6p - 1, distributed as computed
    // stably across three cutoffs.
    let expected: Vec<(String, usize)> = [("0", 1), ("2", 1), ("3", 3), ("4", 1), ("5", 3), ("6", 1), ("8", 1)]
        .iter()
        .map(|(w, d)| (w.to_string(), *d))
        .collect();
    let table = report
        .dimension_tables
        .iter()
        .find(|t| t.name == "c2-quotient-dims")
        .expect("quotient table present");
    if table.rows != expected {
        failures.push(format!("quotient dims {:?}, expected {expected:?}", table.rows));
    }
    match report.solved_constants.get("nu") {
        Some(nu) if nu == "128/9" => {}
        other => failures.push(format!("nu = {other:?}, expected the frozen value 128/9")),
    }
    verdict(5, "c2-quotient-structure", failures.is_empty(), failures.join("; "));
}

#[test]
fn acceptance_06_singlet_zhu_polynomial() {
    let report = run(2, None, &["singlet-zhu"]);
    let mut failures = Vec::new();
    if !report.all_pass() {
        failures.push(report.checks.iter().map(describe).collect::<Vec<_>>().join("; "));
    }
    // The algebraically solved constant must match the value solved
    // independently from highest-weight eigenvalue lines.
    match report.solved_constants.get("C_p") {
        Some(c) if c == "128/9" => {}
        other => failures.push(format!("C_p = {other:?}, expected the frozen value 128/9")),
    }
    verdict(6, "singlet-zhu-polynomial", failures.is_empty(), failures.join("; "));
}

#[test]
fn acceptance_07_module_bracket_identities() {
    let report = run(2, None, &["tv1-com2"]);
    let families = [
        "tv1-com2/virasoro-g-translation",
        "tv1-com2/screening-g-translation",
        "tv1-com2/screening-g-zero",
        "tv1-com2/virasoro-gbar-translation",
    ];
    let mut failures = Vec::new();
    for name in families {
        let c = check(&report, name);
        if c.status != CheckStatus::Pass {
            failures.push(describe(c));
        }
    }
    verdict(
        7,
        "module-bracket-identities",
        failures.is_empty(),
        format!(
            "three of the four stated bracket identities are refuted by exact counterexamples; \
             with the trivial two-cocycle the corrected forms carry a Heisenberg tail and a \
             scalar anomaly (verified passing as tv1-com2/screening-g-corrected and \
             tv1-com2/virasoro-gbar-corrected): {}",
            failures.join("; ")
        ),
    );
}

#[test]
fn acceptance_08_locality_order_sums() {
    let report = run(2, None, &["locality"]);
    let ok = report.all_pass();
    let detail = report.checks.iter().map(describe).collect::<Vec<_>>().join("; ");
    verdict(8, "locality-order-sums", ok, detail);
}

#[test]
fn acceptance_09_logarithmic_deformation() {
    let report = run(2, None, &["log-deform"]);
    let names = [
        "log-deform/lowest-block",
        "log-deform/quadratic-zero-mode-square",
        "log-deform/deformed-virasoro-closure",
    ];
    let mut failures = Vec::new();
    for name in names {
        let c = check(&report, name);
        if c.status != CheckStatus::Pass {
            failures.push(describe(c));
        }
    }
    verdict(
        9,
        "logarithmic-deformation",
        failures.is_empty(),
        format!(
            "the lowest-stratum rank-2 block and the deformed Virasoro closure hold, but the \
             squared zero mode of the deformation field is nonzero on deep strata of both \
             paired modules (rank-3 and rank-4 grading blocks appear four levels up): {}",
            failures.join("; ")
        ),
    );
}

#[test]
fn acceptance_10_two_parameter_generators() {
    let report = run(3, Some(2), &["wpp2-generators"]);
    let ok = report.all_pass();
    let detail = report.checks.iter().map(describe).collect::<Vec<_>>().join("; ");
    verdict(10, "two-parameter-generators", ok, detail);
}

#[test]
fn acceptance_11_free_boson_dimensions() {
    // Independent oracle: partition counts from the product formula,
    // accumulated by convolution over part sizes.
    let mut coeff = vec![1usize, 0, 0, 0, 0, 0, 0];
    for k in 1..=6 {
        for n in k..=6 {
            coeff[n] += coeff[n - k];
        }
    }
    let mut failures = Vec::new();
    if coeff != vec![1, 1, 2, 3, 5, 7, 11] {
        failures.push(format!("partition oracle produced {coeff:?}"));
    }
    let ctx = LatticeContext::rank_one_triplet(2);
    let basis = enumerate_basis(&ctx, &SpaceSpec::Fock(ctx.zero_point()), &int(6));
    let dims = graded_dimension(&basis);
    let expected: Vec<(Scalar, usize)> =
        coeff.iter().enumerate().map(|(n, d)| (int(n as i64), *d)).collect();
    if dims != expected {
        failures.push(format!("enumerated dims {dims:?}, oracle {expected:?}"));
    }
    // The grading is independent of the rescaling exponent.
    let ctx3 = LatticeContext::rank_one_triplet(3);
    let basis3 = enumerate_basis(&ctx3, &SpaceSpec::Fock(ctx3.zero_point()), &int(6));
    if graded_dimension(&basis3) != expected {
        failures.push("dims at p = 3 differ from the oracle".to_string());
    }
    verdict(11, "free-boson-dimensions", failures.is_empty(), failures.join("; "));
}
