//! Named verification suites.
//!
//! Each suite sweeps one family of exact identities over finite graded bases
//! and reports per-check records; nothing here is sampled approximately —
//! the only randomness is the seeded choice of extra `(m, n)` pairs beyond
//! the fixed windows, and every comparison is exact rational equality.
//!
//! Suites run concurrently on a small worker pool (capped by the
//! `VOALAB_THREADS` environment variable); the report is assembled by a
//! single writer in canonical catalog order so reruns are byte-identical.

use crate::config::RunConfig;
use crate::exactmath::{floor_int, int, rat, Scalar};
use crate::fockspace::{enumerate_basis, FockMonomial, LatticeContext, SpaceSpec, State};
use crate::logdeform::{
    build_m2, deformed_virasoro_mode, g_mode, gbar_mode, nilpotent_rank, M2Sign,
};
use crate::report::{CheckRecord, DimTable, Report};
use crate::screenings::{
    apply_screening, kernel_strata, minimal_generators, screening_charge_vector, strata_dims,
    strong_generation_span, triplet_generators, ScreeningKind,
};
use crate::vertexops::{locality_order_check, op_bracket, Evaluator, ModeFamily};
use crate::zhuc2::{
    c2_membership, c2_quotient_dims, h_rs, highest_weight_eigenvalues, solve_in_c2_quotient,
    solve_in_ov_quotient, zhu_star, AlgebraBasis, SolveOutcome, WeightWindow,
};
use crate::VoalabError;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Canonical catalog order; reports list suites in this order regardless of
/// the order they appear in the configuration.
pub const SUITE_ORDER: [&str; 10] = [
    "virasoro",
    "screening-commute",
    "triplet-kernel",
    "strong-generation",
    "c2-structure",
    "singlet-zhu",
    "tv1-com2",
    "locality",
    "log-deform",
    "wpp2-generators",
];

/// Static catalog entry for `voalab suites`.
pub struct SuiteInfo {
    pub name: &'static str,
    pub anchor: &'static str,
    pub defaults: &'static str,
}

pub fn list_suites() -> Vec<SuiteInfo> {
    vec![
        SuiteInfo {
            name: "virasoro",
            anchor: "[L(m), L(n)] = (m-n) L(m+n) + delta_{m+n,0} (m^3-m)/12 c",
            defaults: "lattice coset basis to maxWeight, m,n in [-3,3] plus seeded samples",
        },
        SuiteInfo {
            name: "screening-commute",
            anchor: "[L(n), Q] = [L(n), Qbar] = 0 and [Q, Qbar] = 0",
            defaults: "lattice coset basis to maxWeight, n in [-2,2]",
        },
        SuiteInfo {
            name: "triplet-kernel",
            anchor: "Qbar annihilates omega, F, H, E; wt(F) = wt(H) = wt(E) = 2p-1; Q E = 0",
            defaults: "kernel strata of the short screening to maxWeight",
        },
        SuiteInfo {
            name: "strong-generation",
            anchor: "span of {omega, F, H, E} monomials = ker Qbar, weight by weight",
            defaults: "both sides computed independently to maxWeight",
        },
        SuiteInfo {
            name: "c2-structure",
            anchor: "E^2 = F^2 = HE = HF = 0, H^2 = -EF = nu omega^{2p-1}, omega^p X = 0 in the C2 quotient",
            defaults: "three cutoff increments starting at floor(maxWeight)+2",
        },
        SuiteInfo {
            name: "singlet-zhu",
            anchor: "H * H = C (omega - h_{2,1}) * (omega - h_{1,1})^2 modulo O(ker-screening charge-zero algebra)",
            defaults: "pair budgets generatorBudget-4, -2, -0; window to maxWeight",
        },
        SuiteInfo {
            name: "tv1-com2",
            anchor: "[L(n), G(m)] = -m G(n+m); [Q, G(m)] = -m mu Gbar(m-1); [Q, G(0)] = 0; [L(n), Gbar(m)] = -(n+m+1) Gbar(n+m)",
            defaults: "both paired modules to 4 levels above minimum, n,m in [-2,2]",
        },
        SuiteInfo {
            name: "locality",
            anchor: "sum_k (-1)^k binom(2p-1, k) [A(m+2p-1-k), G(n+k)] = 0 for A in {L, F-modes}",
            defaults: "both paired modules to 4 levels above minimum, m,n in [-2,2]",
        },
        SuiteInfo {
            name: "log-deform",
            anchor: "Ltilde(n) = L(n) + G(n): Virasoro with unchanged c; rank-2 grading block at the lowest top-summand stratum",
            defaults: "both paired modules to 4 levels above minimum",
        },
        SuiteInfo {
            name: "wpp2-generators",
            anchor: "F = Q e^{-3 alpha/2} of weight 15 and charge -alpha; H = G F != 0; E = G^2 F",
            defaults: "two-parameter context (3,2) unless configured otherwise",
        },
    ]
}

/// Everything a single suite contributes to the report.
#[derive(Default)]
struct SuiteOutput {
    checks: Vec<CheckRecord>,
    tables: Vec<DimTable>,
    constants: BTreeMap<String, String>,
}

impl SuiteOutput {
    fn push(&mut self, c: CheckRecord) {
        self.checks.push(c);
    }
}

fn worker_count(jobs: usize) -> usize {
    let requested = std::env::var("VOALAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    requested.min(jobs).max(1)
}

/// Run the configured suites and assemble the deterministic report.
pub fn run_suites(cfg: &RunConfig) -> Result<Report, VoalabError> {
    // Reject unknown suites before any computation starts.
    for name in &cfg.suites {
        if !SUITE_ORDER.contains(&name.as_str()) {
            return Err(VoalabError::UnknownSuite(name.clone()));
        }
    }
    let selected: Vec<&str> = SUITE_ORDER
        .iter()
        .copied()
        .filter(|n| cfg.suites.iter().any(|s| s == n))
        .collect();

    let slots: Vec<Mutex<Option<(SuiteOutput, u128)>>> =
        selected.iter().map(|_| Mutex::new(None)).collect();
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..worker_count(selected.len()) {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::SeqCst);
                if i >= selected.len() {
                    break;
                }
                let started = Instant::now();
                let out = run_one(selected[i], cfg);
                let elapsed = started.elapsed().as_millis();
                *slots[i].lock().expect("slot lock") = Some((out, elapsed));
            });
        }
    });

    // Single-writer assembly in canonical order.
    let mut report = Report {
        config: cfg.echo(),
        checks: Vec::new(),
        solved_constants: BTreeMap::new(),
        dimension_tables: Vec::new(),
        timings_ms: BTreeMap::new(),
    };
    for (name, slot) in selected.iter().zip(slots) {
        let (out, ms) = slot.into_inner().expect("slot lock").expect("suite ran");
        report.checks.extend(out.checks);
        report.dimension_tables.extend(out.tables);
        for (k, v) in out.constants {
            report.solved_constants.insert(k, v);
        }
        report.timings_ms.insert(name.to_string(), ms);
    }
    Ok(report)
}

fn run_one(name: &str, cfg: &RunConfig) -> SuiteOutput {
    match name {
        "virasoro" => suite_virasoro(cfg),
        "screening-commute" => suite_screening_commute(cfg),
        "triplet-kernel" => suite_triplet_kernel(cfg),
        "strong-generation" => suite_strong_generation(cfg),
        "c2-structure" => suite_c2_structure(cfg),
        "singlet-zhu" => suite_singlet_zhu(cfg),
        "tv1-com2" => suite_tv1_com2(cfg),
        "locality" => suite_locality(cfg),
        "log-deform" => suite_log_deform(cfg),
        "wpp2-generators" => suite_wpp2(cfg),
        other => unreachable!("suite names validated before dispatch: {other}"),
    }
}

// ---------------------------------------------------------------------------
// Shared helpers.

/// Context selected by the configuration for the context-generic suites.
fn context_for(cfg: &RunConfig) -> LatticeContext {
    match cfg.pprime {
        Some(pp) => LatticeContext::rank_one_minimal(cfg.p, pp),
        None => LatticeContext::rank_one_triplet(cfg.p),
    }
}

/// The one-parameter context of the screening-algebra suites.
fn triplet_context(cfg: &RunConfig) -> LatticeContext {
    LatticeContext::rank_one_triplet(cfg.p)
}

fn coset_states(ctx: &LatticeContext, cutoff: &Scalar) -> Vec<State> {
    let basis = enumerate_basis(ctx, &SpaceSpec::Coset(ctx.zero_point()), cutoff);
    basis
        .strata()
        .flat_map(|(_, monos)| monos.iter().cloned())
        .map(|m| State::from_monomial(m, Scalar::one()))
        .collect()
}

fn mono_state(m: &FockMonomial) -> State {
    State::from_monomial(m.clone(), Scalar::one())
}

fn dims_to_table(name: &str, dims: &[(Scalar, usize)]) -> DimTable {
    DimTable {
        name: name.to_string(),
        rows: dims.iter().map(|(w, d)| (w.to_string(), *d)).collect(),
    }
}

fn virasoro_rhs(ev: &Evaluator, m: i64, n: i64, t: &State) -> State {
    let mut rhs = ev.virasoro_mode(m + n, t).scaled(&int(m - n));
    if m + n == 0 {
        let c = ev.ctx().central_charge();
        let coeff = int(m * m * m - m) / int(12) * c;
        rhs = rhs.add(&t.scaled(&coeff));
    }
    rhs
}

fn virasoro_lhs(ev: &Evaluator, m: i64, n: i64, t: &State) -> State {
    op_bracket(&|s| ev.virasoro_mode(m, s), &|s| ev.virasoro_mode(n, s), t)
}

struct Sweep {
    comparisons: usize,
    counterexample: Option<String>,
}

impl Sweep {
    fn new() -> Self {
        Sweep { comparisons: 0, counterexample: None }
    }

    fn compare(&mut self, lhs: &State, rhs: &State, describe: impl FnOnce() -> String) {
        self.comparisons += 1;
        if self.counterexample.is_none() && lhs != rhs {
            self.counterexample = Some(format!("{}; lhs = {lhs}; rhs = {rhs}", describe()));
        }
    }

    fn record(self, name: &str, anchor: &str, what: impl Into<String>) -> CheckRecord {
        let details = format!("{} ({} exact comparisons)", what.into(), self.comparisons);
        match self.counterexample {
            None => CheckRecord::pass(name, anchor, details),
            Some(ce) => CheckRecord::fail(name, anchor, details, ce),
        }
    }
}

// ---------------------------------------------------------------------------
// virasoro

fn suite_virasoro(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let ctx = context_for(cfg);
    let ev = Evaluator::new(ctx.clone());
    let states = coset_states(&ctx, &cfg.max_weight);
    let anchor = "[L(m), L(n)] = (m-n) L(m+n) + delta_{m+n,0} (m^3-m)/12 c";

    let mut sweep = Sweep::new();
    for t in &states {
        for m in -3i64..=3 {
            for n in -3i64..=3 {
                let lhs = virasoro_lhs(&ev, m, n, t);
                let rhs = virasoro_rhs(&ev, m, n, t);
                sweep.compare(&lhs, &rhs, || format!("m = {m}, n = {n}, t = {t}"));
            }
        }
    }
    out.push(sweep.record(
        "virasoro/closure",
        anchor,
        format!("window m,n in [-3,3] over {} basis states of weight <= {}", states.len(), cfg.max_weight),
    ));

    // Seeded samples outside the fixed window.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sweep = Sweep::new();
    for _ in 0..6 {
        let m = rng.gen_range(-5i64..=5);
        let n = rng.gen_range(-5i64..=5);
        let t = &states[rng.gen_range(0..states.len())];
        let lhs = virasoro_lhs(&ev, m, n, t);
        let rhs = virasoro_rhs(&ev, m, n, t);
        sweep.compare(&lhs, &rhs, || format!("m = {m}, n = {n}, t = {t}"));
    }
    out.push(sweep.record(
        "virasoro/closure-sampled",
        anchor,
        format!("6 seeded pairs in [-5,5]^2 (seed {})", cfg.seed),
    ));

    // Measure c behaviorally: on the vacuum, [L(2), L(-2)] 1 = (c/2) 1.
    let vac = State::vacuum(ctx.rank());
    let measured = virasoro_lhs(&ev, 2, -2, &vac);
    let c = ctx.central_charge();
    let expected = vac.scaled(&(c.clone() / int(2)));
    out.push(CheckRecord::verdict(
        "virasoro/central-charge",
        "c = 1 - 6 (p - p')^2 / (p p')  (p' = 1 for the one-parameter family)",
        format!("measured 2 * [L(2), L(-2)] 1 = {} = c", c),
        measured == expected,
        format!("[L(2), L(-2)] 1 = {measured}, expected {expected}"),
    ));
    out
}

// ---------------------------------------------------------------------------
// screening-commute

fn suite_screening_commute(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let ctx = context_for(cfg);
    let ev = Evaluator::new(ctx.clone());
    let states = coset_states(&ctx, &cfg.max_weight);
    let long = screening_charge_vector(&ev, ScreeningKind::Long);
    let short = screening_charge_vector(&ev, ScreeningKind::Short);

    for (label, beta) in [("long", &long), ("short", &short)] {
        let mut sweep = Sweep::new();
        for t in &states {
            for n in -2i64..=2 {
                let lhs = op_bracket(
                    &|s| ev.virasoro_mode(n, s),
                    &|s| ev.screening_charge(beta, s),
                    t,
                );
                sweep.compare(&lhs, &State::zero(), || format!("n = {n}, t = {t}"));
            }
        }
        out.push(sweep.record(
            &format!("screening-commute/virasoro-{label}"),
            "[L(n), e^{beta}_0] = 0 for weight-one e^{beta}",
            format!("{label} screening over {} states, n in [-2,2]", states.len()),
        ));
    }

    let mut sweep = Sweep::new();
    for t in &states {
        let lhs = op_bracket(
            &|s| ev.screening_charge(&long, s),
            &|s| ev.screening_charge(&short, s),
            t,
        );
        sweep.compare(&lhs, &State::zero(), || format!("t = {t}"));
    }
    out.push(sweep.record(
        "screening-commute/long-short",
        "[Q, Qbar] = 0",
        format!("over {} states", states.len()),
    ));
    out
}

// ---------------------------------------------------------------------------
// triplet-kernel

fn suite_triplet_kernel(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let ctx = triplet_context(cfg);
    let ev = Evaluator::new(ctx.clone());
    let g = triplet_generators(&ev);
    let p = ctx.p() as i64;

    let gens = [("omega", &g.omega), ("F", &g.f), ("H", &g.h), ("E", &g.e)];
    let mut sweep = Sweep::new();
    for (_, s) in &gens {
        let image = apply_screening(&ev, ScreeningKind::Short, s);
        sweep.compare(&image, &State::zero(), || {
            let names: Vec<&str> = gens
                .iter()
                .filter(|(_, t)| !apply_screening(&ev, ScreeningKind::Short, t).is_zero())
                .map(|(n, _)| *n)
                .collect();
            format!("short screening does not annihilate {}", names.join(", "))
        });
    }
    out.push(sweep.record(
        "triplet-kernel/short-annihilates-generators",
        "Qbar omega = Qbar F = Qbar H = Qbar E = 0",
        "four generators",
    ));

    let nonzero = gens.iter().all(|(_, s)| !s.is_zero());
    out.push(CheckRecord::verdict(
        "triplet-kernel/generators-nonzero",
        "F, H = Q F, E = Q^2 F are nonzero",
        "three screening images of e^{-alpha}",
        nonzero,
        "a generator vanished",
    ));

    let want = int(2 * p - 1);
    let weights: Vec<Option<Scalar>> = [&g.f, &g.h, &g.e]
        .iter()
        .map(|s| s.homogeneous_weight(&ctx))
        .collect();
    let ok = weights.iter().all(|w| w.as_ref() == Some(&want));
    out.push(CheckRecord::verdict(
        "triplet-kernel/generator-weights",
        "wt(F) = wt(H) = wt(E) = 2p - 1",
        format!("expected weight {want}"),
        ok,
        format!("weights of F, H, E: {weights:?}"),
    ));

    let qe = apply_screening(&ev, ScreeningKind::Long, &g.e);
    out.push(CheckRecord::verdict(
        "triplet-kernel/long-kills-e",
        "Q E = Q^3 e^{-alpha} = 0",
        "one state",
        qe.is_zero(),
        format!("Q E = {qe}"),
    ));

    // The kernel strata themselves, recomputed and certified.
    let basis = enumerate_basis(&ctx, &SpaceSpec::Coset(ctx.zero_point()), &cfg.max_weight);
    let kernels = kernel_strata(&ev, &basis, &[ScreeningKind::Short]);
    let mut certified = Sweep::new();
    for states in kernels.values() {
        for s in states {
            let image = apply_screening(&ev, ScreeningKind::Short, s);
            certified.compare(&image, &State::zero(), || format!("kernel state {s}"));
        }
    }
    out.push(certified.record(
        "triplet-kernel/kernel-certified",
        "every reported kernel state is annihilated by the short screening",
        format!("strata to weight {}", cfg.max_weight),
    ));
    out.tables.push(dims_to_table("triplet-kernel-dims", &strata_dims(&kernels)));
    out
}

// ---------------------------------------------------------------------------
// strong-generation

fn suite_strong_generation(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let ctx = triplet_context(cfg);
    let ev = Evaluator::new(ctx.clone());
    let g = triplet_generators(&ev);
    let basis = enumerate_basis(&ctx, &SpaceSpec::Coset(ctx.zero_point()), &cfg.max_weight);

    let span = strong_generation_span(
        &ev,
        &[g.omega.clone(), g.f.clone(), g.h.clone(), g.e.clone()],
        &basis,
    );
    let kernels = kernel_strata(&ev, &basis, &[ScreeningKind::Short]);
    let span_dims = strata_dims(&span);
    let kernel_dims = strata_dims(&kernels);

    let ok = span_dims == kernel_dims;
    out.push(CheckRecord::verdict(
        "strong-generation/span-matches-kernel",
        "iterated negative modes of {omega, F, H, E} span ker Qbar weight by weight",
        format!("both sides computed independently to weight {}", cfg.max_weight),
        ok,
        format!("span dims {span_dims:?} vs kernel dims {kernel_dims:?}"),
    ));
    out.tables.push(dims_to_table("strong-generation-dims", &span_dims));
    out
}

// ---------------------------------------------------------------------------
// c2-structure

fn suite_c2_structure(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let ctx = triplet_context(cfg);
    let ev = Evaluator::new(ctx.clone());
    let p = ctx.p();

    let base = floor_int(&cfg.max_weight).to_i64().unwrap_or(6) + 2;
    let cutoffs = [int(base), int(base + 1), int(base + 2)];

    let mut tables: Vec<BTreeMap<Scalar, usize>> = Vec::new();
    let mut algebras: Vec<AlgebraBasis> = Vec::new();
    for cutoff in &cutoffs {
        let ambient = enumerate_basis(&ctx, &SpaceSpec::Coset(ctx.zero_point()), cutoff);
        let kernels = kernel_strata(&ev, &ambient, &[ScreeningKind::Short]);
        let alg = AlgebraBasis::from_strata(ambient, kernels);
        tables.push(c2_quotient_dims(&ev, &alg, cutoff));
        algebras.push(alg);
    }

    // Stability: the tables agree on shared weights, and the larger cutoffs
    // contribute no new nonzero strata.
    let first = &tables[0];
    let mut stable = true;
    let mut why = String::new();
    for (i, table) in tables.iter().enumerate().skip(1) {
        for (w, d) in table {
            let base_entry = first.get(w).copied().unwrap_or(0);
            let matches = if w <= &cutoffs[0] { base_entry == *d } else { *d == 0 };
            if !matches {
                stable = false;
                why = format!("cutoff {} reports dim {} at weight {}", cutoffs[i], d, w);
            }
        }
    }
    let total: usize = first.values().sum();
    let expected_total = 6 * p as usize - 1;
    let nonzero: Vec<(Scalar, usize)> =
        first.iter().filter(|(_, d)| **d > 0).map(|(w, d)| (w.clone(), *d)).collect();
    out.tables.push(dims_to_table("c2-quotient-dims", &nonzero));
    if stable {
        out.push(CheckRecord::verdict(
            "c2-structure/quotient-dimension",
            "dim of the C2 quotient of ker Qbar equals 6p - 1",
            format!(
                "total {total} across cutoffs {}, {}, {}",
                cutoffs[0], cutoffs[1], cutoffs[2]
            ),
            total == expected_total,
            format!("total {total}, expected {expected_total}; nonzero strata {nonzero:?}"),
        ));
    } else {
        out.push(CheckRecord::unstable(
            "c2-structure/quotient-dimension",
            "dim of the C2 quotient of ker Qbar equals 6p - 1",
            format!("dims did not stabilize: {why}"),
        ));
    }

    // Quotient relations among the generator classes, inside the largest
    // cutoff's algebra.
    let alg = &algebras[2];
    let g = triplet_generators(&ev);
    let prod = |a: &State, b: &State| ev.mode_apply(a, &int(-1), b);
    let pairs: [(&str, State); 4] = [
        ("E^2", prod(&g.e, &g.e)),
        ("F^2", prod(&g.f, &g.f)),
        ("H E", prod(&g.h, &g.e)),
        ("H F", prod(&g.f, &g.h)),
    ];
    let mut sweep = Sweep::new();
    for (label, s) in &pairs {
        let member = c2_membership(&ev, alg, s);
        sweep.compare(
            &if member { State::zero() } else { s.clone() },
            &State::zero(),
            || format!("{label} is not a C2 class of zero"),
        );
    }
    out.push(sweep.record(
        "c2-structure/vanishing-products",
        "E^2 = F^2 = H E = H F = 0 in the C2 quotient",
        "four products",
    ));

    let hh = prod(&g.h, &g.h);
    let ef = prod(&g.e, &g.f);
    let anti = hh.add(&ef);
    out.push(CheckRecord::verdict(
        "c2-structure/square-vs-product",
        "H^2 = -E F in the C2 quotient",
        "one membership",
        c2_membership(&ev, alg, &anti),
        format!("H^2 + E F = {anti} is not in C2"),
    ));

    // omega^p X = 0 in the quotient for X in {E, F, H}.
    let mut sweep = Sweep::new();
    for (label, s) in [("E", &g.e), ("F", &g.f), ("H", &g.h)] {
        let mut power = (*s).clone();
        for _ in 0..p {
            power = prod(&g.omega, &power);
        }
        let member = c2_membership(&ev, alg, &power);
        sweep.compare(
            &if member { State::zero() } else { power.clone() },
            &State::zero(),
            || format!("omega^p {label} is not a C2 class of zero"),
        );
    }
    out.push(sweep.record(
        "c2-structure/conformal-power-annihilates",
        "omega^p X = 0 in the C2 quotient for X in {E, F, H}",
        "three products",
    ));

    // The one solved constant: H^2 = nu omega^{2p-1}.
    let mut omega_pow = g.omega.clone();
    for _ in 0..(2 * p - 2) {
        omega_pow = prod(&g.omega, &omega_pow);
    }
    match solve_in_c2_quotient(&ev, alg, &hh, &omega_pow) {
        SolveOutcome::Unique(nu) if !nu.is_zero() => {
            out.push(CheckRecord::pass(
                "c2-structure/cubic-square",
                "H^2 = nu omega^{2p-1} in the C2 quotient with a unique nu != 0",
                format!("nu = {nu}"),
            ));
            out.constants.insert("nu".to_string(), nu.to_string());
        }
        other => {
            out.push(CheckRecord::fail(
                "c2-structure/cubic-square",
                "H^2 = nu omega^{2p-1} in the C2 quotient with a unique nu != 0",
                "solve failed",
                format!("{other:?}"),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// singlet-zhu

fn suite_singlet_zhu(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let ctx = triplet_context(cfg);
    let ev = Evaluator::new(ctx.clone());
    let p = ctx.p();

    let budget = cfg.generator_budget.max(6);
    let budgets = [budget.saturating_sub(4).max(4), budget.saturating_sub(2).max(5), budget];
    let ambient_cutoff = int(budget as i64);
    let ambient = enumerate_basis(&ctx, &SpaceSpec::Fock(ctx.zero_point()), &ambient_cutoff);
    let kernels = kernel_strata(&ev, &ambient, &[ScreeningKind::Short]);
    let alg = AlgebraBasis::from_strata(ambient, kernels);
    // The window spans the whole ambient space so every admitted circle
    // product is computed exactly; the pair budgets are the only truncation.
    let window = WeightWindow::new(alg.ambient(), &ambient_cutoff);

    let g = triplet_generators(&ev);
    let vac = State::vacuum(ctx.rank());
    let h21 = h_rs(p, 1, 2, 1);
    let h11 = h_rs(p, 1, 1, 1);
    let x = g.omega.sub(&vac.scaled(&h21));
    let y = g.omega.sub(&vac.scaled(&h11));
    let special = zhu_star(&ev, &g.h, &g.h);
    let candidate = zhu_star(&ev, &x, &zhu_star(&ev, &y, &y));

    let solve = solve_in_ov_quotient(&ev, &alg, &window, &special, &candidate, &budgets);
    let anchor = "H * H = C (omega - h_{2,1}) * (omega - h_{1,1})^2 modulo O(ker-screening charge-zero algebra)";
    let name = "singlet-zhu/associated-polynomial";
    let details = format!(
        "pair budgets {:?}, exact circle products inside weight {ambient_cutoff}",
        solve.budgets
    );
    if !solve.stable {
        out.push(CheckRecord::unstable(name, anchor, format!("{details}; outcomes varied across budgets")));
    } else {
        match &solve.outcome {
            SolveOutcome::Unique(c) if !c.is_zero() => {
                out.push(CheckRecord::pass(name, anchor, format!("{details}; C = {c}")));
                out.constants.insert("C_p".to_string(), c.to_string());
            }
            other => {
                out.push(CheckRecord::fail(name, anchor, details, format!("{other:?}")));
            }
        }
    }

    // Independent eigenvalue route: o(omega), o(H) act on each highest-weight
    // line by scalars (x0, y0) lying on y^2 = C (x - h_{2,1}) (x - h_{1,1})^2.
    let curve = |x0: &Scalar| {
        (x0.clone() - h21.clone()) * (x0.clone() - h11.clone()) * (x0.clone() - h11.clone())
    };
    let (x1, y1) = highest_weight_eigenvalues(&ev, &g.h, &Scalar::one());
    let denom = curve(&x1);
    if denom.is_zero() || y1.is_zero() {
        out.push(CheckRecord::fail(
            "singlet-zhu/highest-weight-curve",
            "y0^2 = C (x0 - h_{2,1}) (x0 - h_{1,1})^2 on highest-weight lines",
            "base line t = 1 degenerate",
            format!("x0 = {x1}, y0 = {y1}"),
        ));
    } else {
        let c_curve = y1.clone() * y1 / denom;
        let mut sweep = Sweep::new();
        for t in [int(-1), int(2), int(3), rat(1, 2), rat(-3, 2)] {
            let (x0, y0) = highest_weight_eigenvalues(&ev, &g.h, &t);
            let lhs = vac.scaled(&(y0.clone() * y0));
            let rhs = vac.scaled(&(c_curve.clone() * curve(&x0)));
            sweep.compare(&lhs, &rhs, || format!("line t = {t}, x0 = {x0}"));
        }
        out.push(sweep.record(
            "singlet-zhu/highest-weight-curve",
            "y0^2 = C (x0 - h_{2,1}) (x0 - h_{1,1})^2 on highest-weight lines",
            format!("C solved on t = 1: {c_curve}; verified on five more lines"),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// tv1-com2

const M2_EXTRA_LEVELS: u32 = 4;

fn m2_test_states(ctx: &LatticeContext) -> Vec<(M2Sign, State)> {
    let mut states = Vec::new();
    for sign in [M2Sign::Plus, M2Sign::Minus] {
        let m2 = build_m2(ctx, sign, M2_EXTRA_LEVELS);
        for mono in m2.all_monomials() {
            states.push((sign, mono_state(&mono)));
        }
    }
    states
}

fn suite_tv1_com2(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let ctx = triplet_context(cfg);
    let ev = Evaluator::new(ctx.clone());
    let q = ctx.basis_point(0);
    let p = ctx.p() as i64;
    let mu = rat(p, p - 1);
    let states = m2_test_states(&ctx);
    let scope = format!(
        "{} states of both paired modules to {M2_EXTRA_LEVELS} levels above minimum",
        states.len()
    );

    // (1) [L(n), G(m)] = -m G(n+m).
    let mut sweep = Sweep::new();
    for (sign, t) in &states {
        for n in -2i64..=2 {
            for m in -2i64..=2 {
                let lhs = op_bracket(&|s| ev.virasoro_mode(n, s), &|s| g_mode(&ev, m, s), t);
                let rhs = g_mode(&ev, n + m, t).scaled(&int(-m));
                sweep.compare(&lhs, &rhs, || format!("sign {sign:?}, n = {n}, m = {m}, t = {t}"));
            }
        }
    }
    out.push(sweep.record(
        "tv1-com2/virasoro-g-translation",
        "[L(n), G(m)] = -m G(n+m)",
        format!("{scope}, n,m in [-2,2]"),
    ));

    // (2) bare form: [Q, G(m)] = -m mu Gbar(m-1).
    let mut sweep = Sweep::new();
    for (sign, t) in &states {
        for m in -2i64..=2 {
            let lhs = op_bracket(&|s| ev.screening_charge(&q, s), &|s| g_mode(&ev, m, s), t);
            let rhs = gbar_mode(&ev, m - 1, t).scaled(&(-int(m) * mu.clone()));
            sweep.compare(&lhs, &rhs, || format!("sign {sign:?}, m = {m}, t = {t}"));
        }
    }
    out.push(sweep.record(
        "tv1-com2/screening-g-translation",
        "[Q, G(m)] = -m mu Gbar(m-1), mu = p/(p-1)",
        format!("{scope}, m in [-2,2]"),
    ));

    // (3) bare form: [Q, G(0)] = 0.
    let mut sweep = Sweep::new();
    for (sign, t) in &states {
        let lhs = op_bracket(&|s| ev.screening_charge(&q, s), &|s| g_mode(&ev, 0, s), t);
        sweep.compare(&lhs, &State::zero(), || format!("sign {sign:?}, t = {t}"));
    }
    out.push(sweep.record(
        "tv1-com2/screening-g-zero",
        "[Q, G(0)] = 0",
        scope.clone(),
    ));

    // (4) bare form: [L(n), Gbar(m)] = -(n+m+1) Gbar(n+m).
    let mut sweep = Sweep::new();
    for (sign, t) in &states {
        for n in -2i64..=2 {
            for m in -2i64..=2 {
                let lhs = op_bracket(&|s| ev.virasoro_mode(n, s), &|s| gbar_mode(&ev, m, s), t);
                let rhs = gbar_mode(&ev, n + m, t).scaled(&int(-(n + m + 1)));
                sweep.compare(&lhs, &rhs, || format!("sign {sign:?}, n = {n}, m = {m}, t = {t}"));
            }
        }
    }
    out.push(sweep.record(
        "tv1-com2/virasoro-gbar-translation",
        "[L(n), Gbar(m)] = -(n+m+1) Gbar(n+m)",
        format!("{scope}, n,m in [-2,2]"),
    ));

    // With the trivial two-cocycle at p = 2 the two failing brackets close in
    // corrected form; verify the corrections exactly.
    if ctx.p() == 2 {
        let mut sweep = Sweep::new();
        for (sign, t) in &states {
            for m in -2i64..=2 {
                let lhs = op_bracket(&|s| ev.screening_charge(&q, s), &|s| g_mode(&ev, m, s), t);
                let mut rhs = gbar_mode(&ev, m - 1, t).scaled(&int(-2 * m));
                rhs = rhs.add(&ev.heis_mode(1, m, t).scaled(&int(2)));
                if m == 0 {
                    rhs = rhs.sub(&t.scaled(&int(2)));
                }
                sweep.compare(&lhs, &rhs, || format!("sign {sign:?}, m = {m}, t = {t}"));
            }
        }
        out.push(sweep.record(
            "tv1-com2/screening-g-corrected",
            "[Q, G(m)] = -2m Gbar(m-1) + 2 alpha(m) - 2 delta_{m,0}  (p = 2, trivial cocycle)",
            format!("{scope}, m in [-2,2]"),
        ));

        let mut sweep = Sweep::new();
        for (sign, t) in &states {
            for n in -2i64..=2 {
                for m in -2i64..=2 {
                    let lhs =
                        op_bracket(&|s| ev.virasoro_mode(n, s), &|s| gbar_mode(&ev, m, s), t);
                    let mut rhs = gbar_mode(&ev, n + m, t).scaled(&int(-(n + m + 1)));
                    if n + m == -1 {
                        rhs = rhs.add(&t.scaled(&int(n)));
                    }
                    sweep.compare(&lhs, &rhs, || {
                        format!("sign {sign:?}, n = {n}, m = {m}, t = {t}")
                    });
                }
            }
        }
        out.push(sweep.record(
            "tv1-com2/virasoro-gbar-corrected",
            "[L(n), Gbar(m)] = -(n+m+1) Gbar(n+m) + n delta_{n+m,-1}  (p = 2, trivial cocycle)",
            format!("{scope}, n,m in [-2,2]"),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// locality

fn suite_locality(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let ctx = triplet_context(cfg);
    let ev = Evaluator::new(ctx.clone());
    let order = 2 * ctx.p() - 1;
    let states = m2_test_states(&ctx);
    let g_family = ModeFamily::new("G", |m: &Scalar, t: &State| {
        let m = floor_int(m).to_i64().expect("integer mode");
        g_mode(&ev, m, t)
    });
    let f_state = State::exponential(ctx.basis_point(0).neg());

    for (label, family) in [
        ("virasoro", ModeFamily::virasoro(&ev)),
        ("f-modes", ModeFamily::of_state(&ev, f_state, "F")),
    ] {
        let mut sweep = Sweep::new();
        for (sign, t) in &states {
            for m in -2i64..=2 {
                for n in -2i64..=2 {
                    let acc = locality_order_check(&family, &g_family, order, &int(m), &int(n), t);
                    sweep.compare(&acc, &State::zero(), || {
                        format!("sign {sign:?}, m = {m}, n = {n}, t = {t}")
                    });
                }
            }
        }
        out.push(sweep.record(
            &format!("locality/{label}-vs-g"),
            "sum_k (-1)^k binom(2p-1, k) [A(m+2p-1-k), G(n+k)] = 0",
            format!(
                "order {} sums over {} states, m,n in [-2,2]",
                order,
                states.len()
            ),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// log-deform

fn suite_log_deform(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let ctx = triplet_context(cfg);
    let ev = Evaluator::new(ctx.clone());
    let ltilde0 = |s: &State| deformed_virasoro_mode(&ev, 0, s);

    // Rank profile per stratum for both modules; the lowest top-summand
    // stratum must carry a rank-2 block.
    for (sign, label) in [(M2Sign::Plus, "plus"), (M2Sign::Minus, "minus")] {
        let m2 = build_m2(&ctx, sign, M2_EXTRA_LEVELS);
        let mut rows = Vec::new();
        for w in m2.weights() {
            let basis: Vec<State> = m2.stratum(&w).iter().map(mono_state).collect();
            let report = nilpotent_rank(&ltilde0, "deformed grading", &basis, &w, &w);
            rows.push((w.to_string(), report.rank));
        }
        out.tables.push(DimTable {
            name: format!("log-deform-rank-{label}"),
            rows,
        });
    }

    let plus = build_m2(&ctx, M2Sign::Plus, M2_EXTRA_LEVELS);
    let w0 = plus.min_weight();
    let basis: Vec<State> = plus.stratum(&w0).iter().map(mono_state).collect();
    let report = nilpotent_rank(&ltilde0, "deformed grading", &basis, &w0, &w0);
    let expected_low = if ctx.p() == 2 { rat(3, 8) } else { w0.clone() };
    out.push(CheckRecord::verdict(
        "log-deform/lowest-block",
        "Ltilde(0) = L(0) + G(0) has a rank-2 Jordan block at the lowest top-summand stratum",
        format!("lowest weight {w0}, stratum dim {}", report.stratum_dim),
        report.rank == 2 && w0 == expected_low,
        format!("rank {} at weight {w0}", report.rank),
    ));

    // G(0)^2 on every stratum of both modules.
    let mut sweep = Sweep::new();
    for (sign, t) in m2_test_states(&ctx) {
        let sq = g_mode(&ev, 0, &g_mode(&ev, 0, &t));
        sweep.compare(&sq, &State::zero(), || format!("sign {sign:?}, t = {t}"));
    }
    out.push(sweep.record(
        "log-deform/quadratic-zero-mode-square",
        "G(0)^2 = 0 on every stratum of both paired modules",
        format!("both modules to {M2_EXTRA_LEVELS} levels above minimum"),
    ));

    // Deformed Virasoro closure with the undeformed central charge, on the
    // lowest two strata of the top-summand module.
    let c = ctx.central_charge();
    let mut sweep = Sweep::new();
    let test_weights: Vec<Scalar> = plus.weights().into_iter().take(2).collect();
    for w in &test_weights {
        for mono in plus.stratum(w) {
            let t = mono_state(&mono);
            for m in -2i64..=2 {
                for n in -2i64..=2 {
                    let lhs = op_bracket(
                        &|s| deformed_virasoro_mode(&ev, m, s),
                        &|s| deformed_virasoro_mode(&ev, n, s),
                        &t,
                    );
                    let mut rhs = deformed_virasoro_mode(&ev, m + n, &t).scaled(&int(m - n));
                    if m + n == 0 {
                        let coeff = int(m * m * m - m) / int(12) * c.clone();
                        rhs = rhs.add(&t.scaled(&coeff));
                    }
                    sweep.compare(&lhs, &rhs, || format!("m = {m}, n = {n}, t = {t}"));
                }
            }
        }
    }
    out.push(sweep.record(
        "log-deform/deformed-virasoro-closure",
        "[Ltilde(m), Ltilde(n)] = (m-n) Ltilde(m+n) + delta_{m+n,0} (m^3-m)/12 c, c unchanged",
        format!("lowest two strata of the top-summand module, m,n in [-2,2], c = {c}"),
    ));
    out
}

// ---------------------------------------------------------------------------
// wpp2-generators

fn suite_wpp2(cfg: &RunConfig) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let (p, pp) = match cfg.pprime {
        Some(pp) => (cfg.p, pp),
        None => (3, 2),
    };
    if pp != 2 {
        out.push(CheckRecord::fail(
            "wpp2-generators/context",
            "F = Q e^{-3 alpha/2}; H = G F; E = G^2 F",
            "the doublet charge operator is implemented for pprime = 2 only",
            format!("configured pprime = {pp}"),
        ));
        return out;
    }
    let ctx = LatticeContext::rank_one_minimal(p, pp);
    let ev = Evaluator::new(ctx.clone());
    let g = minimal_generators(&ev);

    let expected_wt = ctx.weight_of(&ctx.alpha_times(rat(-3, 2)));
    let wt = g.f.homogeneous_weight(&ctx);
    out.push(CheckRecord::verdict(
        "wpp2-generators/f-weight",
        "wt(F) = wt(e^{-3 alpha/2}) (the screening preserves weight); 15 at (p, p') = (3, 2)",
        format!("expected {expected_wt}"),
        wt.as_ref() == Some(&expected_wt) && !g.f.is_zero(),
        format!("wt(F) = {wt:?}"),
    ));

    let minus_alpha = ctx.alpha_times(int(-1));
    let charge_ok = g.f.terms().all(|(m, _)| m.point == minus_alpha);
    out.push(CheckRecord::verdict(
        "wpp2-generators/f-charge",
        "charge(F) = -alpha",
        format!("{} monomials", g.f.num_terms()),
        charge_ok && !g.f.is_zero(),
        "a monomial of F carries a different charge",
    ));

    let qf = apply_screening(&ev, ScreeningKind::Long, &g.f);
    let qbf = apply_screening(&ev, ScreeningKind::Short, &g.f);
    out.push(CheckRecord::verdict(
        "wpp2-generators/screenings-annihilate-f",
        "Q F = Qbar F = 0",
        "both screenings applied exactly",
        qf.is_zero() && qbf.is_zero(),
        format!("Q F = {qf}; Qbar F = {qbf}"),
    ));

    out.push(CheckRecord::verdict(
        "wpp2-generators/h-nonzero",
        "H = G F != 0, same weight, charge zero",
        format!(
            "wt(H) = {:?}, {} monomials",
            g.h.homogeneous_weight(&ctx),
            g.h.num_terms()
        ),
        !g.h.is_zero()
            && g.h.homogeneous_weight(&ctx) == wt
            && g.h.terms().all(|(m, _)| m.point == ctx.zero_point()),
        "H vanished or left its expected stratum",
    ));

    let e_desc = if g.e.is_zero() {
        "E = 0 at this truncation".to_string()
    } else {
        format!("E has {} monomials at charge +alpha", g.e.num_terms())
    };
    let plus_alpha = ctx.alpha_times(int(1));
    out.push(CheckRecord::verdict(
        "wpp2-generators/e-constructed",
        "E = G^2 F, charge +alpha when nonzero",
        e_desc,
        g.e.terms().all(|(m, _)| m.point == plus_alpha),
        "a monomial of E carries a different charge",
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::CheckStatus;

    fn quick_cfg(suites: &[&str]) -> RunConfig {
        RunConfig {
            suites: suites.iter().map(|s| s.to_string()).collect(),
            max_weight: int(4),
            ..RunConfig::default()
        }
    }

    #[test]
    fn unknown_suites_are_rejected_before_computation() {
        let cfg = quick_cfg(&["virasoro", "nonexistent"]);
        match run_suites(&cfg) {
            Err(VoalabError::UnknownSuite(name)) => assert_eq!(name, "nonexistent"),
            other => panic!("expected unknown-suite rejection, got {other:?}"),
        }
    }

    #[test]
    fn catalog_is_complete_and_ordered() {
        let infos = list_suites();
        assert_eq!(infos.len(), SUITE_ORDER.len());
        assert!(infos.len() >= 10);
        for (info, name) in infos.iter().zip(SUITE_ORDER) {
            assert_eq!(info.name, name);
            assert!(!info.anchor.is_empty());
        }
    }

    #[test]
    fn virasoro_suite_passes_and_reruns_identically() {
        let cfg = quick_cfg(&["virasoro"]);
        let a = run_suites(&cfg).unwrap();
        assert!(a.all_pass(), "{:?}", a.checks);
        assert_eq!(a.exit_code(), 0);
        let b = run_suites(&cfg).unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json());
    }

    #[test]
    fn screening_commute_suite_passes() {
        let cfg = quick_cfg(&["screening-commute"]);
        let report = run_suites(&cfg).unwrap();
        assert!(report.all_pass(), "{:?}", report.checks);
    }

    #[test]
    fn report_checks_follow_canonical_suite_order() {
        let cfg = quick_cfg(&["screening-commute", "virasoro"]);
        let report = run_suites(&cfg).unwrap();
        let first = &report.checks[0].name;
        assert!(first.starts_with("virasoro/"), "{first}");
        assert!(report.timings_ms.contains_key("virasoro"));
        assert!(report.timings_ms.contains_key("screening-commute"));
    }

    #[test]
    fn wpp2_suite_passes_on_the_default_context() {
        let cfg = quick_cfg(&["wpp2-generators"]);
        let report = run_suites(&cfg).unwrap();
        assert!(report.all_pass(), "{:?}", report.checks);
    }

    #[test]
    fn bare_bracket_checks_fail_with_recorded_counterexamples() {
        let cfg = quick_cfg(&["tv1-com2"]);
        let report = run_suites(&cfg).unwrap();
        let by_name = |n: &str| {
            report
                .checks
                .iter()
                .find(|c| c.name == n)
                .unwrap_or_else(|| panic!("missing check {n}"))
        };
        assert_eq!(by_name("tv1-com2/virasoro-g-translation").status, CheckStatus::Pass);
        for failing in [
            "tv1-com2/screening-g-translation",
            "tv1-com2/screening-g-zero",
            "tv1-com2/virasoro-gbar-translation",
        ] {
            let c = by_name(failing);
            assert_eq!(c.status, CheckStatus::Fail, "{failing}");
            assert!(c.counterexample.is_some(), "{failing}");
        }
        assert_eq!(by_name("tv1-com2/screening-g-corrected").status, CheckStatus::Pass);
        assert_eq!(by_name("tv1-com2/virasoro-gbar-corrected").status, CheckStatus::Pass);
        assert_eq!(report.exit_code(), 1);
    }
}
