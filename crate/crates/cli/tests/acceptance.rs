//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `--nocapture` to see the lines for passing tests).
//!
//! Reference values come from the published tables and worked scenarios;
//! tolerances are pinned in code next to each check.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use repute_core::fuzzy::{repair_tally, reset_repair_tally};
use repute_core::ids::{BuyerId, GoodId, SellerId};
use repute_core::reputation::{
    classify, combine_overall, eta, mu, update_individual, xi, BuyerPolicy, SellerCategory,
};
use repute_core::scale::{ImportanceScale, PerformanceScale, PerformanceTerm};
use repute_core::sim::{
    run_scenario, AttackScript, BuyerSpec, Demand, GoodSpec, HonestyProfile, MarketSetup, Offer,
    SeededReputation, SellerSpec, StepWindow,
};
use repute_core::weights::FuzzyPairwiseMatrix;
use repute_core::Tfn;

use repute_cli::config::load_config;
use repute_cli::tables::{compute_table, render_table, TableKind};

const E_BASE: f64 = 1.01;
const LAMBDA: f64 = 0.001;

fn workspace_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn finish(criterion: u32, label: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {criterion} ({label}): PASS");
    } else {
        println!("criterion {criterion} ({label}): FAIL");
        panic!(
            "criterion {criterion} ({label}) failed:\n  {}",
            failures.join("\n  ")
        );
    }
}

fn check(failures: &mut Vec<String>, ok: bool, detail: String) {
    if !ok {
        failures.push(detail);
    }
}

#[test]
fn criterion_1_monotone_increase_table() {
    let started = Instant::now();
    let table = compute_table(TableKind::Table1);
    let mut failures = Vec::new();
    for (label, cells) in &table.rows {
        for (i, cell) in cells.iter().enumerate() {
            check(
                &mut failures,
                cell.within_tolerance(),
                format!(
                    "x={label} col {i}: computed {} vs reference {} (tol {})",
                    cell.computed, cell.reference, cell.tolerance
                ),
            );
        }
    }
    let elapsed = started.elapsed();
    check(
        &mut failures,
        elapsed < Duration::from_secs(1),
        format!("runtime {elapsed:?} exceeded 1 s"),
    );
    if !failures.is_empty() {
        eprintln!("{}", render_table(&table));
    }
    finish(1, "monotone increase table", failures);
}

#[test]
fn criterion_2_monotone_decrease_table() {
    let started = Instant::now();
    let table = compute_table(TableKind::Table2);
    let mut failures = Vec::new();
    for (label, cells) in &table.rows {
        for (i, cell) in cells.iter().enumerate() {
            check(
                &mut failures,
                cell.within_tolerance(),
                format!(
                    "x={label} col {i}: computed {} vs reference {} (tol {})",
                    cell.computed, cell.reference, cell.tolerance
                ),
            );
        }
    }
    // The largest-value cell is pinned to four digits.
    let cell = update_individual(0.37, -1.0, 20000.0, 0.0, 2.0, LAMBDA, E_BASE).unwrap();
    check(
        &mut failures,
        (cell - 0.1426).abs() <= 5e-4,
        format!("x=20000 beta=0 cell: {cell} vs 0.1426 (tol 5e-4)"),
    );
    let elapsed = started.elapsed();
    check(
        &mut failures,
        elapsed < Duration::from_secs(1),
        format!("runtime {elapsed:?} exceeded 1 s"),
    );
    finish(2, "monotone decrease table", failures);
}

#[test]
fn criterion_3_reinforcement_chain() {
    // Chain: price 1500, pair experience 79 transactions (alpha 0.79,
    // beta 0.079), prior overall 0.57, positive surprise, shared 0.56.
    let mut failures = Vec::new();
    let e = eta(1500.0, LAMBDA, E_BASE).unwrap();
    check(
        &mut failures,
        (e - 0.014815).abs() <= 1e-5,
        format!("eta: {e} vs 0.014815 (tol 1e-5)"),
    );
    let m = mu(e, 0.079);
    check(
        &mut failures,
        (m - 0.01373).abs() <= 1e-4,
        format!("mu: {m} vs 0.01373 (tol 1e-4)"),
    );
    let r = update_individual(0.57, 1.0, 1500.0, 0.079, 2.0, LAMBDA, E_BASE).unwrap();
    check(
        &mut failures,
        (r - 0.576).abs() <= 5e-4,
        format!("r: {r} vs 0.576 (tol 5e-4)"),
    );
    let overall = combine_overall(r, Some(0.56), 0.79);
    // Note: the reference figure 0.572 truncates the exact blend
    // 0.79*0.576 + 0.21*0.56 = 0.57264; the strict tolerance is kept
    // rather than loosened, so this check documents the discrepancy.
    check(
        &mut failures,
        (overall - 0.572).abs() <= 5e-4,
        format!("overall: {overall} vs 0.572 (tol 5e-4)"),
    );
    finish(3, "reinforcement chain", failures);
}

#[test]
fn criterion_4_penalty_chain() {
    // Chain: price 6750, 45 prior transactions (alpha 0.45, beta 0.045),
    // gamma 3, prior overall 0.51, negative surprise, shared 0.54.
    let mut failures = Vec::new();
    let e = eta(6750.0, LAMBDA, E_BASE).unwrap();
    check(
        &mut failures,
        (e - 0.064959).abs() <= 1e-5,
        format!("eta: {e} vs 0.064959 (tol 1e-5)"),
    );
    let x = xi(e, 0.045, 3.0).unwrap();
    check(
        &mut failures,
        (x - 0.18649).abs() <= 1e-4,
        format!("xi: {x} vs 0.18649 (tol 1e-4)"),
    );
    let r = update_individual(0.51, -1.0, 6750.0, 0.045, 3.0, LAMBDA, E_BASE).unwrap();
    check(
        &mut failures,
        (r - 0.4186).abs() <= 5e-4,
        format!("r: {r} vs 0.4186 (tol 5e-4)"),
    );
    let overall = combine_overall(r, Some(0.54), 0.45);
    check(
        &mut failures,
        (overall - 0.4854).abs() <= 5e-4,
        format!("overall: {overall} vs 0.4854 (tol 5e-4)"),
    );
    let policy = BuyerPolicy::<f64> {
        reputation_threshold: 0.5,
        disreputation_threshold: 0.25,
        gamma: 3.0,
        ..BuyerPolicy::default()
    };
    let category = classify(overall, &policy, SellerCategory::Reputed, true);
    check(
        &mut failures,
        category != SellerCategory::Reputed,
        format!("seller stayed reputed at {overall} despite threshold 0.5"),
    );
    finish(4, "penalty chain", failures);
}

/// One-transaction market reproducing a stuffing-experiment row: the victim
/// buys from the over-delivering target while script-declared colluders
/// stuff the shared aggregate.
fn stuffing_market(prior: f64, transactions: u32, x: f64, stuffed: f64) -> MarketSetup {
    let victim_policy = BuyerPolicy {
        reputation_threshold: 0.4,
        disreputation_threshold: 0.18,
        rho_initial: 0.0,
        rho_min: 0.0,
        ..BuyerPolicy::default()
    };
    MarketSetup {
        importance_scale: ImportanceScale::default(),
        performance_scale: PerformanceScale::default(),
        goods: vec![GoodSpec {
            name: "g".into(),
            attributes: vec!["Q".into()],
            importance: FuzzyPairwiseMatrix::from_upper_triangle(1, &[]).unwrap(),
        }],
        buyers: vec![
            BuyerSpec {
                name: "b4".into(),
                policy: victim_policy,
                seeded_reputation: vec![SeededReputation {
                    seller: SellerId(0),
                    overall: prior,
                    transactions,
                }],
                seeded_weights: Vec::new(),
            },
            BuyerSpec {
                name: "c1".into(),
                policy: BuyerPolicy::default(),
                seeded_reputation: Vec::new(),
                seeded_weights: Vec::new(),
            },
        ],
        sellers: vec![SellerSpec {
            name: "s2".into(),
            offers: vec![Offer {
                good: GoodId(0),
                ratings: vec![PerformanceTerm::Vh],
                price: x,
                honesty: HonestyProfile::DegradeByLevels(-1),
            }],
        }],
        schedule: vec![Demand {
            step: 0,
            buyer: BuyerId(0),
            good: GoodId(0),
        }],
        attacks: vec![AttackScript::BallotStuffing {
            seller: SellerId(0),
            colluders: vec![BuyerId(1)],
            level: stuffed,
            window: StepWindow {
                from_step: 0,
                to_step: 0,
            },
            min_transactions: None,
        }],
        steps: 1,
    }
}

#[test]
fn criterion_5_stuffing_experiment() {
    // (prior, transactions, x, stuffed, reference overall, reference effect,
    //  checked) -- the 95-transaction row joins the ordering checks only.
    let rows = [
        (0.47, 20u32, 12000.0, 0.94, 0.858, 62.29, true),
        (0.44, 50, 1500.0, 0.93, 0.689, 53.83, true),
        (0.48, 75, 5300.0, 0.95, 0.616, 22.01, true),
        (0.51, 95, 3000.0, 0.94, 0.565, 3.98, false),
        (0.46, 100, 2700.0, 0.95, 0.473, 0.0, true),
    ];
    let mut failures = Vec::new();
    let mut overalls = Vec::new();
    let mut effects = Vec::new();
    for (prior, transactions, x, stuffed, ref_overall, ref_effect, checked) in rows {
        let setup = stuffing_market(prior, transactions, x, stuffed);
        let out = run_scenario(&setup, 1).expect("stuffing market runs");
        let t = &out.transcript[0];
        let effect = out.metrics.bs_effects[0].effect.unwrap_or(0.0);
        overalls.push(t.or_next);
        effects.push(effect);
        if checked {
            check(
                &mut failures,
                (t.or_next - ref_overall).abs() <= 5e-3,
                format!(
                    "{transactions} prior transactions: overall {} vs {ref_overall} (tol 5e-3)",
                    t.or_next
                ),
            );
            check(
                &mut failures,
                (effect - ref_effect).abs() <= 0.5,
                format!(
                    "{transactions} prior transactions: effect {effect} vs {ref_effect} (tol 0.5)"
                ),
            );
        }
    }
    check(
        &mut failures,
        overalls.windows(2).all(|w| w[0] > w[1]),
        format!("stuffed overall values must fall row over row: {overalls:?}"),
    );
    check(
        &mut failures,
        effects.windows(2).all(|w| w[0] >= w[1]),
        format!("stuffing effect must never increase with experience: {effects:?}"),
    );
    check(
        &mut failures,
        effects.last().copied() == Some(0.0),
        format!("at full experience the stuffing effect must vanish: {effects:?}"),
    );
    finish(5, "stuffing experiment", failures);
}

#[test]
fn criterion_6_weeding_out() {
    let loaded = load_config(&workspace_config("weedout.cfg")).expect("weedout config loads");
    let started = Instant::now();
    let out = run_scenario(&loaded.setup, loaded.seed).expect("weedout scenario runs");
    let elapsed = started.elapsed();

    let mut failures = Vec::new();
    check(
        &mut failures,
        elapsed < Duration::from_secs(5),
        format!("runtime {elapsed:?} exceeded 5 s for 1000 steps"),
    );

    let seller_id = |name: &str| {
        SellerId(
            out.names.sellers.iter().position(|s| s == name).unwrap() as u32
        )
    };
    let cheaters = [seller_id("c1"), seller_id("c2")];
    let honest: Vec<SellerId> = ["h1", "h2", "h3", "h4"].iter().map(|n| seller_id(n)).collect();
    let n_buyers = out.names.buyers.len() as u32;

    for &cheater in &cheaters {
        for b in 0..n_buyers {
            let buyer = BuyerId(b);
            let pair: Vec<_> = out
                .transcript
                .iter()
                .filter(|t| t.buyer == buyer && t.seller == cheater)
                .collect();
            let dr_position = pair
                .iter()
                .position(|t| t.category_after == SellerCategory::DisReputed);
            match dr_position {
                None => failures.push(format!(
                    "buyer {b}: cheater {cheater} never became dis-reputed"
                )),
                Some(pos) => {
                    let t = pair[pos];
                    check(
                        &mut failures,
                        pos + 1 <= 10,
                        format!(
                            "buyer {b}: cheater {cheater} took {} own transactions (> 10)",
                            pos + 1
                        ),
                    );
                    check(
                        &mut failures,
                        t.or_next < 0.15,
                        format!(
                            "buyer {b}: cheater {cheater} dis-reputed at {} (not below 0.15)",
                            t.or_next
                        ),
                    );
                    check(
                        &mut failures,
                        pair.len() == pos + 1,
                        format!(
                            "buyer {b}: cheater {cheater} received {} orders after dis-reputation",
                            pair.len() - pos - 1
                        ),
                    );
                }
            }
        }
    }

    for &h in &honest {
        for b in 0..n_buyers {
            let buyer = BuyerId(b);
            let series: Vec<f64> = out
                .series
                .iter()
                .filter(|r| r.buyer == buyer && r.seller == h)
                .map(|r| r.overall)
                .collect();
            check(
                &mut failures,
                series.windows(2).all(|w| w[1] >= w[0]),
                format!("buyer {b}: honest seller {h} reputation decreased"),
            );
        }
    }
    finish(6, "weeding out", failures);
}

#[test]
fn criterion_7_penalty_asymmetry_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA5);
    let gamma = 2.0;
    let mut failures = Vec::new();
    for i in 0..1000 {
        let or: f64 = rng.gen_range(0.3..0.95);
        let x: f64 = rng.gen_range(0.0..20000.0);
        let beta: f64 = rng.gen_range(0.0..1.0);
        // The magnitudes are the deltas the two update equations apply.
        let e = eta(x, LAMBDA, E_BASE).unwrap();
        let increase = mu(e, beta) * (1.0 - or);
        let decrease = xi(e, beta, gamma).unwrap() * (1.0 - or);
        // They must be exactly what the update path applies.
        let up = update_individual(or, 1.0, x, beta, gamma, LAMBDA, E_BASE).unwrap();
        let down = update_individual(or, -1.0, x, beta, gamma, LAMBDA, E_BASE).unwrap();
        if up != or + increase || down != or - decrease {
            failures.push(format!(
                "sample {i}: update path disagrees with its own deltas (or={or} x={x} beta={beta})"
            ));
        }
        let scale = (gamma * increase).abs().max(f64::MIN_POSITIVE);
        if (decrease - gamma * increase).abs() > 1e-12 * scale {
            failures.push(format!(
                "sample {i}: or={or} x={x} beta={beta}: decrease {decrease} vs gamma*increase {}",
                gamma * increase
            ));
            if failures.len() > 5 {
                break;
            }
        }
    }
    finish(7, "penalty asymmetry sweep", failures);
}

fn random_quad(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Tfn {
    let mut v = [0.0; 4];
    for x in &mut v {
        *x = rng.gen_range(lo..hi);
    }
    v.sort_by(f64::total_cmp);
    Tfn::new(v[0], v[1], v[2], v[3]).unwrap()
}

/// Random quadruple over the values linguistic scales take (small integers
/// and their reciprocals), where reciprocal round-trips are bit-exact.
fn random_scale_quad(rng: &mut ChaCha8Rng) -> Tfn {
    let mut v = [0.0; 4];
    for x in &mut v {
        let n = rng.gen_range(1u32..=13) as f64;
        *x = if rng.gen::<bool>() { 1.0 / n } else { n };
    }
    v.sort_by(f64::total_cmp);
    Tfn::new(v[0], v[1], v[2], v[3]).unwrap()
}

#[test]
fn criterion_8_fuzzy_algebra_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF0221);
    let mut failures = Vec::new();
    let cases = 10_000;

    let mut identity_failures = 0u32;
    let mut middle_failures = 0u32;
    let mut involution_failures = 0u32;
    let mut linearity_failures = 0u32;
    for _ in 0..cases {
        let a = random_quad(&mut rng, 0.0, 1000.0);
        let b = random_quad(&mut rng, 0.0, 1000.0);
        if a.approx_mul(&Tfn::one()) != a {
            identity_failures += 1;
        }
        let p = a.approx_mul(&b);
        if p.a2() != a.a2() * b.a2() || p.a3() != a.a3() * b.a3() {
            middle_failures += 1;
        }
        let s = random_scale_quad(&mut rng);
        if s.inverse().unwrap().inverse().unwrap() != s {
            involution_failures += 1;
        }
        let sum_coa = (a + b).coa();
        let coa_sum = a.coa() + b.coa();
        let k: f64 = rng.gen_range(0.0..50.0);
        let scaled_coa = a.scale(k).unwrap().coa();
        let tol = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
        if !tol(sum_coa, coa_sum) || !tol(scaled_coa, k * a.coa()) {
            linearity_failures += 1;
        }
    }
    check(
        &mut failures,
        identity_failures == 0,
        format!("identity-element exactness: {identity_failures}/{cases} failures"),
    );
    check(
        &mut failures,
        middle_failures == 0,
        format!("middle-component exactness: {middle_failures}/{cases} failures"),
    );
    check(
        &mut failures,
        involution_failures == 0,
        format!("inverse involution: {involution_failures}/{cases} failures"),
    );
    check(
        &mut failures,
        linearity_failures == 0,
        format!("centroid linearity: {linearity_failures}/{cases} failures"),
    );

    // Repair must never fire on scale-derived inputs: all anchor products
    // plus every product in the worked weighting pipeline.
    reset_repair_tally();
    let importance = ImportanceScale::<f64>::default();
    let performance = PerformanceScale::<f64>::default();
    let mut anchors: Vec<Tfn> = Vec::new();
    for t in repute_core::scale::ImportanceTerm::ALL {
        anchors.push(importance.quadruple(t));
        anchors.push(importance.quadruple(t).inverse().unwrap());
    }
    for t in PerformanceTerm::ALL {
        anchors.push(performance.quadruple(t));
    }
    for a in &anchors {
        for b in &anchors {
            let _ = a.approx_mul(b);
        }
    }
    check(
        &mut failures,
        repair_tally() == 0,
        format!("repair fired {} times on scale anchors", repair_tally()),
    );
    finish(8, "fuzzy algebra suite", failures);
}

#[test]
fn criterion_9_transcript_determinism() {
    let loaded = load_config(&workspace_config("case_study.cfg")).expect("case study loads");
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    repute_cli::commands::run_single(&workspace_config("case_study.cfg"), 42, &first).unwrap();
    repute_cli::commands::run_single(&workspace_config("case_study.cfg"), 42, &second).unwrap();
    let a = std::fs::read(first.join("transcript.csv")).unwrap();
    let b = std::fs::read(second.join("transcript.csv")).unwrap();
    let mut failures = Vec::new();
    check(
        &mut failures,
        a == b,
        "transcript CSVs differ between identical runs".to_string(),
    );
    check(
        &mut failures,
        !a.is_empty() && loaded.setup.steps == 8,
        "case study produced no transcript".to_string(),
    );
    finish(9, "transcript determinism", failures);
}
