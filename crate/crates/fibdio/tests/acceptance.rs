//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned here; a red test means the toolkit no longer
//! reproduces the published classifications.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use fibdio::analysis::cf::{cf_expand, convergents};
use fibdio::analysis::checks::{alpha_power_gap, binet_power_error, sqrt5_rational_gap};
use fibdio::analysis::matveev::matveev_constant;
use fibdio::analysis::real::HpReal;
use fibdio::analysis::{hp_const, ConstName};
use fibdio::modular::{pisano_period, pow_mod, FilterChain};
use fibdio::report::StepFlag;
use fibdio::sequences::{dominant_root, fib_u, kbona_decompose, kfib, KBonacciGenerator};
use fibdio::solvers::bounds::{bound_chain_report, dp_sweep, ChainCase};
use fibdio::solvers::consecutive::{
    solve_consecutive_powers, theta_window_min, ConsecutiveConfig,
};
use fibdio::solvers::oracle::brute_force_oracle;
use fibdio::solvers::squares::{expected_squares_k, solve_squares_k, solve_squares_k2};
use fibdio::solvers::two_powers::{solve_two_powers, TwoPowersConfig};
use fibdio::solvers::{EquationKind, EquationSpec};

fn pass(criterion: u32, what: &str) {
    println!("criterion {criterion:2}: PASS - {what}");
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fibdio"))
}

#[test]
fn criterion_01_squares_classification() {
    let start = Instant::now();
    let out = bin()
        .args(["verify-theorem", "A"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "verify-theorem A failed: {stdout}");
    assert!(stdout.contains("PASS"), "{stdout}");
    assert!(
        stdout.contains("(1, 0, 3), (1, 2, 5), (2, 0, 3), (3, 0, 6)"),
        "sporadic set mismatch: {stdout}"
    );
    assert!(
        elapsed < Duration::from_secs(10),
        "took {elapsed:?}, limit 10 s"
    );
    pass(1, "squares classification over n, d <= 200 (exact sets)");
}

#[test]
fn criterion_02_squares_k_classification() {
    let start = Instant::now();
    for k in 3..=10u32 {
        let rep = solve_squares_k(k, 60);
        let got: Vec<(u64, u64, u64)> = rep
            .solutions
            .iter()
            .map(|r| (r.tuple[0], r.tuple[1], r.m))
            .collect();
        assert_eq!(got, expected_squares_k(k), "k = {k}");
        assert!(
            rep.bounds.iter().all(|b| b.flag == Some(StepFlag::Pass)),
            "sandwich sweep failed for k = {k}"
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "took {elapsed:?}, limit 30 s"
    );
    pass(2, "k-generalized squares classification for k in 3..=10 (exact sets)");
}

#[test]
fn criterion_03_two_powers_classification() {
    let start = Instant::now();
    let tmp = std::env::temp_dir().join("fibdio-acceptance-two-powers.json");
    let out = bin()
        .args([
            "solve",
            "two-powers",
            "--nd-max",
            "168",
            "--output",
            tmp.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&tmp).unwrap()).unwrap();
    let solutions = report["solutions"].as_array().unwrap();
    assert_eq!(solutions.len(), 1, "exactly one listed solution");
    assert_eq!(solutions[0]["tuple"], serde_json::json!([1, 2, 2]));
    assert_eq!(solutions[0]["m"], 5);
    let families: Vec<String> = report["families"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap().to_string())
        .collect();
    assert!(families.iter().any(|f| f.contains("(1, 1, s, 3)")));
    assert!(families.iter().any(|f| f.contains("(n, 1, 2n+1)")));
    assert!(
        elapsed < Duration::from_secs(600),
        "took {elapsed:?}, limit 10 min"
    );
    let _ = std::fs::remove_file(&tmp);
    pass(
        3,
        "two-power classification over n + d <= 168, s <= 58057/(n+d-1): only (1,1,s,3) and (1,2,2,5)",
    );
}

#[test]
fn criterion_04_consecutive_powers_empty() {
    let start = Instant::now();
    let chain = FilterChain::default_chain();
    let rep = solve_consecutive_powers(&ConsecutiveConfig::default(), &chain);
    let elapsed = start.elapsed();
    assert!(rep.solutions.is_empty(), "expected zero solutions");
    assert!(
        rep.bounds.iter().all(|b| b.flag == Some(StepFlag::Pass)),
        "elimination bounds must certify: {:?}",
        rep.bounds
    );
    assert!(
        elapsed < Duration::from_secs(600),
        "took {elapsed:?}, limit 10 min"
    );
    pass(4, "consecutive-power default run returns zero solutions");
}

#[test]
fn criterion_05_pisano_periods() {
    for (p, period) in [
        (3_010_349u64, 62u64),
        (39_161, 110),
        (28_657, 92),
        (9_349, 38),
        (9_901, 66),
    ] {
        assert_eq!(pisano_period(p), period, "p = {p}");
    }
    pass(5, "Pisano periods of the five reference primes (exact)");
}

#[test]
fn criterion_06_gamma_star_convergents() {
    let g = hp_const(ConstName::GammaStar, 160);
    let cf = cf_expand(&g, 72).expect("160 digits certify 72 quotients");
    let convs = convergents(&cf);
    let q70 = &convs[70].q;
    let q54 = &convs[54].q;
    let e32 = BigInt::from(602u32) * BigInt::from(10u32).pow(30);
    let e27 = BigInt::from(221u32) * BigInt::from(10u32).pow(25);
    assert!(q70 > &e32, "q_70 = {q70} must exceed 6.02e32");
    assert!(q54 > &e27, "q_54 = {q54} must exceed 2.21e27");
    // exact integers, frozen from an independent high-precision run
    assert_eq!(
        q54.to_string(),
        "14014190203160504083256905054"
    );
    assert_eq!(
        q70.to_string(),
        "4185155041844294394377032919040479"
    );
    let max_a = cf.max_quotient(1, 69);
    assert_eq!(max_a, &BigInt::from(29), "max a_1..a_69");
    pass(6, "gamma* convergents: q_70 > 6.02e32, q_54 > 2.21e27, max quotient 29 (exact integers)");
}

#[test]
fn criterion_07_matveev_constants() {
    let c32 = matveev_constant(3, 2, 80);
    assert!(c32.lt_ratio(1_000_000_000_000, 1), "C(3,2) < 1e12");
    let c11 = matveev_constant(1, 1, 80);
    assert_eq!(
        c11.cmp_ratio(&BigInt::from(1_134_000), &BigInt::from(1)),
        Some(std::cmp::Ordering::Equal),
        "C(1,1) = 1134000 exactly"
    );
    // the 3.4e9 figure must be flagged as a discrepancy, not reproduced
    let chain = bound_chain_report(ChainCase::TwoPowersCase1);
    let c32_step = chain
        .steps
        .iter()
        .find(|s| s.name == "matveev-c32")
        .expect("chain reports the constant");
    assert_eq!(
        c32_step.flag,
        Some(StepFlag::Discrepancy),
        "the published 3.4e9 is two orders below the formula value"
    );
    pass(7, "Matveev constants: C(3,2) < 1e12, C(1,1) exact, 3.4e9 flagged DISCREPANCY");
}

#[test]
fn criterion_08_reduction_sweep() {
    // all 3 <= n + d <= 164 with M = 1.88e17 at the published q_99
    // (0-based index 98): eps > 0 and the s-cap at most 58057
    let m = BigInt::from(188u32) * BigInt::from(10u32).pow(15);
    let sweep = dp_sweep(3, 164, &m, 160);
    assert!(
        sweep.all_eps_positive_at_reference(),
        "eps must certify positive at the reference convergent for every n + d"
    );
    let six_m = BigInt::from(6) * &m;
    assert!(sweep.min_q() > &six_m, "q > 6M hypothesis");
    let cap = sweep.max_cap_quote_form(165);
    assert!(cap <= 58_057, "computed cap {cap} must not exceed 58057");
    // frozen from an independent high-precision run (max at n + d = 128)
    assert_eq!(cap, 57_362);
    // the full reduction cap (with eps) is dominated by the structural
    // rows near n + d = 164 and lands above the published figure
    assert_eq!(sweep.max_cap_rigorous(165), 66_286);
    pass(
        8,
        "reduction sweep 3 <= n+d <= 164, M = 1.88e17: eps > 0 everywhere, s-cap <= 58057",
    );
}

#[test]
fn criterion_09_theta_window() {
    let (min, at) = theta_window_min(120);
    assert!(
        min.gt_ratio(27, 10_000),
        "min Theta = {min} at {at:?} must exceed 2.7e-3 (certified)"
    );
    pass(9, "Theta elimination window minimum exceeds 2.7e-3 (certified interval)");
}

// ---------------------------------------------------------------------
// criterion 10: property suites
// ---------------------------------------------------------------------

#[test]
fn criterion_10a_decomposition_identity() {
    for k in 2..=6u32 {
        let mut gen = KBonacciGenerator::new(k);
        for n in 2..=40i64 {
            let expect = kfib(&mut gen, n).unwrap();
            for ell in 1..n {
                assert_eq!(
                    kbona_decompose(&mut gen, n, ell).unwrap(),
                    expect,
                    "k = {k}, n = {n}, l = {ell}"
                );
            }
        }
    }
    pass(10, "split-sum decomposition equals the generator (k <= 6, n <= 40, all splits)");
}

#[test]
fn criterion_10b_growth_inequalities() {
    // alpha_1^{n-2} <= F^{(k)}_n <= alpha_1^{n-1} for k in [2,8], n in [1,300]
    for k in 2..=8u32 {
        let root = dominant_root(k, 60);
        let mut gen = KBonacciGenerator::new(k);
        for n in 1..=300i64 {
            let f = BigInt::from(gen.get(n).unwrap());
            let lower = root.powi(n - 2);
            let upper = root.powi(n - 1);
            let one = BigInt::from(1);
            assert!(
                matches!(
                    lower.cmp_ratio(&f, &one),
                    Some(std::cmp::Ordering::Less) | Some(std::cmp::Ordering::Equal)
                ),
                "lower bound not certified at k = {k}, n = {n}"
            );
            assert!(
                matches!(
                    upper.cmp_ratio(&f, &one),
                    Some(std::cmp::Ordering::Greater) | Some(std::cmp::Ordering::Equal)
                ),
                "upper bound not certified at k = {k}, n = {n}"
            );
        }
    }
    // alpha^{n-7/4} < F_n < alpha^{n-3/2} for n in [3, 500]
    let alpha = hp_const(ConstName::Alpha, 80);
    let alpha74 = alpha.powi(7).nth_root(4); // alpha^{7/4}
    let alpha32 = alpha.powi(3).sqrt(); // alpha^{3/2}
    for n in 3..=500i64 {
        let f = HpReal::from_bigint(&BigInt::from(fib_u(n as u64)), 90);
        let lower = alpha.powi(n).div(&alpha74);
        let upper = alpha.powi(n).div(&alpha32);
        assert!(lower.certainly_lt(&f), "refined lower bound at n = {n}");
        assert!(f.certainly_lt(&upper), "refined upper bound at n = {n}");
    }
    pass(10, "growth inequalities certified over k <= 8, n <= 300 and the refined band n <= 500");
}

#[test]
fn criterion_10c_separation_grids() {
    // rational distance to sqrt 5
    for q in 1i64..=400 {
        let approx = ((q as f64) * 5f64.sqrt()).round() as i64;
        for p in (approx - 2).max(0)..=approx + 2 {
            assert!(
                sqrt5_rational_gap(&BigInt::from(p), &BigInt::from(q)),
                "p = {p}, q = {q}"
            );
        }
    }
    // alpha-power vs sqrt5-power separation
    for n in 1..=60u64 {
        for s in [1u64, 3, 5, 6, 7, 8, 9, 10, 11, 13] {
            assert_eq!(alpha_power_gap(n, s), Ok(true), "n = {n}, s = {s}");
        }
    }
    // Binet power error, both bounds
    for n in 1..=20u64 {
        for s in 1..=10u64 {
            let r = binet_power_error(n, s);
            assert!(r.exponential_bound, "n = {n}, s = {s}");
            if let Some(lin) = r.linear_bound {
                assert!(lin, "sharper bound claimed but false at n = {n}, s = {s}");
            }
        }
    }
    pass(10, "separation certificates over the sampled grids (zero violations)");
}

#[test]
fn criterion_10d_pipeline_matches_oracle() {
    let chain = FilterChain::default_chain();

    // squares, classical: pipeline vs oracle on n, d <= 30
    let rep = solve_squares_k2(30, &chain);
    let oracle = brute_force_oracle(&EquationSpec {
        kind: EquationKind::SquaresK2,
        n: (1, 30),
        d: (0, 30),
        s: (2, 2),
    })
    .unwrap();
    let mut pipeline_set: Vec<(u64, u64, u64)> = rep
        .solutions
        .iter()
        .map(|r| (r.tuple[0], r.tuple[1], r.m))
        .collect();
    // the pipeline reports the d = 1 family symbolically; expand it back
    for n in 1..=30u64 {
        pipeline_set.push((n, 1, 2 * n + 1));
    }
    pipeline_set.sort();
    let oracle_set: Vec<(u64, u64, u64)> = oracle.iter().map(|x| (x.n, x.d, x.m)).collect();
    assert_eq!(pipeline_set, oracle_set, "squares pipeline vs oracle");

    // two powers on a small box
    let config = TwoPowersConfig {
        nd_max: 20,
        s_cap_numerator: 0, // floor rule keeps s = 3 everywhere
        include_squares: false,
    };
    let rep = solve_two_powers(&config, &chain);
    let mut pipeline_set: Vec<(u64, u64, u64, u64)> = rep
        .solutions
        .iter()
        .map(|r| (r.tuple[0], r.tuple[1], r.tuple[2], r.m))
        .collect();
    pipeline_set.push((1, 1, 3, 3)); // the family, reported symbolically
    pipeline_set.sort();
    let oracle = brute_force_oracle(&EquationSpec {
        kind: EquationKind::TwoPowers,
        n: (1, 19),
        d: (1, 19),
        s: (3, 3),
    })
    .unwrap();
    let oracle_set: Vec<(u64, u64, u64, u64)> = oracle
        .iter()
        .filter(|x| x.n + x.d <= 20)
        .map(|x| (x.n, x.d, x.s.unwrap(), x.m))
        .collect();
    assert_eq!(pipeline_set, oracle_set, "two-power pipeline vs oracle");

    // k-generalized squares
    for k in 3..=6u32 {
        let rep = solve_squares_k(k, 25);
        let pipeline_set: Vec<(u64, u64, u64)> = rep
            .solutions
            .iter()
            .map(|r| (r.tuple[0], r.tuple[1], r.m))
            .collect();
        let mut oracle_set = Vec::new();
        for n in 1..=24u64 {
            let oracle = brute_force_oracle(&EquationSpec {
                kind: EquationKind::SquaresK { k },
                n: (n, n),
                d: (0, 25 - n),
                s: (2, 2),
            })
            .unwrap();
            oracle_set.extend(oracle.iter().map(|x| (x.n, x.d, x.m)));
        }
        oracle_set.sort();
        assert_eq!(pipeline_set, oracle_set, "k = {k}");
    }

    // consecutive powers: both empty
    let rep = solve_consecutive_powers(
        &ConsecutiveConfig {
            n_max: 14,
            s_max: 6,
            terminal_nd_max: 14,
        },
        &chain,
    );
    let oracle = brute_force_oracle(&EquationSpec {
        kind: EquationKind::ConsecutivePowers,
        n: (3, 14),
        d: (2, 12),
        s: (3, 6),
    })
    .unwrap();
    assert!(rep.solutions.is_empty() && oracle.is_empty());

    pass(10, "pipeline and brute-force oracle agree on every small box");
}

#[test]
fn criterion_10e_filter_soundness_on_known_solutions() {
    // every known solution tuple passes every filter chain built from the
    // default primes, in any combination
    let single_chains: Vec<FilterChain> = [9349u64, 9901, 28657, 39161]
        .iter()
        .map(|&p| FilterChain::from_primes(&[p]))
        .collect();
    let full = FilterChain::default_chain();
    let mut chains: Vec<&FilterChain> = single_chains.iter().collect();
    chains.push(&full);

    for chain in chains {
        // squares: sporadic + family
        for (n, d) in [(1u64, 0u64), (2, 0), (3, 0), (1, 2)] {
            assert!(chain.passes(|f| {
                let p = f.modulus();
                let a = f.fib_residue(n);
                let b = f.fib_residue(n + d);
                (pow_mod(a, 2, p) + pow_mod(b, 2, p)) % p
            }));
        }
        for n in 1..=50u64 {
            assert!(chain.passes(|f| {
                let p = f.modulus();
                let a = f.fib_residue(n);
                let b = f.fib_residue(n + 1);
                (pow_mod(a, 2, p) + pow_mod(b, 2, p)) % p
            }));
        }
        // two powers: (1, 1, s) for assorted s, including large exponents
        for s in [2u64, 3, 4, 7, 19, 999, 58_057] {
            assert!(chain.passes(|f| {
                let p = f.modulus();
                (pow_mod(f.fib_residue(1), s, p) + pow_mod(f.fib_residue(2), s, p)) % p
            }));
        }
    }
    pass(10, "no known solution is ever discarded by any filter chain");
}
