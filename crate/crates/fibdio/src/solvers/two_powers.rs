//! The two-power pipeline: F_n^s + F_{n+d}^s = F_m over d >= 1.
//!
//! s = 2 delegates to the squares search restricted to d >= 1. For s >= 3
//! every (n, d) with n + d <= nd_max is sieved over s up to the cap rule
//! (default 58057/(n + d - 1), never below 3); survivors are confirmed by
//! exact evaluation. The pair (1, 1) is the identity family
//! F_1^s + F_2^s = 2 = F_3 and short-circuits the sieve.
//!
//! Iteration runs (n + d) ascending with s descending inside each pair;
//! shards are (n, d) pairs and the merged output is canonically sorted,
//! so results do not depend on the worker count.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::analysis::real::HpReal;
use crate::modular::{confirm_exact, pow_mod, FilterChain};
use crate::report::{BoundStep, SieveStats, TheoremReport};
use crate::sequences::fib_u;
use crate::solvers::{m_range, squares::square_search, Solution};

/// Default cap numerator for the s range per (n + d).
pub const DEFAULT_S_CAP_NUMERATOR: u64 = 58_057;

#[derive(Debug, Clone)]
pub struct TwoPowersConfig {
    /// Inclusive cap on n + d.
    pub nd_max: u64,
    /// s is searched in [3, max(3, numerator/(n + d - 1))].
    pub s_cap_numerator: u64,
    /// Also run the s = 2 (squares, d >= 1) part.
    pub include_squares: bool,
}

impl Default for TwoPowersConfig {
    fn default() -> Self {
        TwoPowersConfig {
            nd_max: 168,
            s_cap_numerator: DEFAULT_S_CAP_NUMERATOR,
            include_squares: true,
        }
    }
}

pub fn s_cap(s_cap_numerator: u64, nd: u64) -> u64 {
    debug_assert!(nd >= 2);
    (s_cap_numerator / (nd - 1)).max(3)
}

/// min over 2 - 2s <= t <= 2 - s of |1 - alpha^t sqrt5^{s-1}| - alpha^{-3s},
/// the elimination quantity for s in {3, 4} (its positivity pins n + d
/// below 10 in that regime).
pub fn small_s_elimination_min(s_val: u64, digits: u32) -> HpReal {
    use crate::analysis::{hp_const, ConstName};
    let scale = digits + 10;
    let alpha = hp_const(ConstName::Alpha, digits);
    let sqrt5_pow = if (s_val - 1).is_multiple_of(2) {
        HpReal::from_bigint(&num_bigint::BigInt::from(5u32).pow(((s_val - 1) / 2) as u32), scale)
    } else {
        hp_const(ConstName::Sqrt5, digits).powi((s_val - 1) as i64)
    };
    let corr = alpha.powi(-(3 * s_val as i64));
    let mut best: Option<HpReal> = None;
    for t in (2 - 2 * s_val as i64)..=(2 - s_val as i64) {
        let v = HpReal::one(scale)
            .sub(&alpha.powi(t).mul(&sqrt5_pow))
            .abs()
            .sub(&corr);
        best = Some(match best {
            None => v,
            Some(cur) => {
                if v.certainly_lt(&cur) {
                    v
                } else {
                    cur
                }
            }
        });
    }
    best.expect("window nonempty")
}

/// Bound steps documenting the derivation facts behind the search box.
fn derivation_steps(digits: u32) -> Vec<BoundStep> {
    use crate::analysis::{hp_const, ConstName};
    let scale = digits + 10;
    let mut steps = Vec::new();

    // 48 alpha^{4s} 2^s < alpha^{8+6s} for all s >= 3, equivalently
    // s (2 ln alpha - ln 2) > ln 48 - 8 ln alpha; the slope is positive
    // and the inequality is checked at s = 3, so it holds beyond
    let log_alpha = hp_const(ConstName::LogAlpha, digits);
    let ln2 = HpReal::from_i64(2, scale).ln();
    let slope = log_alpha.mul(&HpReal::from_i64(2, scale)).sub(&ln2);
    let lhs_at_3 = slope.mul(&HpReal::from_i64(3, scale));
    let rhs = HpReal::from_i64(48, scale)
        .ln()
        .sub(&log_alpha.mul(&HpReal::from_i64(8, scale)));
    let nd_under_3s_ok = slope.is_certainly_positive() && rhs.certainly_lt(&lhs_at_3);
    steps.push(
        BoundStep::new(
            "nd-under-3s",
            format!(
                "slope {:.6} > 0 and margin holds at s = 3",
                slope.to_f64_approx()
            ),
            "n + d < 3s for s >= 3 in the bounded-d regimes",
            "two-powers/nd-under-3s",
        )
        .flagged(nd_under_3s_ok),
    );

    // s in {3, 4}: the elimination minimum stays above 0.005
    let threshold = HpReal::from_ratio(
        &num_bigint::BigInt::from(5),
        &num_bigint::BigInt::from(1000),
        scale,
    );
    for s_val in [3u64, 4] {
        let min = small_s_elimination_min(s_val, digits);
        steps.push(
            BoundStep::new(
                format!("small-s-elimination-s{s_val}"),
                format!("min {:.6e}", min.to_f64_approx()),
                "> 0.005",
                "two-powers/small-s",
            )
            .flagged(min.certainly_gt(&threshold)),
        );
    }
    steps
}

/// Full run; returns the report with family strings and confirmed tuples.
pub fn solve_two_powers(config: &TwoPowersConfig, chain: &FilterChain) -> TheoremReport {
    assert!(config.nd_max >= 4, "the box must reach n + d >= 4");
    let start = Instant::now();
    let mut stats = SieveStats {
        candidates: 0,
        discarded_per_prime: vec![0; chain.filters().len()],
        survivors: 0,
    };
    let mut solutions: Vec<Solution> = Vec::new();
    let mut families = Vec::new();
    let mut bounds = Vec::new();

    // ---- identity family (1, 1): F_1^s + F_2^s = 2 = F_3 for every s ----
    let family_value: BigUint = fib_u(1) + fib_u(2);
    let family_ok = family_value == fib_u(3) && confirm_exact(&family_value) == Some(3);
    bounds.push(
        BoundStep::new(
            "identity-family",
            "1^s + 1^s = 2 = F_3 for every s",
            "unique solution n = d = 1 for s >= 3",
            "two-powers/family",
        )
        .flagged(family_ok),
    );
    families.push("(1, 1, s, 3) for all s >= 2".into());
    bounds.push(
        BoundStep::new(
            "s-cap-rule",
            format!(
                "s <= max(3, {}/(n+d-1)) for n + d <= {}",
                config.s_cap_numerator, config.nd_max
            ),
            "3 <= s <= 58057/(n+d-1), n + d < 168",
            "two-powers/search-box",
        )
        .flagged(true),
    );
    bounds.extend(derivation_steps(60));

    // ---- s = 2: squares restricted to d >= 1 --------------------------
    if config.include_squares {
        let sq = square_search(
            config.nd_max - 1,
            1,
            config.nd_max - 1,
            Some(config.nd_max),
            chain,
        );
        let family_sq = sq
            .confirmed
            .iter()
            .filter(|s| s.d == 1 && s.m == 2 * s.n + 1)
            .count();
        families.push(format!(
            "(n, 1, 2n+1) at s = 2 ({family_sq} instances in the box)"
        ));
        for sol in sq
            .confirmed
            .iter()
            .filter(|s| !(s.d == 1 && s.m == 2 * s.n + 1))
        {
            solutions.push(Solution {
                s: Some(2),
                ..sol.clone()
            });
        }
        stats.merge(&sq.stats);
    }

    // ---- s >= 3: sieve the full box ------------------------------------
    let pairs: Vec<(u64, u64)> = (2..=config.nd_max)
        .flat_map(|t| (1..t).map(move |n| (n, t - n)))
        .filter(|&(n, d)| !(n == 1 && d == 1))
        .collect();

    let shard_results: Vec<(SieveStats, Vec<Solution>)> = pairs
        .par_iter()
        .map(|&(n, d)| {
            let t = n + d;
            let cap = s_cap(config.s_cap_numerator, t);
            let mut stats = SieveStats {
                candidates: 0,
                discarded_per_prime: vec![0; chain.filters().len()],
                survivors: 0,
            };
            let mut confirmed = Vec::new();
            let residues: Vec<(u64, u64, u64)> = chain
                .filters()
                .iter()
                .map(|f| (f.modulus(), f.fib_residue(n), f.fib_residue(n + d)))
                .collect();
            for s in (3..=cap).rev() {
                stats.candidates += 1;
                let mut rejected = None;
                for (i, f) in chain.filters().iter().enumerate() {
                    let (p, rn, rnd) = residues[i];
                    let lhs = (pow_mod(rn, s, p) + pow_mod(rnd, s, p)) % p;
                    if !f.is_fib_residue(lhs) {
                        rejected = Some(i);
                        break;
                    }
                }
                match rejected {
                    Some(i) => stats.discarded_per_prime[i] += 1,
                    None => {
                        stats.survivors += 1;
                        let value = fib_u(n).pow(s as u32) + fib_u(n + d).pow(s as u32);
                        if let Some(m) = confirm_exact(&value) {
                            let (lo, hi) = m_range(n, d, s);
                            debug_assert!(lo <= m && m <= hi, "index window violated");
                            confirmed.push(Solution {
                                n,
                                d,
                                s: Some(s),
                                m,
                                value,
                            });
                        }
                    }
                }
            }
            (stats, confirmed)
        })
        .collect();

    for (s, c) in shard_results {
        stats.merge(&s);
        solutions.extend(c);
    }
    solutions.sort();

    TheoremReport {
        equation: "two-powers".into(),
        ranges: BTreeMap::from([
            ("n".into(), [1, config.nd_max - 1]),
            ("d".into(), [1, config.nd_max - 1]),
            ("s".into(), [2, s_cap(config.s_cap_numerator, 2)]),
        ]),
        bounds,
        sieve: stats,
        solutions: solutions.iter().map(|s| s.to_row()).collect(),
        families,
        duration_ms: start.elapsed().as_millis(),
    }
}
