//! Numeric verification of the published bound chains.
//!
//! Every step recomputes one inequality of a derivation chain and pairs
//! the computed value with the published one. A step never asserts
//! equality with a rounded constant; it checks that the computed bound
//! does not exceed the published one in the direction that matters, and
//! flags DISCREPANCY otherwise. Verified discrepancies are reported, not
//! silently overridden.
//!
//! Convergent indexing: this crate counts convergents from 0 (q_0 = 1 for
//! a 0 leading quotient). The published reduction tables count from 1, so
//! their "q_99" is index 98 here; the published values for min/max q and
//! the epsilon signs match exactly under that shift.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::analysis::cf::{cf_expand, convergents, Convergent};
use crate::analysis::real::HpReal;
use crate::analysis::reduction::{dp_reduce_with_cf, fib_power_instance};
use crate::analysis::{hp_const, matveev, ConstName};
use crate::report::{BoundChainReport, BoundStep};
use crate::solvers::consecutive::{tail_expression_min, theta_window_min};

/// 0-based convergent index matching the published q_99 tables.
pub const REFERENCE_Q_INDEX: usize = 98;

/// Working precision for the chains (certified digits).
pub const CHAIN_DIGITS: u32 = 120;
const CHAIN_GUARD: u32 = 40;

fn scale() -> u32 {
    CHAIN_DIGITS + CHAIN_GUARD
}

/// The five verification chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainCase {
    TwoPowersCase1,
    TwoPowersCase2,
    TwoPowersCase3,
    TwoPowersCase4,
    ConsecutivePowers,
}

impl ChainCase {
    pub fn name(self) -> &'static str {
        match self {
            ChainCase::TwoPowersCase1 => "two-powers/case-1",
            ChainCase::TwoPowersCase2 => "two-powers/case-2",
            ChainCase::TwoPowersCase3 => "two-powers/case-3",
            ChainCase::TwoPowersCase4 => "two-powers/case-4",
            ChainCase::ConsecutivePowers => "consecutive-powers",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text.to_ascii_lowercase().as_str() {
            "case1" | "two-powers-case1" | "thm2-case1" => Some(ChainCase::TwoPowersCase1),
            "case2" | "two-powers-case2" | "thm2-case2" => Some(ChainCase::TwoPowersCase2),
            "case3" | "two-powers-case3" | "thm2-case3" => Some(ChainCase::TwoPowersCase3),
            "case4" | "two-powers-case4" | "thm2-case4" => Some(ChainCase::TwoPowersCase4),
            "consecutive" | "thm3" => Some(ChainCase::ConsecutivePowers),
            _ => None,
        }
    }
}

pub fn bound_chain_report(case: ChainCase) -> BoundChainReport {
    let steps = match case {
        ChainCase::TwoPowersCase1 => case1_steps(),
        ChainCase::TwoPowersCase2 => case2_steps(),
        ChainCase::TwoPowersCase3 => case3_steps(),
        ChainCase::TwoPowersCase4 => case4_steps(),
        ChainCase::ConsecutivePowers => consecutive_steps(),
    };
    BoundChainReport {
        case: case.name().to_string(),
        steps,
    }
}

// ---------------------------------------------------------------------
// shared pieces
// ---------------------------------------------------------------------

/// Per-(n + d) data of a reduction sweep at the reference index.
pub struct DpSweepRow {
    pub nd: u64,
    pub q: BigInt,
    /// certified lower bound of ||mu q|| at the reference convergent
    pub mu_norm_lo: BigRational,
    /// certified upper bound of M ||gamma q||
    pub m_gamma_norm_hi: BigRational,
    /// eps certified positive at the reference convergent itself
    pub eps_positive_at_reference: bool,
    /// walked outcome (first convergent from the reference with eps > 0)
    pub walked_index: usize,
    pub walked_q: BigInt,
    pub walked_eps_lo: BigRational,
}

pub struct DpSweep {
    pub rows: Vec<DpSweepRow>,
    pub m: BigInt,
}

/// Runs the reduction for every n + d in [nd_lo, nd_hi] with the given M,
/// evaluating at the reference convergent index and walking if needed.
/// Precision doubles on exhaustion, up to the standard retry budget.
pub fn dp_sweep(nd_lo: u64, nd_hi: u64, m: &BigInt, digits: u32) -> DpSweep {
    use rayon::prelude::*;
    let rows: Vec<DpSweepRow> = (nd_lo..=nd_hi)
        .into_par_iter()
        .map(|nd| {
            let mut d = digits;
            for _ in 0..=crate::analysis::MAX_PRECISION_RETRIES {
                if let Some(row) = dp_sweep_row(nd, m, d) {
                    return row;
                }
                d *= 2;
            }
            panic!("reduction at n + d = {nd} failed even at {d} digits");
        })
        .collect();
    DpSweep {
        rows,
        m: m.clone(),
    }
}

fn dp_sweep_row(nd: u64, m: &BigInt, digits: u32) -> Option<DpSweepRow> {
    // the B root only affects the final cap, not the walk; fix 165 here
    // and rescale caps per B afterwards
    let inst = fib_power_instance(nd, m, 165, digits);
    let cf = cf_expand(&inst.gamma, REFERENCE_Q_INDEX + 14).ok()?;
    let convs = convergents(&cf);
    let c = &convs[REFERENCE_Q_INDEX];
    let s = inst.gamma.scale();
    let q_ball = HpReal::from_bigint(&c.q, s);
    let mu_q = inst.mu.mul(&q_ball).nearest_int_dist();
    let gamma_q = inst.gamma.mul(&q_ball).nearest_int_dist();
    let m_ball = HpReal::from_bigint(m, s);
    let eps = mu_q.sub(&m_ball.mul(&gamma_q));
    let out = dp_reduce_with_cf(&inst, &cf, REFERENCE_Q_INDEX).ok()?;
    Some(DpSweepRow {
        nd,
        q: c.q.clone(),
        mu_norm_lo: mu_q.lo_ratio(),
        m_gamma_norm_hi: m_ball.mul(&gamma_q).hi_ratio(),
        eps_positive_at_reference: eps.is_certainly_positive(),
        walked_index: out.convergent_index,
        walked_q: out.q,
        walked_eps_lo: out.epsilon_lo,
    })
}

impl DpSweep {
    pub fn min_q(&self) -> &BigInt {
        self.rows.iter().map(|r| &r.q).min().expect("nonempty sweep")
    }

    pub fn max_q(&self) -> &BigInt {
        self.rows.iter().map(|r| &r.q).max().expect("nonempty sweep")
    }

    pub fn all_eps_positive_at_reference(&self) -> bool {
        self.rows.iter().all(|r| r.eps_positive_at_reference)
    }

    /// max over rows of ceil(log(2 q)/log B): the published cap form.
    pub fn max_cap_quote_form(&self, b_root: u32) -> u64 {
        let log_b = log_b_ball(b_root);
        self.rows
            .iter()
            .map(|r| {
                let arg = HpReal::from_bigint(&(BigInt::from(2) * &r.q), scale());
                ceil_hi(&arg.ln().div(&log_b))
            })
            .max()
            .unwrap()
    }

    /// max over rows of ceil(log(2 q / eps)/log B): the full reduction cap.
    pub fn max_cap_rigorous(&self, b_root: u32) -> u64 {
        let log_b = log_b_ball(b_root);
        self.rows
            .iter()
            .map(|r| {
                let num = BigInt::from(2) * &r.walked_q * r.walked_eps_lo.denom();
                let arg = HpReal::from_ratio(&num, r.walked_eps_lo.numer(), scale());
                ceil_hi(&arg.ln().div(&log_b))
            })
            .max()
            .unwrap()
    }

    pub fn min_mu_norm(&self) -> &BigRational {
        self.rows
            .iter()
            .map(|r| &r.mu_norm_lo)
            .min()
            .expect("nonempty sweep")
    }

    pub fn max_m_gamma_norm(&self) -> &BigRational {
        self.rows
            .iter()
            .map(|r| &r.m_gamma_norm_hi)
            .max()
            .expect("nonempty sweep")
    }

    pub fn min_eps(&self) -> &BigRational {
        self.rows
            .iter()
            .map(|r| &r.walked_eps_lo)
            .min()
            .expect("nonempty sweep")
    }
}

fn log_b_ball(b_root: u32) -> HpReal {
    let s = scale();
    HpReal::from_ratio(&BigInt::from(3), &BigInt::from(2), s)
        .ln()
        .div(&HpReal::from_i64(b_root as i64, s))
}

fn ceil_hi(x: &HpReal) -> u64 {
    x.hi_ratio().ceil().to_integer().to_u64().expect("fits u64")
}

fn big(v: u64, exp10: u32) -> BigInt {
    BigInt::from(v) * BigInt::from(10u32).pow(exp10)
}

fn approx(r: &BigRational) -> f64 {
    let num = r.numer().to_f64().unwrap_or(f64::NAN);
    let den = r.denom().to_f64().unwrap_or(f64::NAN);
    if num.is_finite() && den.is_finite() && den != 0.0 {
        return num / den;
    }
    // shift both sides into f64 range by trimming common decimal digits
    let (ns, ds) = (r.numer().to_string(), r.denom().to_string());
    let trim = ns.len().min(ds.len()).saturating_sub(15);
    let nh: f64 = ns[..ns.len() - trim].parse().unwrap_or(f64::NAN);
    let dh: f64 = ds[..ds.len() - trim].parse().unwrap_or(f64::NAN);
    nh / dh
}

/// gamma* = log(sqrt 5)/log(alpha) convergents with the certified prefix.
fn gamma_star_convergents(count: usize) -> Vec<Convergent> {
    let g = hp_const(ConstName::GammaStar, CHAIN_DIGITS + CHAIN_GUARD);
    let cf = cf_expand(&g, count).expect("chain digits certify the prefix");
    convergents(&cf)
}

fn gamma_star_max_quotient(lo: usize, hi: usize) -> BigInt {
    let g = hp_const(ConstName::GammaStar, CHAIN_DIGITS + CHAIN_GUARD);
    let cf = cf_expand(&g, hi + 1).expect("chain digits certify the prefix");
    cf.max_quotient(lo, hi).clone()
}

/// Certified check: does `value < threshold` hold, where both are balls.
fn lt(value: &HpReal, threshold: &HpReal) -> bool {
    value.certainly_lt(threshold)
}

/// The Matveev preamble shared by the two-power chains.
fn matveev_preamble() -> Vec<BoundStep> {
    let c32 = matveev::matveev_constant(3, 2, CHAIN_DIGITS);
    let c22 = matveev::matveev_constant(2, 2, CHAIN_DIGITS);
    let c11 = matveev::matveev_constant(1, 1, CHAIN_DIGITS);
    let e12 = HpReal::from_bigint(&big(1, 12), scale());
    let e10 = HpReal::from_bigint(&big(1, 10), scale());
    let claimed_34e9 = HpReal::from_bigint(&big(34, 8), scale());
    vec![
        BoundStep::new(
            "matveev-c32",
            fmt_short(&c32),
            "3.4e9 (also stated < 1e12)",
            "matveev/c-3-2",
        )
        // the 3.4e9 figure is two orders below the formula value
        .flagged(lt(&c32, &claimed_34e9)),
        BoundStep::new(
            "matveev-c32-below-1e12",
            fmt_short(&c32),
            "< 1e12",
            "matveev/c-3-2-cap",
        )
        .flagged(lt(&c32, &e12)),
        BoundStep::new(
            "matveev-c22-below-1e10",
            fmt_short(&c22),
            "< 1e10",
            "matveev/c-2-2-cap",
        )
        .flagged(lt(&c22, &e10)),
        BoundStep::new(
            "matveev-c11-exact",
            format!("{c11}"),
            "1134000",
            "matveev/c-1-1",
        )
        .flagged(
            c11.cmp_ratio(&BigInt::from(1_134_000), &BigInt::one())
                == Some(std::cmp::Ordering::Equal),
        ),
    ]
}

// ---------------------------------------------------------------------
// chain cases
// ---------------------------------------------------------------------

fn case1_steps() -> Vec<BoundStep> {
    let s = scale();
    let mut steps = matveev_preamble();

    // absolute cap: s < 4.44e12 log_alpha(s) ln(2 log_alpha(s)); verified
    // at the published cap 1.88e17 (the ratio rhs/s decreases in s)
    let s_paper = HpReal::from_bigint(&big(188, 15), s);
    let log_alpha = hp_const(ConstName::LogAlpha, CHAIN_DIGITS);
    let x = s_paper.ln().div(&log_alpha);
    let rhs = HpReal::from_bigint(&big(444, 10), s)
        .mul(&x)
        .mul(&x.mul(&HpReal::from_i64(2, s)).ln());
    let est = fixed_point(|v| {
        let x = v.ln() / 0.481_211_825_059_603_4;
        4.44e12 * x * (2.0 * x).ln()
    });
    steps.push(
        BoundStep::new(
            "absolute-cap",
            format!("fixed point ~{est:.3e}; rhs(1.88e17) = {}", fmt_short(&rhs)),
            "s < 1.88e17",
            "two-powers/case-1/absolute-cap",
        )
        .flagged(lt(&rhs, &s_paper)),
    );

    // index-sum cap: n + d < 2 log_alpha(s)
    let nd_threshold = x.mul(&HpReal::from_i64(2, s));
    steps.push(
        BoundStep::new(
            "nd-cap",
            format!("2 log_alpha(1.88e17) = {}", fmt_short(&nd_threshold)),
            "n + d < 165 (sweep range 3..=164)",
            "two-powers/case-1/nd-cap",
        )
        // the certified threshold stays below 166, so the 164 sweep plus
        // the wider search box cover every admissible n + d
        .flagged(lt(&nd_threshold, &HpReal::from_i64(166, s))),
    );

    let sweep = dp_sweep(3, 164, &big(188, 15), CHAIN_DIGITS + CHAIN_GUARD);
    let six_m = BigInt::from(6) * big(188, 15);
    steps.push(
        BoundStep::new(
            "reduction-q-minimum",
            format!("min q = {:e}", approx_big(sweep.min_q())),
            "q > 11.28e17 (= 6M) for all n + d <= 164",
            "two-powers/case-1/q-minimum",
        )
        .flagged(sweep.min_q() > &six_m),
    );
    steps.push(
        BoundStep::new(
            "reduction-eps-positive",
            format!(
                "eps > 0 at the reference convergent for all {} rows",
                sweep.rows.len()
            ),
            "||mu q|| - M ||gamma q|| > 0 for all 0 < n + d <= 164",
            "two-powers/case-1/eps",
        )
        .flagged(sweep.all_eps_positive_at_reference()),
    );
    let cap_quote = sweep.max_cap_quote_form(165);
    steps.push(
        BoundStep::new(
            "reduction-cap-published-form",
            format!("max ceil(log(2q)/log B) = {cap_quote}"),
            "< 58057",
            "two-powers/case-1/s-cap",
        )
        .flagged(cap_quote < 58_057),
    );
    let cap_full = sweep.max_cap_rigorous(165);
    steps.push(
        BoundStep::new(
            "reduction-cap-with-eps",
            format!("max ceil(log(2q/eps)/log B) = {cap_full}"),
            "< 58057 (published form omits eps; the full form exceeds it \
             for n + d near 164, where ||mu q|| is structurally ~ q alpha^{-2(n+d)})",
            "two-powers/case-1/s-cap-strict",
        )
        .flagged(cap_full < 58_057),
    );
    steps
}

fn case2_steps() -> Vec<BoundStep> {
    let s = scale();
    let mut steps = Vec::new();

    // n + d < 2 lambda' log_alpha(s) with lambda' = 2.8e9, closed with
    // s < 2.22e12 (n+d) log(n+d); verified at the published 6.99e17
    let nd_paper = HpReal::from_bigint(&big(699, 15), s);
    let log_alpha = hp_const(ConstName::LogAlpha, CHAIN_DIGITS);
    let inner = HpReal::from_bigint(&big(222, 10), s)
        .mul(&nd_paper)
        .mul(&nd_paper.ln());
    let rhs = HpReal::from_bigint(&big(56, 8), s)
        .mul(&inner.ln())
        .div(&log_alpha);
    let est = fixed_point(|v| 5.6e9 / 0.481_211_825_059_603_4 * (2.22e12 * v * v.ln()).ln());
    steps.push(
        BoundStep::new(
            "nd-cap",
            format!("fixed point ~{est:.3e}; rhs(6.99e17) = {}", fmt_short(&rhs)),
            "n + d < 6.99e17",
            "two-powers/case-2/nd-cap",
        )
        .flagged(lt(&rhs, &nd_paper)),
    );
    let s_cap = HpReal::from_bigint(&big(222, 10), s)
        .mul(&nd_paper)
        .mul(&nd_paper.ln());
    let s_paper = HpReal::from_bigint(&big(602, 30), s);
    steps.push(
        BoundStep::new(
            "s-cap",
            format!("2.22e12 (n+d) log(n+d) at 6.99e17 = {}", fmt_short(&s_cap)),
            "s < 6.02e32",
            "two-powers/case-2/s-cap",
        )
        .flagged(lt(&s_cap, &s_paper)),
    );

    steps.extend(legendre_tail_steps("two-powers/case-2"));

    // contradiction endpoint: s >= 174 forces
    // 31 (s-1) [1.21/alpha^{4s} + 2.31/s^2] < ln alpha (d >= 4; both terms
    // shrink as s grows)
    let lhs = legendre_gap_lhs(174, 4);
    steps.push(
        BoundStep::new(
            "legendre-contradiction-at-174",
            fmt_short(&lhs).to_string(),
            "< ln alpha = 0.4812...; yields s <= 173",
            "two-powers/case-2/threshold",
        )
        .flagged(lt(&lhs, &log_alpha)),
    );
    steps
}

fn case3_steps() -> Vec<BoundStep> {
    let s = scale();
    let mut steps = Vec::new();

    let s_paper = HpReal::from_bigint(&big(191, 15), s);
    let log_alpha = hp_const(ConstName::LogAlpha, CHAIN_DIGITS);
    let x = s_paper
        .ln()
        .div(&log_alpha)
        .mul(&HpReal::from_i64(2, s))
        .add(&HpReal::from_i64(3, s));
    let rhs = HpReal::from_bigint(&big(222, 10), s).mul(&x).mul(&x.ln());
    let est = fixed_point(|v| {
        let x = 2.0 * v.ln() / 0.481_211_825_059_603_4 + 3.0;
        2.22e12 * x * x.ln()
    });
    steps.push(
        BoundStep::new(
            "absolute-cap",
            format!("fixed point ~{est:.3e}; rhs(1.91e17) = {}", fmt_short(&rhs)),
            "s < 1.91e17",
            "two-powers/case-3/absolute-cap",
        )
        .flagged(lt(&rhs, &s_paper)),
    );
    steps.push(
        BoundStep::new(
            "nd-cap",
            format!("2 log_alpha(1.91e17) + 3 = {}", fmt_short(&x)),
            "n + d < 168 (sweep range 3..=168)",
            "two-powers/case-3/nd-cap",
        )
        .flagged(lt(&x, &HpReal::from_i64(169, s))),
    );

    let sweep = dp_sweep(3, 168, &big(191, 15), CHAIN_DIGITS + CHAIN_GUARD);
    let cap_165 = sweep.max_cap_rigorous(165);
    let cap_168 = sweep.max_cap_rigorous(168);
    let kept = cap_165.max(cap_168);
    steps.push(
        BoundStep::new(
            "reduction-cap",
            format!("B = 1.5^(1/165): {cap_165}; B = 1.5^(1/168): {cap_168}; kept {kept}"),
            "s < 81766",
            "two-powers/case-3/s-cap",
        )
        .flagged(kept < 81_766),
    );
    steps.push(
        BoundStep::new(
            "reduction-q-minimum",
            format!("min q = {:e}", approx_big(sweep.min_q())),
            "> 1e44",
            "two-powers/case-3/q-minimum",
        )
        .flagged(sweep.min_q() > &big(1, 44)),
    );
    steps.push(
        BoundStep::new(
            "reduction-q-maximum",
            format!("max q = {:e}", approx_big(sweep.max_q())),
            "< 1e61",
            "two-powers/case-3/q-maximum",
        )
        .flagged(sweep.max_q() < &big(1, 61)),
    );
    let min_mu = sweep.min_mu_norm();
    steps.push(
        BoundStep::new(
            "reduction-min-mu-norm",
            format!("min ||mu q|| >= {:.3e}", approx(min_mu)),
            "> 2.4e-25",
            "two-powers/case-3/mu-norm",
        )
        .flagged(min_mu > &BigRational::new(BigInt::from(24), big(1, 26))),
    );
    let max_mg = sweep.max_m_gamma_norm();
    steps.push(
        BoundStep::new(
            "reduction-max-m-gamma-norm",
            format!("max M ||gamma q|| <= {:.3e}", approx(max_mg)),
            "< 1e-27",
            "two-powers/case-3/gamma-norm",
        )
        .flagged(max_mg < &BigRational::new(BigInt::one(), big(1, 27))),
    );
    let min_eps = sweep.min_eps();
    steps.push(
        BoundStep::new(
            "reduction-global-eps",
            format!("min eps >= {:.3e}", approx(min_eps)),
            "> 1e-25",
            "two-powers/case-3/eps-floor",
        )
        .flagged(min_eps > &BigRational::new(BigInt::one(), big(1, 25))),
    );
    steps
}

fn case4_steps() -> Vec<BoundStep> {
    let log_alpha = hp_const(ConstName::LogAlpha, CHAIN_DIGITS);
    let mut steps = legendre_tail_steps("two-powers/case-4");

    // the published threshold s >= 73 does not certify at d = 1
    let lhs73 = legendre_gap_lhs(73, 1);
    steps.push(
        BoundStep::new(
            "legendre-contradiction-at-73",
            fmt_short(&lhs73).to_string(),
            "< ln alpha (published conclusion s <= 72)",
            "two-powers/case-4/threshold",
        )
        .flagged(lt(&lhs73, &log_alpha)),
    );
    // smallest threshold that does certify for d = 1
    let mut s_ok = 73u64;
    while !lt(&legendre_gap_lhs(s_ok, 1), &log_alpha) {
        s_ok += 1;
    }
    steps.push(
        BoundStep::new(
            "legendre-contradiction-honest-threshold",
            format!("first certifying s = {s_ok} (cap s <= {})", s_ok - 1),
            "published 73 (cap 72); the wider cap is still far inside the \
             search box s <= 58057/(n+d-1)",
            "two-powers/case-4/threshold-honest",
        )
        .flagged(true),
    );
    steps
}

fn consecutive_steps() -> Vec<BoundStep> {
    let s = scale();
    let mut steps = Vec::new();
    let log_alpha = hp_const(ConstName::LogAlpha, CHAIN_DIGITS);

    // b = s - 1 branch: (s-1)/ln(s-1) < 1.35e10 caps s at 3.6e11; since
    // x/ln x increases, checking the cap point suffices
    let sp = HpReal::from_bigint(&big(36, 10), s);
    let ratio = sp.ln().recip().mul(&sp);
    steps.push(
        BoundStep::new(
            "power-branch-cap",
            format!("x/ln x at 3.6e11 = {}", fmt_short(&ratio)),
            ">= 1.35e10 (so s < 3.6e11)",
            "consecutive/power-branch",
        )
        .flagged(ratio.certainly_gt(&HpReal::from_bigint(&big(135, 8), s))),
    );

    // n branch: n < 1.35e10 ln(9.44e13 n ln 2n) verified at 8.51e11
    let np = HpReal::from_bigint(&big(851, 9), s);
    let inner = HpReal::from_bigint(&big(944, 11), s)
        .mul(&np)
        .mul(&np.mul(&HpReal::from_i64(2, s)).ln());
    let rhs = HpReal::from_bigint(&big(135, 8), s).mul(&inner.ln());
    steps.push(
        BoundStep::new(
            "index-branch-cap",
            format!("rhs(8.51e11) = {}", fmt_short(&rhs)),
            "n < 8.51e11",
            "consecutive/index-branch",
        )
        .flagged(lt(&rhs, &np)),
    );

    // absolute s cap: 9.44e13 * 8.51e11 * ln(2 * 8.51e11)
    let s_cap = inner.clone();
    let published = HpReal::from_bigint(&big(221, 25), s);
    let s_cap_ok = lt(&s_cap, &published);
    steps.push(
        BoundStep::new(
            "absolute-cap",
            format!("computed {}", fmt_short(&s_cap)),
            "s < 2.21e27 (computed value exceeds the published rounding)",
            "consecutive/absolute-cap",
        )
        .flagged(s_cap_ok),
    );

    // the convergent ladder still dominates the honest cap
    let convs = gamma_star_convergents(56);
    let q54 = &convs[54].q;
    steps.push(
        BoundStep::new(
            "gamma-star-q54",
            format!("q_54 = {q54}"),
            "> 2.21e27 (and > the honest cap 2.27e27)",
            "consecutive/q54",
        )
        .flagged(q54 > &big(221, 25) && HpReal::from_bigint(q54, s).certainly_gt(&s_cap)),
    );
    let max_a = gamma_star_max_quotient(1, 53);
    steps.push(
        BoundStep::new(
            "gamma-star-quotient-max-53",
            format!("max a_1..a_53 = {max_a}"),
            "<= 29",
            "consecutive/quotient-cap",
        )
        .flagged(max_a <= BigInt::from(29)),
    );

    // s >= 19 contradiction: 31 (s-1)(1.69/alpha^{s-1} + 1.42/alpha^{151})
    // < ln alpha; the first term decreases in s, the second increases, so
    // the endpoint sum bounds every s in [19, s_cap]
    let alpha = hp_const(ConstName::Alpha, CHAIN_DIGITS);
    let t1 = HpReal::from_ratio(&BigInt::from(169), &BigInt::from(100), s)
        .mul(&HpReal::from_i64(18, s))
        .div(&alpha.powi(18))
        .mul(&HpReal::from_i64(31, s));
    let t2 = HpReal::from_ratio(&BigInt::from(142), &BigInt::from(100), s)
        .mul(&s_cap)
        .div(&alpha.powi(151))
        .mul(&HpReal::from_i64(31, s));
    let endpoint_sum = t1.add(&t2);
    steps.push(
        BoundStep::new(
            "legendre-contradiction-19",
            format!("endpoint sum {}", fmt_short(&endpoint_sum)),
            "< ln alpha (published intermediate constant 1/(32(s-1)^2) is \
             too strong; the endpoint form certifies s < 19)",
            "consecutive/threshold-19",
        )
        .flagged(lt(&endpoint_sum, &log_alpha)),
    );

    // Theta elimination for 9 <= s < 19
    let (theta_min, at) = theta_window_min(CHAIN_DIGITS);
    steps.push(
        BoundStep::new(
            "theta-window-min",
            format!("{} at (r, s) = {at:?}", fmt_short(&theta_min)),
            "> 2.7e-3",
            "consecutive/theta",
        )
        .flagged(theta_min.gt_ratio(27, 10_000)),
    );

    // terminal window for 3 <= s <= 8
    let (tail_min, at) = tail_expression_min(CHAIN_DIGITS);
    let threshold = HpReal::from_ratio(&BigInt::from(18), &(big(1, 3) * (BigInt::one() << 12)), s);
    let tail_ok = tail_min.certainly_gt(&threshold);
    // alpha^{2(n+d)} < 1/tail_min pins the terminal box
    let nd_cap = tail_min
        .recip()
        .ln()
        .div(&log_alpha.mul(&HpReal::from_i64(2, s)));
    steps.push(
        BoundStep::new(
            "tail-expression-min",
            format!("{} at (t, s) = {at:?}; n + d < {}", fmt_short(&tail_min), fmt_short(&nd_cap)),
            "> 0.018/2^12, giving m + d < 26",
            "consecutive/terminal",
        )
        .flagged(tail_ok),
    );
    steps
}

// ---------------------------------------------------------------------

/// Shared q_70 / max-quotient steps for the two Legendre cases.
fn legendre_tail_steps(anchor_base: &str) -> Vec<BoundStep> {
    let convs = gamma_star_convergents(72);
    let q70 = &convs[70].q;
    let published = big(602, 30);
    let max_a = gamma_star_max_quotient(1, 69);
    vec![
        BoundStep::new(
            "gamma-star-q70",
            format!("q_70 = {q70}"),
            "> 6.02e32",
            format!("{anchor_base}/q70"),
        )
        .flagged(q70 > &published),
        BoundStep::new(
            "gamma-star-quotient-max-69",
            format!("max a_1..a_69 = {max_a}"),
            "= 29",
            format!("{anchor_base}/quotient-cap"),
        )
        .flagged(max_a == BigInt::from(29)),
    ]
}

/// 31 (s-1) (1.21/alpha^{sd} + 2.31/s^2) as a ball; the Legendre
/// contradiction needs this below ln alpha.
fn legendre_gap_lhs(s_val: u64, d: u64) -> HpReal {
    let s = scale();
    let alpha = hp_const(ConstName::Alpha, CHAIN_DIGITS);
    let term1 = HpReal::from_ratio(&BigInt::from(121), &BigInt::from(100), s)
        .div(&alpha.powi((s_val * d) as i64));
    let term2 = HpReal::from_ratio(&BigInt::from(231), &BigInt::from(100), s)
        .div(&HpReal::from_bigint(&BigInt::from(s_val * s_val), s));
    term1
        .add(&term2)
        .mul(&HpReal::from_bigint(&BigInt::from(31 * (s_val - 1)), s))
}

/// Compact scientific rendering for step strings (never used for
/// certification, only for the report text).
fn fmt_short(x: &HpReal) -> String {
    format!("{:.6e}", x.to_f64_approx())
}

fn fixed_point(f: impl Fn(f64) -> f64) -> f64 {
    let mut v = 1e20;
    for _ in 0..200 {
        let next = f(v);
        if ((next - v) / v).abs() < 1e-12 {
            return next;
        }
        v = next;
    }
    v
}

fn approx_big(v: &BigInt) -> f64 {
    let s = v.to_string();
    let digits = s.trim_start_matches('-').len() as i32;
    let head: f64 = s[..s.len().min(17)].parse().unwrap_or(f64::NAN);
    head * 10f64.powi(digits - s.len().min(17) as i32)
}
