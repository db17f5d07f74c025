//! The Dujella–Pethő reduction.
//!
//! For an inequality `0 < n gamma - m + mu < A B^-n` with n <= M, a
//! convergent denominator q > 6M of gamma with
//! `eps = ||mu q|| - M ||gamma q|| > 0` caps n by log(A q / eps)/log B.
//! The walk starts at a caller-chosen convergent index and advances until
//! eps is certified positive; parity effects can force a step forward
//! (when mu is half an odd integer, every even q gives eps <= 0, and
//! consecutive convergent denominators are coprime, so the next one works).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::cf::{cf_expand, convergents};
use super::real::HpReal;
use super::AnalysisError;

/// Inputs of one reduction: gamma irrational, mu real, A > 0, B > 1 and
/// the prior bound M.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub gamma: HpReal,
    pub mu: HpReal,
    /// A as an exact positive rational.
    pub a_num: BigInt,
    pub a_den: BigInt,
    /// B itself (for the record) and its certified natural log.
    pub b: HpReal,
    pub log_b: HpReal,
    /// The prior bound M (the lemma's upper limit for n).
    pub m_bound: BigInt,
}

impl ReductionInstance {
    /// Instance with B = base^(1/root); log B = ln(base)/root is computed
    /// from the exact base, which keeps the log tight. `a` and `b_base`
    /// are exact rationals given as (numerator, denominator).
    pub fn with_root_base(
        gamma: HpReal,
        mu: HpReal,
        a: (i64, i64),
        b_base: (i64, i64),
        b_root: u32,
        m_bound: BigInt,
        digits: u32,
    ) -> Self {
        let s = digits + 10;
        let (a_num, a_den) = a;
        let base = HpReal::from_ratio(&BigInt::from(b_base.0), &BigInt::from(b_base.1), s);
        let b = base.nth_root(b_root);
        let log_b = base.ln().div(&HpReal::from_i64(b_root as i64, s));
        ReductionInstance {
            gamma,
            mu,
            a_num: BigInt::from(a_num),
            a_den: BigInt::from(a_den),
            b,
            log_b,
            m_bound,
        }
    }
}

/// Result of a successful reduction step.
#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    pub convergent_index: usize,
    pub q: BigInt,
    /// Certified lower bound for eps (> 0).
    pub epsilon_lo: BigRational,
    /// ceil(log(A q / eps) / log B): indices above the old bound M and at
    /// or above this value are ruled out.
    pub new_bound: u64,
    /// How many convergents were examined before success.
    pub steps_tried: usize,
}

/// Walks convergents of `gamma` from `start_index`, looking for the first
/// q > 6M with certified eps > 0.
///
/// `max_quotients` bounds the expansion length (the certified count may
/// come out lower, which surfaces as PrecisionExhausted via cf_expand).
pub fn dp_reduce(
    inst: &ReductionInstance,
    start_index: usize,
    max_quotients: usize,
) -> Result<ReductionOutcome, AnalysisError> {
    let cf = cf_expand(&inst.gamma, max_quotients)?;
    dp_reduce_with_cf(inst, &cf, start_index)
}

/// Reduction over an already-expanded continued fraction of `inst.gamma`.
pub fn dp_reduce_with_cf(
    inst: &ReductionInstance,
    cf: &crate::analysis::cf::ContinuedFraction,
    start_index: usize,
) -> Result<ReductionOutcome, AnalysisError> {
    let convs = convergents(cf);
    let six_m = BigInt::from(6) * &inst.m_bound;
    let scale = inst.gamma.scale();
    let m_ball = HpReal::from_bigint(&inst.m_bound, scale);
    let mut tried = 0usize;
    for c in convs.iter().skip(start_index) {
        if c.q <= six_m {
            continue;
        }
        tried += 1;
        let q_ball = HpReal::from_bigint(&c.q, scale);
        let mu_q = inst.mu.mul(&q_ball).nearest_int_dist();
        let gamma_q = inst.gamma.mul(&q_ball).nearest_int_dist();
        let eps = mu_q.sub(&m_ball.mul(&gamma_q));
        if !eps.is_certainly_positive() {
            continue;
        }
        let eps_lo = eps.lo_ratio();
        // log(A q / eps_lo) / log B, upper bound, then ceiling
        let arg_num = &inst.a_num * &c.q * eps_lo.denom();
        let arg_den = &inst.a_den * eps_lo.numer();
        let log_arg = HpReal::from_ratio(&arg_num, &arg_den, scale).ln();
        let ratio = log_arg.div(&inst.log_b);
        let new_bound = ceil_hi_u64(&ratio);
        return Ok(ReductionOutcome {
            convergent_index: c.index,
            q: c.q.clone(),
            epsilon_lo: eps_lo,
            new_bound,
            steps_tried: tried,
        });
    }
    Err(AnalysisError::NoPositiveEpsilon { tried })
}

/// Rebuilds the instance at doubled precision until the reduction lands.
pub fn dp_reduce_retry(
    build: impl Fn(u32) -> ReductionInstance,
    digits: u32,
    start_index: usize,
    max_quotients: usize,
    retries: u32,
) -> Result<ReductionOutcome, AnalysisError> {
    let mut d = digits;
    let mut last = AnalysisError::NoPositiveEpsilon { tried: 0 };
    for _ in 0..=retries {
        match dp_reduce(&build(d), start_index, max_quotients) {
            Ok(out) => return Ok(out),
            Err(e) => last = e,
        }
        d *= 2;
    }
    Err(last)
}

/// Smallest u64 at or above the upper end of the ball.
fn ceil_hi_u64(x: &HpReal) -> u64 {
    let hi = x.hi_ratio();
    let c = hi.ceil().to_integer();
    c.to_u64().expect("bound exceeds u64")
}

/// The reduction family for the two-power pipelines:
/// gamma = log(alpha)/log(F_t), mu = -log(sqrt5)/log(F_t) for t = n + d.
pub fn fib_power_instance(t: u64, m_bound: &BigInt, b_root: u32, digits: u32) -> ReductionInstance {
    use super::{hp_const, log_fib, ConstName};
    let log_f = log_fib(t, digits);
    let gamma = hp_const(ConstName::LogAlpha, digits).div(&log_f);
    let mu = hp_const(ConstName::LogSqrt5, digits).div(&log_f).neg();
    ReductionInstance::with_root_base(gamma, mu, (2, 1), (3, 2), b_root, m_bound.clone(), digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::{One, Signed};

    fn m_1_88e17() -> BigInt {
        BigInt::from(188u64) * BigInt::from(10u64).pow(15)
    }

    #[test]
    fn reduction_at_small_index_contract() {
        // t = 10: the first convergent with q > 6M caps the index far below
        // any prior bound of 1.88e17 scale
        let inst = fib_power_instance(10, &m_1_88e17(), 165, 120);
        let out = dp_reduce(&inst, 0, 110).unwrap();
        assert!(out.q > BigInt::from(6) * m_1_88e17());
        assert!(out.epsilon_lo.is_positive());
        // certified monotonicity: the reported bound can never undershoot
        // log(A 6M)/log B, because q > 6M and eps <= 1/2 < A
        let floor_bound = {
            let s = inst.gamma.scale();
            let six_m = BigInt::from(6) * m_1_88e17();
            let arg = HpReal::from_ratio(&(BigInt::from(2) * six_m), &BigInt::one(), s);
            arg.ln().div(&inst.log_b)
        };
        let reported = HpReal::from_bigint(&BigInt::from(out.new_bound), inst.gamma.scale());
        assert!(reported.certainly_gt(&floor_bound));
    }

    #[test]
    fn half_integer_mu_walks_to_odd_denominator() {
        // t = 5: F_5 = 5 so mu = -log(sqrt5)/log(5) = -1/2 exactly; eps <= 0
        // at every even q and the walk must land on an odd denominator
        let inst = fib_power_instance(5, &m_1_88e17(), 165, 160);
        let out = dp_reduce(&inst, 99, 110).unwrap();
        assert!(out.q.is_odd(), "accepted q must be odd at t = 5");
        // the certified eps is essentially 1/2
        assert!(out.epsilon_lo > BigRational::new(BigInt::from(49), BigInt::from(100)));
    }

    #[test]
    fn paper_family_bound_scale() {
        // at t = 30 with the canonical parameters the cap lands in the
        // tens of thousands
        let inst = fib_power_instance(30, &m_1_88e17(), 165, 160);
        let out = dp_reduce(&inst, 98, 112).unwrap();
        assert!(out.new_bound > 40_000 && out.new_bound < 70_000, "{}", out.new_bound);
    }

    #[test]
    fn no_positive_epsilon_when_walk_exhausted() {
        // an M so large that no certified convergent clears q > 6M
        let huge_m = BigInt::from(10u32).pow(120);
        let inst = fib_power_instance(10, &huge_m, 165, 120);
        let err = dp_reduce(&inst, 0, 100);
        match err {
            Err(AnalysisError::NoPositiveEpsilon { tried }) => assert_eq!(tried, 0),
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }
}
