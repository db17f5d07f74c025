//! Continued fractions with reliability accounting.
//!
//! Expansion works on the exact rational endpoints of a certified ball:
//! a partial quotient is emitted only while the floors of both endpoints
//! agree, so every emitted quotient is correct for the true value. When
//! the endpoints part ways the expansion stops and reports how many
//! quotients were certified; callers retry at doubled precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::real::HpReal;
use super::AnalysisError;

/// Certified partial quotients of a real number.
#[derive(Debug, Clone)]
pub struct ContinuedFraction {
    quotients: Vec<BigInt>,
    certified: usize,
}

impl ContinuedFraction {
    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn certified_count(&self) -> usize {
        self.certified
    }

    /// Largest partial quotient among a_lo..=a_hi (indices into the
    /// certified prefix).
    pub fn max_quotient(&self, lo: usize, hi: usize) -> &BigInt {
        self.quotients[lo..=hi].iter().max().expect("empty range")
    }
}

/// A convergent p_t/q_t in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    pub index: usize,
}

/// Expands the first `count` partial quotients of `x`, certified against
/// the ball's error radius. Fails with `PrecisionExhausted` when the
/// enclosure cannot pin down all requested quotients.
pub fn cf_expand(x: &HpReal, count: usize) -> Result<ContinuedFraction, AnalysisError> {
    let mut lo = x.lo_ratio();
    let mut hi = x.hi_ratio();
    let mut quotients = Vec::with_capacity(count);
    while quotients.len() < count {
        let a_lo = lo.floor().to_integer();
        let a_hi = hi.floor().to_integer();
        if a_lo != a_hi {
            return Err(AnalysisError::PrecisionExhausted {
                certified: quotients.len(),
                requested: count,
            });
        }
        if !quotients.is_empty() {
            debug_assert!(a_lo >= BigInt::one(), "interior quotient below 1");
        }
        let a = BigRational::from_integer(a_lo.clone());
        quotients.push(a_lo);
        let frac_lo = &lo - &a;
        let frac_hi = &hi - &a;
        if frac_lo.is_zero() {
            // endpoint hit an integer: the next quotient of the true value
            // cannot be certified from this enclosure
            return Err(AnalysisError::PrecisionExhausted {
                certified: quotients.len(),
                requested: count,
            });
        }
        // invert: x -> 1/(x - a), order swaps
        lo = frac_hi.recip();
        hi = frac_lo.recip();
    }
    let certified = quotients.len();
    Ok(ContinuedFraction {
        quotients,
        certified,
    })
}

/// Expands with up to `retries` precision doublings. `make` rebuilds the
/// ball at the requested digit count.
pub fn cf_expand_retry(
    make: impl Fn(u32) -> HpReal,
    digits: u32,
    count: usize,
    retries: u32,
) -> Result<ContinuedFraction, AnalysisError> {
    let mut d = digits;
    let mut last = AnalysisError::PrecisionExhausted {
        certified: 0,
        requested: count,
    };
    for _ in 0..=retries {
        match cf_expand(&make(d), count) {
            Ok(cf) => return Ok(cf),
            Err(e) => last = e,
        }
        d *= 2;
    }
    Err(last)
}

/// Convergents p_t/q_t of the certified prefix, by the standard recurrence.
pub fn convergents(cf: &ContinuedFraction) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(cf.certified_count());
    let (mut p_prev, mut q_prev) = (BigInt::zero(), BigInt::one());
    let (mut p_cur, mut q_cur) = (BigInt::one(), BigInt::zero());
    for (t, a) in cf.quotients()[..cf.certified_count()].iter().enumerate() {
        let p_next = a * &p_cur + &p_prev;
        let q_next = a * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        out.push(Convergent {
            p: p_cur.clone(),
            q: q_cur.clone(),
            index: t,
        });
    }
    out
}

/// Legendre's criterion hypothesis: certified check of
/// |gamma - p/q| < 1/(2 q^2).
pub fn legendre_check(gamma: &HpReal, p: &BigInt, q: &BigInt) -> Result<bool, AnalysisError> {
    assert!(q.is_positive(), "q must be positive");
    let target = BigRational::new(p.clone(), q.clone());
    let d_lo = (gamma.lo_ratio() - &target).abs();
    let d_hi = (gamma.hi_ratio() - &target).abs();
    let (d_min, d_max) = if gamma.lo_ratio() <= target && target <= gamma.hi_ratio() {
        (BigRational::zero(), d_lo.max(d_hi))
    } else {
        (d_lo.clone().min(d_hi.clone()), d_lo.max(d_hi))
    };
    let threshold = BigRational::new(BigInt::one(), 2 * q * q);
    if d_max < threshold {
        Ok(true)
    } else if d_min >= threshold {
        Ok(false)
    } else {
        Err(AnalysisError::Indeterminate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{hp_const, ConstName};
    use crate::sequences::fib;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    #[test]
    fn golden_ratio_all_ones() {
        let alpha = hp_const(ConstName::Alpha, 60);
        let cf = cf_expand(&alpha, 40).unwrap();
        assert!(cf.quotients().iter().all(|a| a.to_u32() == Some(1)));
    }

    #[test]
    fn golden_ratio_convergents_are_fibonacci() {
        let alpha = hp_const(ConstName::Alpha, 60);
        let cf = cf_expand(&alpha, 30).unwrap();
        for c in convergents(&cf) {
            assert_eq!(c.q, fib(c.index as i64 + 1), "q_{}", c.index);
            assert_eq!(c.p, fib(c.index as i64 + 2), "p_{}", c.index);
        }
    }

    #[test]
    fn sqrt5_expansion() {
        let cf = cf_expand(&hp_const(ConstName::Sqrt5, 60), 20).unwrap();
        let q: Vec<u32> = cf.quotients().iter().map(|a| a.to_u32().unwrap()).collect();
        assert_eq!(q[0], 2);
        assert!(q[1..].iter().all(|&a| a == 4), "sqrt 5 = [2; 4, 4, 4, ...]");
    }

    #[test]
    fn gamma_star_prefix() {
        // frozen oracle: first quotients of log(sqrt 5)/log(alpha)
        let g = hp_const(ConstName::GammaStar, 140);
        let cf = cf_expand(&g, 22).unwrap();
        let got: Vec<u32> = cf.quotients().iter().map(|a| a.to_u32().unwrap()).collect();
        assert_eq!(
            got,
            vec![1, 1, 2, 19, 2, 9, 1, 1, 3, 1, 9, 1, 2, 6, 1, 1, 1, 5, 1, 14, 29, 1]
        );
    }

    #[test]
    fn precision_exhaustion_reports_certified_count() {
        let g = hp_const(ConstName::GammaStar, 20);
        let err = cf_expand(&g, 400).unwrap_err();
        match err {
            AnalysisError::PrecisionExhausted {
                certified,
                requested,
            } => {
                assert!(certified < 400 && requested == 400);
                assert!(certified > 5, "20 digits certify a useful prefix");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn retry_reaches_target() {
        let cf = cf_expand_retry(
            |d| hp_const(ConstName::GammaStar, d),
            20,
            60,
            4,
        )
        .unwrap();
        assert_eq!(cf.certified_count(), 60);
    }

    #[test]
    fn convergent_recurrence_and_quality() {
        let g = hp_const(ConstName::GammaStar, 120);
        let cf = cf_expand(&g, 40).unwrap();
        let cs = convergents(&cf);
        let quots = cf.quotients();
        for t in 2..cs.len() {
            assert_eq!(cs[t].q, &quots[t] * &cs[t - 1].q + &cs[t - 2].q);
            assert!(cs[t].q > cs[t - 1].q, "denominators strictly increase");
            assert!(cs[t].p.gcd(&cs[t].q).is_one(), "lowest terms");
        }
        // |gamma - p_t/q_t| < 1/q_t^2: every convergent passes the Legendre
        // hypothesis direction
        for c in &cs {
            let d = g.sub(&HpReal::from_ratio(&c.p, &c.q, 130)).abs();
            let bound = HpReal::from_ratio(&BigInt::one(), &(&c.q * &c.q), 130);
            assert!(d.certainly_lt(&bound), "t = {}", c.index);
        }
    }

    #[test]
    fn legendre_examples() {
        let alpha = hp_const(ConstName::Alpha, 60);
        assert_eq!(
            legendre_check(&alpha, &BigInt::from(3), &BigInt::from(2)),
            Ok(true)
        );
        // |alpha - 2| = 0.3819... < 1/2, and 2/1 is the convergent p_1/q_1
        assert_eq!(
            legendre_check(&alpha, &BigInt::from(2), &BigInt::from(1)),
            Ok(true)
        );
        // a clear non-convergent at larger q: |alpha - 13/6| = 0.548 >= 1/72
        assert_eq!(
            legendre_check(&alpha, &BigInt::from(13), &BigInt::from(6)),
            Ok(false)
        );
        let s5 = hp_const(ConstName::Sqrt5, 60);
        assert_eq!(
            legendre_check(&s5, &BigInt::from(9), &BigInt::from(4)),
            Ok(true)
        );
    }

    #[test]
    fn legendre_indeterminate_on_wide_enclosure() {
        // an enclosure straddling the threshold cannot decide the criterion
        let wide = HpReal::from_bounds_scaled(BigInt::from(140), BigInt::from(180), 2); // [1.40, 1.80]
        assert_eq!(
            legendre_check(&wide, &BigInt::from(3), &BigInt::from(2)),
            Err(AnalysisError::Indeterminate)
        );
    }
}
