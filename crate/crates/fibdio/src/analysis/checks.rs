//! Standalone separation predicates used by the bound chains.
//!
//! All four checks decide inequalities between elements of Q(sqrt 5) and
//! rationals, so they are evaluated exactly; some hold with equality on
//! the boundary (for instance the power-gap bound at n = 3, s = 3), which
//! rules out purely numerical certification.

use num_bigint::BigInt;
use num_traits::Signed;

use super::quad::QuadRat;
use super::AnalysisError;

/// Certifies `|q sqrt5 - p| >= 1/(6q)` for p >= 0, q > 0, via the exact
/// identity |q sqrt5 - p| = |5q^2 - p^2| / (q sqrt5 + p).
///
/// Equivalent integer form: (6q|5q^2 - p^2| - p)^2 >= 5 q^2, with the
/// left parenthesis non-negative.
pub fn sqrt5_rational_gap(p: &BigInt, q: &BigInt) -> bool {
    assert!(!p.is_negative() && q.is_positive());
    let x = (BigInt::from(5) * q * q - p * p).abs(); // >= 1, never 0
    let lhs = BigInt::from(6) * q * &x - p;
    if lhs.is_negative() {
        return false;
    }
    &lhs * &lhs >= BigInt::from(5) * q * q
}

/// Certifies `|alpha^n - sqrt5^{s-1}| >= 1 - |beta|^n` for n, s >= 1 and
/// s outside {2, 4}. Exact in Q(sqrt 5); equality holds at (n, s) = (3, 3).
pub fn alpha_power_gap(n: u64, s: u64) -> Result<bool, AnalysisError> {
    assert!(n >= 1 && s >= 1);
    if s == 2 || s == 4 {
        return Err(AnalysisError::ExcludedS(s));
    }
    let alpha = QuadRat::alpha();
    let lhs = alpha.powi(n as i64).sub(&QuadRat::sqrt5_pow(s - 1)).abs();
    // |beta|^n = alpha^{-n}
    let rhs = QuadRat::one().sub(&alpha.powi(-(n as i64)));
    Ok(lhs.ge(&rhs))
}

/// Outcome of the Binet power-error bounds for |(F_n sqrt5)^s - alpha^{ns}|.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinetPowerError {
    /// |(F_n sqrt5)^s - alpha^{ns}| < 2^s alpha^{n(s-2)}
    pub exponential_bound: bool,
    /// the sharper 2s alpha^{n(s-2)} bound; only certified when
    /// n > log_alpha(s), i.e. alpha^n > s
    pub linear_bound: Option<bool>,
}

/// Evaluates both power-error bounds exactly.
pub fn binet_power_error(n: u64, s: u64) -> BinetPowerError {
    assert!(n >= 1 && s >= 1);
    let alpha = QuadRat::alpha();
    let fib_n = QuadRat::from_bigint(&crate::sequences::fib(n as i64));
    let lhs = fib_n
        .mul(&QuadRat::sqrt5())
        .powi(s as i64)
        .sub(&alpha.powi((n * s) as i64))
        .abs();
    let scale = alpha.powi(n as i64 * (s as i64 - 2));
    let exp_rhs = QuadRat::from_bigint(&(BigInt::from(1) << s)).mul(&scale);
    let exponential_bound = lhs.lt(&exp_rhs);
    // alpha^n > s <=> n > log_alpha(s)
    let linear_bound = if alpha.powi(n as i64).gt(&QuadRat::from_bigint(&BigInt::from(s))) {
        let lin_rhs = QuadRat::from_bigint(&BigInt::from(2 * s)).mul(&scale);
        Some(lhs.lt(&lin_rhs))
    } else {
        None
    };
    BinetPowerError {
        exponential_bound,
        linear_bound,
    }
}

/// Exceptional set for the nonvanishing check: s = 1 (any d) and (s, d) = (2, 1).
pub fn is_exceptional_pair(s: u64, d: u64) -> bool {
    s == 1 || (s == 2 && d == 1)
}

/// Certifies `1 + alpha^{sd} - alpha^n sqrt5^{s-1} != 0` for (s, d) outside
/// the exceptional set. The value lives in Q(sqrt 5), so the zero test is
/// exact for any integer n.
pub fn nonvanishing_check(n: i64, s: u64, d: u64) -> Result<bool, AnalysisError> {
    assert!(s >= 1 && d >= 1);
    if is_exceptional_pair(s, d) {
        return Err(AnalysisError::ExceptionalPair { s, d });
    }
    let alpha = QuadRat::alpha();
    let value = QuadRat::one()
        .add(&alpha.powi((s * d) as i64))
        .sub(&alpha.powi(n).mul(&QuadRat::sqrt5_pow(s - 1)));
    Ok(!value.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn sqrt5_gap_examples() {
        assert!(sqrt5_rational_gap(&BigInt::from(2), &BigInt::from(1)));
        assert!(sqrt5_rational_gap(&BigInt::from(9), &BigInt::from(4)));
        assert!(sqrt5_rational_gap(&BigInt::from(0), &BigInt::from(1)));
        // sweep: the bound holds for every p near q sqrt5
        for q in 1i64..200 {
            let approx = ((q as f64) * 5f64.sqrt()) as i64;
            for p in (approx - 2).max(0)..=approx + 2 {
                assert!(
                    sqrt5_rational_gap(&BigInt::from(p), &BigInt::from(q)),
                    "p = {p}, q = {q}"
                );
            }
        }
    }

    #[test]
    fn power_gap_examples() {
        assert_eq!(alpha_power_gap(1, 1), Ok(true));
        assert_eq!(alpha_power_gap(4, 3), Ok(true));
        assert_eq!(alpha_power_gap(2, 5), Ok(true));
        assert_eq!(alpha_power_gap(3, 2), Err(AnalysisError::ExcludedS(2)));
        assert_eq!(alpha_power_gap(3, 4), Err(AnalysisError::ExcludedS(4)));
    }

    #[test]
    fn power_gap_boundary_equality() {
        // |alpha^3 - 5| = 1 - |beta|^3 exactly: 4 - 2 alpha = 1 - alpha^{-3}
        let alpha = QuadRat::alpha();
        let lhs = alpha.powi(3).sub(&QuadRat::sqrt5_pow(2)).abs();
        let rhs = QuadRat::one().sub(&alpha.powi(-3));
        assert_eq!(lhs.cmp_exact(&rhs), Ordering::Equal);
        // the non-strict certificate still accepts it
        assert_eq!(alpha_power_gap(3, 3), Ok(true));
    }

    #[test]
    fn power_gap_sweep() {
        for n in 1..=30u64 {
            for s in [1u64, 3, 5, 6, 7, 8, 9, 11] {
                assert_eq!(alpha_power_gap(n, s), Ok(true), "n = {n}, s = {s}");
            }
        }
    }

    #[test]
    fn binet_power_error_examples() {
        // |(2 sqrt5)^2 - alpha^6| = 2.055... < 4 alpha^3
        let r = binet_power_error(3, 2);
        assert!(r.exponential_bound);
        // alpha^3 > 2, so the linear bound is reported as well
        assert_eq!(r.linear_bound, Some(true));

        let r = binet_power_error(1, 1);
        assert!(r.exponential_bound);
        assert_eq!(r.linear_bound, Some(true)); // alpha > 1

        let r = binet_power_error(10, 3);
        assert!(r.exponential_bound);
        assert_eq!(r.linear_bound, Some(true)); // 10 > log_alpha 3
    }

    #[test]
    fn binet_power_error_linear_bound_gated() {
        // alpha^1 < 3: the sharper bound is not claimed at (n, s) = (1, 3)
        let r = binet_power_error(1, 3);
        assert!(r.exponential_bound);
        assert_eq!(r.linear_bound, None);
    }

    #[test]
    fn binet_power_error_sweep() {
        for n in 1..=14u64 {
            for s in 1..=9u64 {
                let r = binet_power_error(n, s);
                assert!(r.exponential_bound, "n = {n}, s = {s}");
                if let Some(lin) = r.linear_bound {
                    assert!(lin, "linear bound claimed but false at n = {n}, s = {s}");
                }
            }
        }
    }

    #[test]
    fn nonvanishing_examples() {
        assert_eq!(
            nonvanishing_check(1, 2, 1),
            Err(AnalysisError::ExceptionalPair { s: 2, d: 1 })
        );
        assert_eq!(
            nonvanishing_check(0, 1, 2),
            Err(AnalysisError::ExceptionalPair { s: 1, d: 2 })
        );
        assert_eq!(nonvanishing_check(3, 3, 1), Ok(true));
    }

    #[test]
    fn nonvanishing_sweep() {
        for s in 2..=8u64 {
            for d in 1..=6u64 {
                if is_exceptional_pair(s, d) {
                    continue;
                }
                for n in -12i64..=40 {
                    assert_eq!(nonvanishing_check(n, s, d), Ok(true), "n={n}, s={s}, d={d}");
                }
            }
        }
    }

    #[test]
    fn exceptional_family_actually_vanishes() {
        // s = 2, d = 1: 1 + alpha^2 = alpha sqrt5 vanishes at n = 1
        let alpha = QuadRat::alpha();
        let v = QuadRat::one()
            .add(&alpha.powi(2))
            .sub(&alpha.powi(1).mul(&QuadRat::sqrt5_pow(1)));
        assert!(v.is_zero());
    }
}
