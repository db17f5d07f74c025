//! High-precision certified analysis: named constants, continued fractions
//! with convergents, the Legendre criterion, the Dujella–Pethő reduction,
//! Matveev-type constants and the standalone separation predicates.

pub mod cf;
pub mod checks;
pub mod matveev;
pub mod quad;
pub mod real;
pub mod reduction;

use num_bigint::BigInt;
use thiserror::Error;

use real::HpReal;

/// Default working precision in certified decimal digits.
pub const DEFAULT_DIGITS: u32 = 120;
/// Guard digits added on top of the requested precision by the pipelines.
pub const GUARD_DIGITS: u32 = 40;
/// Retry budget when a continued-fraction expansion runs out of certified
/// quotients; each retry doubles the working precision.
pub const MAX_PRECISION_RETRIES: u32 = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("precision exhausted: {certified} of {requested} quotients certified (retry with more digits)")]
    PrecisionExhausted { certified: usize, requested: usize },
    #[error("comparison indeterminate at this precision")]
    Indeterminate,
    #[error("no convergent with positive epsilon among {tried} candidates")]
    NoPositiveEpsilon { tried: usize },
    #[error("s = {0} is excluded (the gap bound fails for s in {{2, 4}})")]
    ExcludedS(u64),
    #[error("(s, d) = ({s}, {d}) lies in the exceptional vanishing set")]
    ExceptionalPair { s: u64, d: u64 },
    #[error("degenerate linear form: every exponent is zero")]
    DegenerateForm,
}

/// The fixed named constants used across the bound chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstName {
    /// (1 + sqrt 5)/2
    Alpha,
    /// 1/alpha = alpha - 1 (the absolute value of the conjugate root)
    BetaAbs,
    Sqrt5,
    LogAlpha,
    LogSqrt5,
    /// log(sqrt 5)/log(alpha)
    GammaStar,
}

/// A named constant certified to `digits` digits (radius <= 10^-digits).
pub fn hp_const(name: ConstName, digits: u32) -> HpReal {
    assert!(digits >= 20, "ask for at least 20 digits");
    let s = digits + 10;
    let two = HpReal::from_i64(2, s);
    let sqrt5 = HpReal::from_i64(5, s).sqrt();
    let v = match name {
        ConstName::Sqrt5 => sqrt5,
        ConstName::Alpha => sqrt5.add(&HpReal::one(s)).div(&two),
        ConstName::BetaAbs => sqrt5.sub(&HpReal::one(s)).div(&two),
        ConstName::LogAlpha => sqrt5.add(&HpReal::one(s)).div(&two).ln(),
        ConstName::LogSqrt5 => HpReal::from_i64(5, s).ln().div(&two),
        ConstName::GammaStar => {
            let log_sqrt5 = HpReal::from_i64(5, s).ln().div(&two);
            let log_alpha = sqrt5.add(&HpReal::one(s)).div(&two).ln();
            log_sqrt5.div(&log_alpha)
        }
    };
    debug_assert!(
        v.radius_within_pow10(digits),
        "constant {name:?} failed its radius contract at {digits} digits"
    );
    v
}

/// ln F_n as a certified ball (n >= 3 so the value is positive).
pub fn log_fib(n: u64, digits: u32) -> HpReal {
    assert!(n >= 3, "log of F_n needs F_n >= 2");
    let s = digits + 10;
    let f = crate::sequences::fib_u(n);
    HpReal::from_bigint(&BigInt::from(f), s).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_reference_digits() {
        let a = hp_const(ConstName::Alpha, 120);
        assert!(a.matches_decimal(
            "1.61803398874989484820458683436563811772030917980576286213544862270526046281890244970720720418939113748475",
            100
        ));
        let s5 = hp_const(ConstName::Sqrt5, 40);
        assert!(s5.matches_decimal("2.2360679774", 10));
        let la = hp_const(ConstName::LogAlpha, 120);
        assert!(la.matches_decimal(
            "0.48121182505960344749775891342436842313518433438566051966101816884016386760822177441200942912272347499723",
            100
        ));
        let ls5 = hp_const(ConstName::LogSqrt5, 120);
        assert!(ls5.matches_decimal(
            "0.80471895621705018730037966661309381976280067713425886095632394573708949385382888231506693904658980539998",
            100
        ));
    }

    #[test]
    fn gamma_star_value_and_leading_quotient() {
        let g = hp_const(ConstName::GammaStar, 120);
        assert!(g.matches_decimal(
            "1.67227593818455474617031912639443655392849942014208800622937327447832330629149551175718633341277329557880",
            100
        ));
        // gamma* lies in (1, 2), so its first quotient is 1
        assert!(g.gt_ratio(1, 1) && g.lt_ratio(2, 1));
    }

    #[test]
    fn log_fib_small() {
        // ln F_10 = ln 55
        let l = log_fib(10, 60);
        assert!(l.matches_decimal("4.0073331852324709186627029111913169393473082082059348971312", 50));
    }

    #[test]
    fn radius_contract_at_double_digits() {
        for name in [
            ConstName::Alpha,
            ConstName::BetaAbs,
            ConstName::Sqrt5,
            ConstName::LogAlpha,
            ConstName::LogSqrt5,
            ConstName::GammaStar,
        ] {
            let coarse = hp_const(name, 40);
            let fine = hp_const(name, 80);
            assert!(coarse.sub(&fine).contains_zero(), "{name:?}");
            assert!(coarse.radius_within_pow10(40), "{name:?}");
        }
    }
}
