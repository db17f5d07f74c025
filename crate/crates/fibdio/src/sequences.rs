//! Exact arbitrary-precision arithmetic for Fibonacci, Lucas and
//! k-generalized Fibonacci numbers.
//!
//! The classical sequence is extended to negative indices via
//! `F_{-n} = (-1)^{n+1} F_n`, so the recurrence `F_{n+1} = F_n + F_{n-1}`
//! holds over all of Z. k-bonacci numbers are served by a memoizing
//! generator that owns its cache; clone the generator to hand independent
//! caches to parallel workers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::analysis::real::HpReal;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("index {index} below the k-bonacci range (minimum {min} for k = {k})")]
    IndexBelowRange { index: i64, min: i64, k: u32 },
    #[error("split point {ell} outside 1..={max} for n = {n}")]
    SplitOutOfRange { ell: i64, n: i64, max: i64 },
}

/// F_n for any integer index, by fast doubling.
///
/// Negative indices follow the reflection `F_{-n} = (-1)^{n+1} F_n`.
pub fn fib(n: i64) -> BigInt {
    if n >= 0 {
        return BigInt::from(fib_pair(n as u64).0);
    }
    let mag = BigInt::from(fib_pair(n.unsigned_abs()).0);
    if n % 2 == 0 {
        -mag
    } else {
        mag
    }
}

/// Non-negative-index Fibonacci as an unsigned big integer.
pub fn fib_u(n: u64) -> BigUint {
    fib_pair(n).0
}

/// Returns (F_n, F_{n+1}) by the fast-doubling recurrences
/// F_{2j} = F_j (2 F_{j+1} - F_j) and F_{2j+1} = F_j^2 + F_{j+1}^2.
fn fib_pair(n: u64) -> (BigUint, BigUint) {
    if n == 0 {
        return (BigUint::zero(), BigUint::one());
    }
    let (a, b) = fib_pair(n / 2);
    let two_b_minus_a = (&b << 1u32) - &a;
    let c = &a * &two_b_minus_a; // F_{2j}
    let d = &a * &a + &b * &b; // F_{2j+1}
    if n.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

/// n-th Lucas number L_n = F_{n+1} + F_{n-1}, valid for any integer index.
pub fn lucas(n: i64) -> BigInt {
    fib(n + 1) + fib(n - 1)
}

/// Memoized generator for the k-generalized Fibonacci sequence.
///
/// Indices run from `-(k-2)` upward; the seed block is
/// `F_{-(k-2)} = ... = F_0 = 0`, `F_1 = 1` and every later term is the sum
/// of the preceding k terms. The cache is append-only.
#[derive(Debug, Clone)]
pub struct KBonacciGenerator {
    k: u32,
    /// cache[i] holds F_{i - (k-2)}.
    cache: Vec<BigUint>,
}

impl KBonacciGenerator {
    pub fn new(k: u32) -> Self {
        assert!(k >= 2, "k-bonacci order must be at least 2");
        let mut cache = vec![BigUint::zero(); (k - 1) as usize];
        cache.push(BigUint::one()); // F_1
        KBonacciGenerator { k, cache }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Smallest valid index, `-(k-2)`.
    pub fn min_index(&self) -> i64 {
        -(self.k as i64 - 2)
    }

    fn slot(&self, n: i64) -> usize {
        (n - self.min_index()) as usize
    }

    /// Exact F^{(k)}_n. Errors when `n < -(k-2)`.
    pub fn get(&mut self, n: i64) -> Result<BigUint, SequenceError> {
        if n < self.min_index() {
            return Err(SequenceError::IndexBelowRange {
                index: n,
                min: self.min_index(),
                k: self.k,
            });
        }
        let slot = self.slot(n);
        while self.cache.len() <= slot {
            let next_idx = self.cache.len();
            let lo = next_idx.saturating_sub(self.k as usize);
            let sum: BigUint = self.cache[lo..next_idx].iter().sum();
            self.cache.push(sum);
        }
        Ok(self.cache[slot].clone())
    }

    /// The index m with F^{(k)}_m equal to `value`, if the value belongs
    /// to the sequence. F_1 = F_2 = 1 reports the canonical m = 2.
    pub fn confirm_exact(&mut self, value: &BigUint) -> Option<i64> {
        if value.is_zero() {
            return Some(0);
        }
        if value.is_one() {
            // F_1 = F_2 = 1; index 2 is the canonical representative.
            return Some(2);
        }
        // The sequence is strictly increasing from index 2 onward, so scan
        // until the cached terms pass `value`. Terms grow geometrically.
        let mut n = 2i64;
        loop {
            let t = self.get(n).expect("index >= 2 is always valid");
            if &t == value {
                return Some(n);
            }
            if &t > value {
                return None;
            }
            n += 1;
        }
    }
}

/// kfib as a free function over a generator, mirroring `fib`.
pub fn kfib(gen: &mut KBonacciGenerator, n: i64) -> Result<BigUint, SequenceError> {
    gen.get(n)
}

/// Evaluates the split-sum decomposition
/// `sum_{j=0}^{k-1} F_{l-j} (sum_{i=0}^{k-1-j} F_{n-l-i})` exactly.
///
/// For every valid split point `1 <= l <= n-1` the value equals F^{(k)}_n;
/// the identity is exercised by tests rather than assumed here.
pub fn kbona_decompose(
    gen: &mut KBonacciGenerator,
    n: i64,
    ell: i64,
) -> Result<BigUint, SequenceError> {
    if n < 1 || ell < 1 || ell > n - 1 {
        return Err(SequenceError::SplitOutOfRange {
            ell,
            n,
            max: n - 1,
        });
    }
    let k = gen.k() as i64;
    let mut total = BigUint::zero();
    for j in 0..k {
        let outer = gen.get(ell - j)?;
        if outer.is_zero() {
            continue;
        }
        let mut inner = BigUint::zero();
        for i in 0..(k - j) {
            inner += gen.get(n - ell - i)?;
        }
        total += outer * inner;
    }
    Ok(total)
}

/// The dominant real root of `T^k - T^{k-1} - ... - T - 1`, certified to
/// `digits` decimal digits by bisection on the bracket `(2(1-2^-k), 2)`.
///
/// Sign evaluation is exact: with T = m/10^s the sign of the polynomial is
/// the sign of an integer, so the returned enclosure is rigorous.
pub fn dominant_root(k: u32, digits: u32) -> HpReal {
    assert!(k >= 2, "k must be at least 2");
    assert!(digits >= 20, "ask for at least 20 digits");
    let scale = digits + 10;
    let pow10 = BigInt::from(10u32).pow(scale);
    // Bracket endpoints scaled by 10^scale: 2(1 - 2^-k) = 2 - 2^{1-k} and 2.
    let mut lo = BigInt::from(2u32) * &pow10 - ((BigInt::from(2u32) * &pow10) >> k);
    let mut hi = BigInt::from(2u32) * &pow10;

    // sign of f(m / 10^scale) where f(T) = T^k - T^{k-1} - ... - T - 1,
    // cleared of denominators: m^k - S m^{k-1} - S^2 m^{k-2} - ... - S^k,
    // with S = 10^scale. Horner form keeps the intermediate sizes down.
    let sign_at = |m: &BigInt| -> i32 {
        let mut g = m - &pow10;
        let mut s_pow = pow10.clone();
        for _ in 2..=k {
            s_pow = &s_pow * &pow10;
            g = g * m - &s_pow;
        }
        match g.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    };

    // f is negative at the lower bracket end and positive at 2.
    loop {
        let width = &hi - &lo;
        if width <= BigInt::one() {
            break;
        }
        let mid = (&lo + &hi) >> 1u32;
        match sign_at(&mid) {
            0 => {
                lo = mid.clone();
                hi = mid;
                break;
            }
            s if s < 0 => lo = mid,
            _ => hi = mid,
        }
    }
    HpReal::from_bounds_scaled(lo, hi, scale).rescaled(digits + 5)
}

/// Checks `3^d F_n <= 2^d F_{n+d}` exactly, the non-strict form of the
/// ratio bound `F_n / F_{n+d} <= (2/3)^d`. Equality occurs at (n, d) = (3, 1).
pub fn ratio_bound_check(n: i64, d: i64) -> bool {
    assert!(n >= 2 && d >= 1);
    let lhs = BigInt::from(3u32).pow(d as u32) * fib(n);
    let rhs = BigInt::from(2u32).pow(d as u32) * fib(n + d);
    lhs <= rhs
}
