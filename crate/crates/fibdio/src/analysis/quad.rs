//! Exact arithmetic in the real quadratic field Q(sqrt 5).
//!
//! Elements are stored as `a + b sqrt5` with rational coefficients, so the
//! golden ratio, its conjugate and integer powers of sqrt 5 are all exact,
//! and sign/comparison are decidable. The separation predicates of the
//! bound chains are built on this where interval arithmetic could not
//! certify an inequality that holds with equality.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact element a + b*sqrt(5) of Q(sqrt 5).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadRat {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadRat {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadRat { a, b }
    }

    pub fn from_int(v: i64) -> Self {
        QuadRat {
            a: BigRational::from_integer(BigInt::from(v)),
            b: BigRational::zero(),
        }
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        QuadRat {
            a: BigRational::from_integer(v.clone()),
            b: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt5() -> Self {
        QuadRat {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    /// (1 + sqrt 5)/2, the golden ratio.
    pub fn alpha() -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        QuadRat {
            a: half.clone(),
            b: half,
        }
    }

    /// (1 - sqrt 5)/2 = -1/alpha, the conjugate root.
    pub fn beta() -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        QuadRat {
            a: half.clone(),
            b: -half,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        QuadRat {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        QuadRat {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }

    pub fn neg(&self) -> Self {
        QuadRat {
            a: -&self.a,
            b: -&self.b,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let five = BigRational::from_integer(BigInt::from(5));
        QuadRat {
            a: &self.a * &rhs.a + &five * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }

    /// Field norm a^2 - 5 b^2 (the product with the conjugate).
    pub fn norm(&self) -> BigRational {
        let five = BigRational::from_integer(BigInt::from(5));
        &self.a * &self.a - five * &self.b * &self.b
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        QuadRat {
            a: &self.a / &n,
            b: -&self.b / &n,
        }
    }

    pub fn powi(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one();
        }
        if e < 0 {
            return self.powi(-e).inv();
        }
        let mut base = self.clone();
        let mut e = e as u64;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// sqrt(5)^e for e >= 0: 5^(e/2) when e is even, 5^((e-1)/2) sqrt5 otherwise.
    pub fn sqrt5_pow(e: u64) -> Self {
        let five = BigRational::from_integer(BigInt::from(5));
        let half_pow = {
            let mut acc = BigRational::one();
            for _ in 0..(e / 2) {
                acc *= &five;
            }
            acc
        };
        if e.is_multiple_of(2) {
            QuadRat {
                a: half_pow,
                b: BigRational::zero(),
            }
        } else {
            QuadRat {
                a: BigRational::zero(),
                b: half_pow,
            }
        }
    }

    /// Exact sign of a + b sqrt5.
    pub fn sign(&self) -> Ordering {
        let (sa, sb) = (sign_of(&self.a), sign_of(&self.b));
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => {
                // compare a^2 with 5 b^2; sign decided by the larger magnitude side
                let n = self.norm();
                match sign_of(&n) {
                    Ordering::Equal => Ordering::Equal, // impossible: 5 is not a square
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn cmp_exact(&self, rhs: &Self) -> Ordering {
        self.sub(rhs).sign()
    }

    pub fn ge(&self, rhs: &Self) -> bool {
        self.cmp_exact(rhs) != Ordering::Less
    }

    pub fn gt(&self, rhs: &Self) -> bool {
        self.cmp_exact(rhs) == Ordering::Greater
    }

    pub fn lt(&self, rhs: &Self) -> bool {
        self.cmp_exact(rhs) == Ordering::Less
    }
}

fn sign_of(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}
