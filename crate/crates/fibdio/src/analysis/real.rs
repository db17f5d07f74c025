//! Certified fixed-point real arithmetic.
//!
//! An [`HpReal`] is a decimal ball: a center mantissa `m` at a fixed
//! decimal `scale` together with an error radius, so the true value lies
//! in `[(m - err) 10^-scale, (m + err) 10^-scale]`. Every operation
//! computes exact integer bounds for the result interval and rounds them
//! outward, so enclosures are rigorous by construction. Transcendental
//! evaluations (`ln`) run at a guarded working scale and contribute a
//! documented number of final ulps.
//!
//! Printing truncates to certified digits only.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

/// Decimal ball with a certified error radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HpReal {
    m: BigInt,
    err: BigInt, // >= 0, in ulps of 10^-scale
    scale: u32,
}

impl HpReal {
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    /// Exact integer as a ball.
    pub fn from_bigint(v: &BigInt, scale: u32) -> Self {
        HpReal {
            m: v * pow10(scale),
            err: BigInt::zero(),
            scale,
        }
    }

    pub fn from_i64(v: i64, scale: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), scale)
    }

    /// Rational `num/den`, rounded to `scale` with at most one ulp of error.
    pub fn from_ratio(num: &BigInt, den: &BigInt, scale: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() {
            (-num, -den.clone())
        } else {
            (num.clone(), den.clone())
        };
        let scaled = num * pow10(scale);
        let lo = div_floor(&scaled, &den);
        let hi = div_ceil(&scaled, &den);
        Self::from_bounds_scaled(lo, hi, scale)
    }

    /// Ball from exact scaled integer bounds `[lo, hi] * 10^-scale`.
    pub fn from_bounds_scaled(lo: BigInt, hi: BigInt, scale: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        let m = (&lo + &hi).div_floor(&BigInt::from(2));
        let err = &hi - &m; // >= hi-lo/2 and >= m-lo
        HpReal { m, err, scale }
    }

    pub fn zero(scale: u32) -> Self {
        Self::from_i64(0, scale)
    }

    pub fn one(scale: u32) -> Self {
        Self::from_i64(1, scale)
    }

    /// Lower interval bound as a scaled integer at this ball's scale.
    fn lo_scaled(&self) -> BigInt {
        &self.m - &self.err
    }

    fn hi_scaled(&self) -> BigInt {
        &self.m + &self.err
    }

    /// Bounds rescaled (outward) to an arbitrary scale.
    fn bounds_at(&self, scale: u32) -> (BigInt, BigInt) {
        match scale.cmp(&self.scale) {
            Ordering::Equal => (self.lo_scaled(), self.hi_scaled()),
            Ordering::Greater => {
                let f = pow10(scale - self.scale);
                (self.lo_scaled() * &f, self.hi_scaled() * f)
            }
            Ordering::Less => {
                let f = pow10(self.scale - scale);
                (
                    div_floor(&self.lo_scaled(), &f),
                    div_ceil(&self.hi_scaled(), &f),
                )
            }
        }
    }

    /// Same value, re-centered at a new scale (outward rounding).
    pub fn rescaled(&self, scale: u32) -> Self {
        let (lo, hi) = self.bounds_at(scale);
        Self::from_bounds_scaled(lo, hi, scale)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let s = self.scale.max(rhs.scale);
        let (a0, a1) = self.bounds_at(s);
        let (b0, b1) = rhs.bounds_at(s);
        Self::from_bounds_scaled(a0 + b0, a1 + b1, s)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        HpReal {
            m: -&self.m,
            err: self.err.clone(),
            scale: self.scale,
        }
    }

    pub fn abs(&self) -> Self {
        let lo = self.lo_scaled();
        let hi = self.hi_scaled();
        if !lo.is_negative() {
            return self.clone();
        }
        if !hi.is_positive() {
            return self.neg();
        }
        Self::from_bounds_scaled(BigInt::zero(), (-lo).max(hi), self.scale)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let s = self.scale.max(rhs.scale);
        let (a0, a1) = (self.lo_scaled(), self.hi_scaled());
        let (b0, b1) = (rhs.lo_scaled(), rhs.hi_scaled());
        let corners = [&a0 * &b0, &a0 * &b1, &a1 * &b0, &a1 * &b1];
        let lo = corners.iter().min().unwrap();
        let hi = corners.iter().max().unwrap();
        // products live at scale self.scale + rhs.scale
        let down = self.scale + rhs.scale - s;
        let f = pow10(down);
        Self::from_bounds_scaled(div_floor(lo, &f), div_ceil(hi, &f), s)
    }

    /// Division; the divisor interval must not contain zero.
    pub fn div(&self, rhs: &Self) -> Self {
        let (b0, b1) = (rhs.lo_scaled(), rhs.hi_scaled());
        assert!(
            b0.is_positive() || b1.is_negative(),
            "division by an interval containing zero (raise the working precision)"
        );
        let s = self.scale.max(rhs.scale);
        let (a0, a1) = (self.lo_scaled(), self.hi_scaled());
        // corner (A * 10^{rhs.scale - self.scale + s}) / B
        let f = pow10(rhs.scale + s - self.scale);
        let num0 = &a0 * &f;
        let num1 = &a1 * &f;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for num in [&num0, &num1] {
            for den in [&b0, &b1] {
                let c_lo = div_floor(num, den);
                let c_hi = div_ceil(num, den);
                lo = Some(match lo {
                    Some(v) => v.min(c_lo),
                    None => c_lo,
                });
                hi = Some(match hi {
                    Some(v) => v.max(c_hi),
                    None => c_hi,
                });
            }
        }
        Self::from_bounds_scaled(lo.unwrap(), hi.unwrap(), s)
    }

    pub fn recip(&self) -> Self {
        Self::one(self.scale).div(self)
    }

    /// Integer power by squaring; exponent 0 gives the exact ball 1.
    pub fn powi(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one(self.scale);
        }
        if e < 0 {
            return self.powi(-e).recip();
        }
        let mut base = self.clone();
        let mut e = e as u64;
        let mut acc: Option<HpReal> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// Square root over a non-negative interval.
    pub fn sqrt(&self) -> Self {
        let (lo, hi) = (self.lo_scaled(), self.hi_scaled());
        assert!(!lo.is_negative(), "sqrt of an interval below zero");
        let f = pow10(self.scale);
        let lo_n = (&lo * &f).sqrt(); // floor sqrt of lo * 10^{2s}
        let hi_scaled = &hi * &f;
        let mut hi_n = hi_scaled.sqrt();
        if &hi_n * &hi_n < hi_scaled {
            hi_n += 1;
        }
        Self::from_bounds_scaled(lo_n, hi_n, self.scale)
    }

    /// r-th root over a non-negative interval (r >= 1).
    pub fn nth_root(&self, r: u32) -> Self {
        assert!(r >= 1);
        let (lo, hi) = (self.lo_scaled(), self.hi_scaled());
        assert!(!lo.is_negative(), "root of an interval below zero");
        let f = pow10(self.scale * (r - 1));
        let lo_n = (&lo * &f).nth_root(r);
        let hi_scaled = &hi * &f;
        let mut hi_n = hi_scaled.nth_root(r);
        if hi_n.pow(r) < hi_scaled {
            hi_n += 1;
        }
        Self::from_bounds_scaled(lo_n, hi_n, self.scale)
    }

    /// Natural logarithm over a strictly positive interval.
    pub fn ln(&self) -> Self {
        let lo = self.lo_scaled();
        let hi = self.hi_scaled();
        assert!(
            lo.is_positive(),
            "ln of an interval reaching zero (raise the working precision)"
        );
        let den = pow10(self.scale);
        if self.err.is_zero() && lo == den {
            return Self::zero(self.scale); // ln 1 = 0 exactly
        }
        let (lo_ln, e0) = ln_point(&lo, &den, self.scale);
        let (hi_ln, e1) = ln_point(&hi, &den, self.scale);
        Self::from_bounds_scaled(lo_ln - e0, hi_ln + e1, self.scale)
    }

    /// Exact rational lower bound of the enclosure.
    pub fn lo_ratio(&self) -> num_rational::BigRational {
        num_rational::BigRational::new(self.lo_scaled(), pow10(self.scale))
    }

    /// Exact rational upper bound of the enclosure.
    pub fn hi_ratio(&self) -> num_rational::BigRational {
        num_rational::BigRational::new(self.hi_scaled(), pow10(self.scale))
    }

    /// Distance to the nearest integer, as a ball inside [0, 1/2].
    pub fn nearest_int_dist(&self) -> Self {
        let s = self.scale;
        let unit = pow10(s);
        let half = &unit / 2;
        // nearest integer to the center
        let n0 = div_floor(&(&self.m + &half), &unit);
        let shift = &n0 * &unit;
        let d_lo = self.lo_scaled() - &shift;
        let d_hi = self.hi_scaled() - &shift;
        // |d| interval
        let (a, b) = if !d_lo.is_negative() {
            (d_lo, d_hi)
        } else if !d_hi.is_positive() {
            (-d_hi, -d_lo)
        } else {
            (BigInt::zero(), (-d_lo).max(d_hi))
        };
        if &b - &a >= unit || b > unit {
            // radius too large to localize; the trivial enclosure
            return Self::from_bounds_scaled(BigInt::zero(), half, s);
        }
        let (lo, hi) = if b <= half {
            (a, b)
        } else if a >= half {
            (&unit - &b, &unit - &a)
        } else {
            (a.min(&unit - &b), half)
        };
        Self::from_bounds_scaled(lo, hi, s)
    }

    /// Interval of max(x, y): both endpoints take the pointwise max.
    pub fn max_hull(&self, rhs: &Self) -> Self {
        let s = self.scale.max(rhs.scale);
        let (a0, a1) = self.bounds_at(s);
        let (b0, b1) = rhs.bounds_at(s);
        Self::from_bounds_scaled(a0.max(b0), a1.max(b1), s)
    }

    /// Interval of min(x, y).
    pub fn min_hull(&self, rhs: &Self) -> Self {
        let s = self.scale.max(rhs.scale);
        let (a0, a1) = self.bounds_at(s);
        let (b0, b1) = rhs.bounds_at(s);
        Self::from_bounds_scaled(a0.min(b0), a1.min(b1), s)
    }

    // ----- certified queries -------------------------------------------

    pub fn is_certainly_positive(&self) -> bool {
        self.lo_scaled().is_positive()
    }

    pub fn is_certainly_negative(&self) -> bool {
        self.hi_scaled().is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo_scaled().is_positive() && !self.hi_scaled().is_negative()
    }

    /// Certified strict comparison: true only when every point of `self`
    /// is below every point of `rhs`.
    pub fn certainly_lt(&self, rhs: &Self) -> bool {
        let s = self.scale.max(rhs.scale);
        self.bounds_at(s).1 < rhs.bounds_at(s).0
    }

    pub fn certainly_le(&self, rhs: &Self) -> bool {
        let s = self.scale.max(rhs.scale);
        self.bounds_at(s).1 <= rhs.bounds_at(s).0
    }

    pub fn certainly_gt(&self, rhs: &Self) -> bool {
        rhs.certainly_lt(self)
    }

    pub fn certainly_ge(&self, rhs: &Self) -> bool {
        rhs.certainly_le(self)
    }

    /// Certified comparison against an exact rational, when the interval
    /// does not straddle it.
    pub fn cmp_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Ordering> {
        assert!(den.is_positive());
        let target = num * pow10(self.scale);
        let lo = self.lo_scaled() * den;
        let hi = self.hi_scaled() * den;
        if hi < target {
            Some(Ordering::Less)
        } else if lo > target {
            Some(Ordering::Greater)
        } else if lo == target && hi == target {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn gt_ratio(&self, num: i64, den: i64) -> bool {
        matches!(
            self.cmp_ratio(&BigInt::from(num), &BigInt::from(den)),
            Some(Ordering::Greater)
        )
    }

    pub fn lt_ratio(&self, num: i64, den: i64) -> bool {
        matches!(
            self.cmp_ratio(&BigInt::from(num), &BigInt::from(den)),
            Some(Ordering::Less)
        )
    }

    /// Whether the error radius is at most `10^-d`.
    pub fn radius_within_pow10(&self, d: u32) -> bool {
        if d > self.scale {
            return self.err.is_zero();
        }
        self.err <= pow10(self.scale - d)
    }

    /// Test helper: the ball lies within `10^-digits` of the given decimal
    /// literal (which may be a truncation of the true value).
    pub fn matches_decimal(&self, text: &str, digits: u32) -> bool {
        let (num, den) = parse_decimal(text);
        let s = self.scale.max(den.to_string().len() as u32).max(digits + 1);
        let (lo, hi) = self.bounds_at(s);
        let target = &num * pow10(s) / &den;
        let tol = pow10(s - digits);
        lo >= &target - &tol && hi <= target + tol
    }

    /// Approximate f64 view (for report text, never for certification).
    pub fn to_f64_approx(&self) -> f64 {
        let digits = self.m.to_string().len() as i64;
        let keep = 17i64.min(digits);
        let drop = (digits - keep).max(0) as u32;
        let top = div_floor(&self.m, &pow10(drop));
        top.to_f64().unwrap_or(f64::NAN) * 10f64.powi(drop as i32 - self.scale as i32)
    }

    /// Number of certified fractional digits for display: the longest
    /// truncation on which the two interval endpoints agree.
    fn certified_frac_digits(&self) -> u32 {
        if self.err.is_zero() {
            return self.scale;
        }
        let ten = BigInt::from(10);
        let mut lo = self.lo_scaled();
        let mut hi = self.hi_scaled();
        let mut f = self.scale;
        while f > 0 && lo != hi {
            lo = lo.div_floor(&ten);
            hi = hi.div_floor(&ten);
            f -= 1;
        }
        f
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let frac = self.certified_frac_digits();
        let drop = self.scale - frac;
        let scaled = div_floor(&self.m.abs(), &pow10(drop));
        let sign = if self.m.is_negative() { "-" } else { "" };
        let digits = scaled.to_string();
        if frac == 0 {
            return write!(f, "{sign}{digits}");
        }
        let frac = frac as usize;
        let (int, fr) = if digits.len() <= frac {
            ("0".to_string(), format!("{}{digits}", "0".repeat(frac - digits.len())))
        } else {
            let (i, r) = digits.split_at(digits.len() - frac);
            (i.to_string(), r.to_string())
        };
        let fr = if self.err.is_zero() {
            fr.trim_end_matches('0')
        } else {
            fr.as_str()
        };
        if fr.is_empty() {
            write!(f, "{sign}{int}")
        } else {
            write!(f, "{sign}{int}.{fr}")
        }
    }
}

/// Parses a plain decimal literal into (numerator, denominator).
fn parse_decimal(text: &str) -> (BigInt, BigInt) {
    let neg = text.starts_with('-');
    let t = text.trim_start_matches('-');
    let (int_part, frac_part) = match t.split_once('.') {
        Some((a, b)) => (a, b),
        None => (t, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().expect("malformed decimal literal");
    let num = if neg { -num } else { num };
    (num, pow10(frac_part.len() as u32))
}

// ----- ln --------------------------------------------------------------

/// Guard digits applied to every transcendental evaluation.
const LN_GUARD: u32 = 15;

fn ln2_cache() -> &'static Mutex<HashMap<u32, BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// ln 2 at working scale `w`, accurate to a few ulps (absorbed by callers'
/// error budgets).
fn ln2_scaled(w: u32) -> BigInt {
    if let Some(v) = ln2_cache().lock().unwrap().get(&w) {
        return v.clone();
    }
    // ln 2 = 2 atanh(1/3)
    let v: BigInt = atanh_inv_int(3, w) * 2;
    ln2_cache().lock().unwrap().insert(w, v.clone());
    v
}

/// atanh(1/k) * 10^w by the odd series, truncated below one ulp.
fn atanh_inv_int(k: u32, w: u32) -> BigInt {
    let unit = pow10(w);
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut term = div_floor(&unit, &k); // (1/k) scaled
    let mut sum = term.clone();
    let mut j = 1u32;
    while !term.is_zero() {
        term = div_floor(&term, &k2);
        if term.is_zero() {
            break;
        }
        sum += div_floor(&term, &BigInt::from(2 * j + 1));
        j += 1;
    }
    sum
}

/// ln(p/q) for positive integers, at `scale`, returning the mantissa and a
/// certified ulp bound at that scale.
///
/// Evaluation runs at `scale + LN_GUARD` digits; range reduction by powers
/// of two brings the argument into [3/4, 3/2), then ln x = 2 atanh(y) with
/// y = (x-1)/(x+1), |y| <= 1/5. Accumulated rounding stays far below the
/// guard allowance, which is checked against a coarse worst-case budget.
fn ln_point(p: &BigInt, q: &BigInt, scale: u32) -> (BigInt, BigInt) {
    assert!(p.is_positive() && q.is_positive());
    let w = scale + LN_GUARD;
    let unit = pow10(w);
    let mut x = div_floor(&(p * &unit), q);
    assert!(x.is_positive(), "ln argument underflows working scale");
    let mut ops: u64 = 4; // input rounding + slack

    let upper = &unit * 3 / 2;
    let lower = &unit * 3 / 4;
    let mut j: i64 = 0;
    while x >= upper {
        x = div_floor(&x, &BigInt::from(2));
        j += 1;
        ops += 1;
    }
    while x < lower {
        x <<= 1;
        j -= 1;
    }

    // y = (x - 1)/(x + 1), scaled
    let y = div_floor(&((&x - &unit) * &unit), &(&x + &unit));
    let y_abs = y.abs();
    let y2 = div_floor(&(&y_abs * &y_abs), &unit);
    let mut term = y_abs.clone();
    let mut sum = y_abs;
    let mut idx = 1u64;
    while !term.is_zero() {
        term = div_floor(&(&term * &y2), &unit);
        if term.is_zero() {
            break;
        }
        sum += div_floor(&term, &BigInt::from(2 * idx + 1));
        idx += 1;
        ops += 3;
    }
    let atanh = if y.is_negative() { -sum } else { sum };
    let mut val = atanh * 2;
    if j != 0 {
        val += ln2_scaled(w) * BigInt::from(j);
        // ln2 carries a few ulps; scaled by |j|
        ops += 8 * j.unsigned_abs();
    }
    // input error (<= ops ulps from the reductions) passes through d ln/dx
    // <= 4/3 on [3/4, 3/2); fold everything into one coarse budget.
    let budget = BigInt::from(8 * ops + 64);
    assert!(
        &budget * 4 < pow10(LN_GUARD),
        "ln error budget exceeded the guard digits"
    );
    let f = pow10(LN_GUARD);
    let lo = div_floor(&(&val - &budget), &f);
    let hi = div_ceil(&(&val + &budget), &f);
    let m = (&lo + &hi).div_floor(&BigInt::from(2));
    let e = (&hi - &m).max(BigInt::one());
    (m, e)
}
