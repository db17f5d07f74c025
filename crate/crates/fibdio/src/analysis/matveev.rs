//! Matveev-type lower bounds for linear forms in logarithms.
//!
//! Only the effective constant and the combined coefficient lambda are
//! computed here; the bound chains consume them in log form since the
//! raw lower bound (eB)^-lambda underflows anything representable.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::real::HpReal;
use super::AnalysisError;

/// C(n, l) = 1.4 * 30^{n+3} * n^{4.5} * l^2 * (1 + ln l), certified.
pub fn matveev_constant(n: u32, ell: u32, digits: u32) -> HpReal {
    assert!(n >= 1 && ell >= 1);
    let s = digits + 10;
    let c14 = HpReal::from_ratio(&BigInt::from(7), &BigInt::from(5), s);
    let pow30 = HpReal::from_bigint(&BigInt::from(30u32).pow(n + 3), s);
    // n^{4.5} = n^4 sqrt(n)
    let n4 = HpReal::from_bigint(&BigInt::from(n).pow(4), s);
    let sqrt_n = HpReal::from_i64(n as i64, s).sqrt();
    let ell2 = HpReal::from_bigint(&BigInt::from(ell).pow(2), s);
    let log_term = HpReal::one(s).add(&HpReal::from_i64(ell as i64, s).ln());
    c14.mul(&pow30)
        .mul(&n4)
        .mul(&sqrt_n)
        .mul(&ell2)
        .mul(&log_term)
}

/// One multiplicand of the linear form: an algebraic gamma > 0 with its
/// logarithmic height and integer exponent.
#[derive(Debug, Clone)]
pub struct MatveevTerm {
    pub gamma: HpReal,
    pub height: HpReal,
    pub exponent: BigInt,
}

impl MatveevTerm {
    pub fn new(gamma: HpReal, height: HpReal, exponent: BigInt) -> Self {
        MatveevTerm {
            gamma,
            height,
            exponent,
        }
    }
}

/// The data of one application of the lower bound.
#[derive(Debug, Clone)]
pub struct MatveevInstance {
    pub terms: Vec<MatveevTerm>,
    pub field_degree: u32,
}

/// The combined coefficient lambda = C(n, l) * prod A_i together with the
/// exponent maximum B.
#[derive(Debug, Clone)]
pub struct MatveevBound {
    pub lambda: HpReal,
    pub a_factors: Vec<HpReal>,
    pub b_max: BigInt,
}

impl MatveevBound {
    /// ln of the lower bound (eB)^-lambda, i.e. -lambda (1 + ln B).
    pub fn log_lower_bound(&self, digits: u32) -> HpReal {
        let s = digits + 10;
        let b = HpReal::from_bigint(&self.b_max, s);
        self.lambda.mul(&HpReal::one(s).add(&b.ln())).neg()
    }
}

/// Elementwise interval max, used for the A_i floors.
fn ball_max(values: &[HpReal]) -> HpReal {
    let mut it = values.iter();
    let mut acc = it.next().expect("empty max").clone();
    for v in it {
        acc = acc.max_hull(v);
    }
    acc
}

/// lambda = C(n, l) prod_i A_i with A_i >= max{l h(gamma_i), |ln gamma_i|, 0.16}.
///
/// Rejects the degenerate form in which every exponent vanishes.
pub fn matveev_lambda(
    inst: &MatveevInstance,
    digits: u32,
) -> Result<MatveevBound, AnalysisError> {
    if inst.terms.iter().all(|t| t.exponent.is_zero()) {
        return Err(AnalysisError::DegenerateForm);
    }
    let s = digits + 10;
    let n = inst.terms.len() as u32;
    let mut lambda = matveev_constant(n, inst.field_degree, digits);
    let floor016 = HpReal::from_ratio(&BigInt::from(4), &BigInt::from(25), s);
    let ell = HpReal::from_i64(inst.field_degree as i64, s);
    let mut a_factors = Vec::with_capacity(inst.terms.len());
    for t in &inst.terms {
        assert!(
            t.gamma.is_certainly_positive(),
            "gamma_i must be certified positive"
        );
        let a_i = ball_max(&[ell.mul(&t.height), t.gamma.ln().abs(), floor016.clone()]);
        lambda = lambda.mul(&a_i);
        a_factors.push(a_i);
    }
    let b_max = inst
        .terms
        .iter()
        .map(|t| t.exponent.abs())
        .max()
        .expect("nonempty instance");
    Ok(MatveevBound {
        lambda,
        a_factors,
        b_max,
    })
}
