//! Equation pipelines: index-range derivation, sieving, exact confirmation
//! and report assembly, plus an independent brute-force oracle and the
//! bound-chain verification harness.

pub mod bounds;
pub mod consecutive;
pub mod oracle;
pub mod squares;
pub mod two_powers;

use num_bigint::BigUint;
use thiserror::Error;

use crate::report::SolutionRow;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("search space of {candidates} candidates exceeds the exact-evaluation cap {cap}")]
    RangeTooLarge { candidates: u64, cap: u64 },
    #[error("invalid equation specification: {0}")]
    InvalidSpec(String),
}

/// Which Diophantine family a run addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationKind {
    /// F_n^2 + F_{n+d}^2 = F_m over the classical sequence.
    SquaresK2,
    /// Same with k-generalized terms, k >= 3.
    SquaresK { k: u32 },
    /// F_n^s + F_{n+d}^s = F_m.
    TwoPowers,
    /// F_n^s + F_{n+1}^s + ... + F_{n+d}^s = F_m with d + 1 < n.
    ConsecutivePowers,
}

/// Inclusive search ranges for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquationSpec {
    pub kind: EquationKind,
    pub n: (u64, u64),
    pub d: (u64, u64),
    pub s: (u64, u64),
}

impl EquationSpec {
    pub fn validate(&self) -> Result<(), SolverError> {
        let ok_range = |(lo, hi): (u64, u64)| lo <= hi;
        if !(ok_range(self.n) && ok_range(self.d) && ok_range(self.s)) {
            return Err(SolverError::InvalidSpec("empty range".into()));
        }
        match self.kind {
            EquationKind::SquaresK { k } if k < 3 => {
                Err(SolverError::InvalidSpec("k must be at least 3".into()))
            }
            EquationKind::ConsecutivePowers => {
                if self.s.0 < 3 || self.d.0 < 2 || self.n.0 < 3 {
                    Err(SolverError::InvalidSpec(
                        "consecutive powers need n >= 3, s >= 3, d >= 2".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// A confirmed tuple. `s` is None for the squares families (s = 2 implied
/// by the equation). The duplicate value F_1 = F_2 = 1 is canonicalized by
/// `confirm_exact`, which reports m = 2 for value 1 and m = 3 for value 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Solution {
    pub n: u64,
    pub d: u64,
    pub s: Option<u64>,
    pub m: u64,
    pub value: BigUint,
}

impl Solution {
    pub fn to_row(&self) -> SolutionRow {
        let mut tuple = vec![self.n, self.d];
        if let Some(s) = self.s {
            tuple.push(s);
        }
        SolutionRow {
            tuple,
            m: self.m,
            value_digits: self.value.to_string().len() as u64,
        }
    }
}

/// Index window for F_n^s + F_{n+d}^s = F_m: any solution has
/// m in [s(n+d-2)+2, s(n+d-1)+2].
pub fn m_range(n: u64, d: u64, s: u64) -> (u64, u64) {
    assert!(n >= 1 && d >= 1 && s >= 1);
    let t = n + d;
    (s * (t - 2) + 2, s * (t - 1) + 2)
}

/// Index window for the consecutive-power sums: m/(n+d) < s < m/(n+d-3)
/// inverted to m in [(n+d-3)s + 1, (n+d)s - 1].
pub fn m_range_consecutive(n: u64, d: u64, s: u64) -> (u64, u64) {
    assert!(n >= 3 && d >= 2 && s >= 3);
    let t = n + d;
    ((t - 3) * s + 1, t * s - 1)
}
