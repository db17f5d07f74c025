//! Independent brute-force oracle: exact evaluation of every candidate in
//! a box, no residue filters, no index windows. The pipelines are checked
//! against this on every box where both can run.

use num_bigint::BigUint;

use crate::modular::confirm_exact;
use crate::sequences::{fib_u, KBonacciGenerator};
use crate::solvers::{EquationKind, EquationSpec, Solution, SolverError};

/// Hard cap on exact evaluations per oracle run.
pub const ORACLE_CANDIDATE_CAP: u64 = 10_000_000;

/// Evaluates every candidate tuple in the spec's box exactly and returns
/// the canonical sorted solution list.
pub fn brute_force_oracle(spec: &EquationSpec) -> Result<Vec<Solution>, SolverError> {
    spec.validate()?;
    let count = candidate_count(spec);
    if count > ORACLE_CANDIDATE_CAP {
        return Err(SolverError::RangeTooLarge {
            candidates: count,
            cap: ORACLE_CANDIDATE_CAP,
        });
    }
    let mut out = Vec::new();
    match spec.kind {
        EquationKind::SquaresK2 => {
            for n in spec.n.0.max(1)..=spec.n.1 {
                for d in spec.d.0..=spec.d.1 {
                    let value = fib_u(n).pow(2) + fib_u(n + d).pow(2);
                    if let Some(m) = confirm_exact(&value) {
                        out.push(Solution {
                            n,
                            d,
                            s: None,
                            m,
                            value,
                        });
                    }
                }
            }
        }
        EquationKind::SquaresK { k } => {
            let mut gen = KBonacciGenerator::new(k);
            for n in spec.n.0.max(1)..=spec.n.1 {
                for d in spec.d.0..=spec.d.1 {
                    let value = gen.get(n as i64).unwrap().pow(2)
                        + gen.get((n + d) as i64).unwrap().pow(2);
                    if let Some(m) = gen.confirm_exact(&value) {
                        out.push(Solution {
                            n,
                            d,
                            s: None,
                            m: m as u64,
                            value,
                        });
                    }
                }
            }
        }
        EquationKind::TwoPowers => {
            for n in spec.n.0.max(1)..=spec.n.1 {
                for d in spec.d.0.max(1)..=spec.d.1 {
                    for s in spec.s.0.max(2)..=spec.s.1 {
                        let value = fib_u(n).pow(s as u32) + fib_u(n + d).pow(s as u32);
                        if let Some(m) = confirm_exact(&value) {
                            out.push(Solution {
                                n,
                                d,
                                s: Some(s),
                                m,
                                value,
                            });
                        }
                    }
                }
            }
        }
        EquationKind::ConsecutivePowers => {
            for n in spec.n.0.max(3)..=spec.n.1 {
                for d in spec.d.0.max(2)..=spec.d.1.min(n.saturating_sub(2)) {
                    for s in spec.s.0.max(3)..=spec.s.1 {
                        let mut value = BigUint::from(0u32);
                        for i in 0..=d {
                            value += fib_u(n + i).pow(s as u32);
                        }
                        if let Some(m) = confirm_exact(&value) {
                            out.push(Solution {
                                n,
                                d,
                                s: Some(s),
                                m,
                                value,
                            });
                        }
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

fn candidate_count(spec: &EquationSpec) -> u64 {
    let span = |(lo, hi): (u64, u64)| hi.saturating_sub(lo) + 1;
    let base = span(spec.n).saturating_mul(span(spec.d));
    match spec.kind {
        EquationKind::SquaresK2 | EquationKind::SquaresK { .. } => base,
        _ => base.saturating_mul(span(spec.s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_powers_small_box() {
        let spec = EquationSpec {
            kind: EquationKind::TwoPowers,
            n: (1, 19),
            d: (1, 19),
            s: (2, 10),
        };
        let sols = brute_force_oracle(&spec).unwrap();
        // family (1,1,s,3) for every s, (1,2,2,5), and the d = 1 identity
        // family at s = 2
        for s in 2..=10 {
            assert!(sols.iter().any(|x| (x.n, x.d, x.s, x.m) == (1, 1, Some(s), 3)));
        }
        assert!(sols.iter().any(|x| (x.n, x.d, x.s, x.m) == (1, 2, Some(2), 5)));
        for x in &sols {
            if x.s == Some(2) && x.d == 1 {
                assert_eq!(x.m, 2 * x.n + 1, "identity family");
            }
            if x.s >= Some(3) {
                assert_eq!((x.n, x.d), (1, 1), "only the trivial pair for s >= 3");
            }
        }
    }

    #[test]
    fn consecutive_powers_empty() {
        let spec = EquationSpec {
            kind: EquationKind::ConsecutivePowers,
            n: (3, 12),
            d: (2, 6),
            s: (3, 6),
        };
        assert_eq!(brute_force_oracle(&spec).unwrap(), vec![]);
    }

    #[test]
    fn range_guard() {
        let spec = EquationSpec {
            kind: EquationKind::TwoPowers,
            n: (1, 10_000),
            d: (1, 10_000),
            s: (2, 1000),
        };
        assert!(matches!(
            brute_force_oracle(&spec),
            Err(SolverError::RangeTooLarge { .. })
        ));
    }

    #[test]
    fn every_reported_solution_substitutes() {
        let spec = EquationSpec {
            kind: EquationKind::SquaresK2,
            n: (1, 30),
            d: (0, 30),
            s: (2, 2),
        };
        for sol in brute_force_oracle(&spec).unwrap() {
            let lhs = fib_u(sol.n).pow(2) + fib_u(sol.n + sol.d).pow(2);
            assert_eq!(lhs, fib_u(sol.m), "(n, d) = ({}, {})", sol.n, sol.d);
            assert_eq!(lhs, sol.value);
        }
    }
}
