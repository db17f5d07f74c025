//! Exact arithmetic and search machinery for Diophantine equations over
//! Fibonacci and k-generalized Fibonacci numbers.
//!
//! The crate is organized around four layers:
//!
//! * [`sequences`] — exact big-integer generators for Fibonacci, Lucas and
//!   k-bonacci numbers, plus the growth inequalities they satisfy.
//! * [`analysis`] — certified high-precision real arithmetic, continued
//!   fractions with reliability accounting, the Legendre criterion, the
//!   Dujella–Pethő reduction and Matveev-type constants.
//! * [`modular`] — Pisano periods and multi-prime residue filters used to
//!   sieve candidate tuples before exact confirmation.
//! * [`solvers`] — the equation pipelines (sum of two squares, sum of two
//!   s-th powers, sums of consecutive s-th powers), an independent
//!   brute-force oracle, and bound-chain verification reports.

pub mod analysis;
pub mod modular;
pub mod report;
pub mod sequences;
pub mod solvers;
