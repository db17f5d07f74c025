//! Machine-readable run reports.
//!
//! The JSON layout is stable (UTF-8, fixed key order):
//! `{equation, ranges, bounds:[{name, computed, paper_value, anchor}],
//!   sieve:{candidates, discarded_per_prime, survivors},
//!   solutions:[{tuple, m, value_digits}], families, duration_ms}`.
//! `duration_ms` is the single run-dependent field; everything else is a
//! deterministic function of the configuration, so reports double as
//! regression fixtures.

use std::collections::BTreeMap;

use serde::Serialize;

/// One verified inequality or computed quantity, with the published value
/// it is compared against.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct BoundStep {
    pub name: String,
    pub computed: String,
    pub paper_value: String,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<StepFlag>,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StepFlag {
    Pass,
    Discrepancy,
}

impl BoundStep {
    pub fn new(
        name: impl Into<String>,
        computed: impl Into<String>,
        paper_value: impl Into<String>,
        anchor: impl Into<String>,
    ) -> Self {
        BoundStep {
            name: name.into(),
            computed: computed.into(),
            paper_value: paper_value.into(),
            anchor: anchor.into(),
            flag: None,
        }
    }

    pub fn flagged(mut self, ok: bool) -> Self {
        self.flag = Some(if ok {
            StepFlag::Pass
        } else {
            StepFlag::Discrepancy
        });
        self
    }
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct SieveStats {
    pub candidates: u64,
    pub discarded_per_prime: Vec<u64>,
    pub survivors: u64,
}

impl SieveStats {
    pub fn merge(&mut self, other: &SieveStats) {
        self.candidates += other.candidates;
        if self.discarded_per_prime.len() < other.discarded_per_prime.len() {
            self.discarded_per_prime
                .resize(other.discarded_per_prime.len(), 0);
        }
        for (a, b) in self
            .discarded_per_prime
            .iter_mut()
            .zip(&other.discarded_per_prime)
        {
            *a += b;
        }
        self.survivors += other.survivors;
    }
}

/// A confirmed solution row: `tuple` is [n, d] or [n, d, s]; `m` is the
/// index of the matching term and `value_digits` its decimal size.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SolutionRow {
    pub tuple: Vec<u64>,
    pub m: u64,
    pub value_digits: u64,
}

/// Full pipeline record for one equation run.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TheoremReport {
    pub equation: String,
    pub ranges: BTreeMap<String, [u64; 2]>,
    pub bounds: Vec<BoundStep>,
    pub sieve: SieveStats,
    pub solutions: Vec<SolutionRow>,
    pub families: Vec<String>,
    pub duration_ms: u128,
}

impl TheoremReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// Solutions-only CSV with header n,d,s,m.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,d,s,m\n");
        for r in &self.solutions {
            let (n, d) = (r.tuple[0], r.tuple[1]);
            let s = r.tuple.get(2).map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!("{n},{d},{s},{}\n", r.m));
        }
        out
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = format!("equation: {}\n", self.equation);
        for (k, [lo, hi]) in &self.ranges {
            out.push_str(&format!("  range {k}: [{lo}, {hi}]\n"));
        }
        out.push_str(&format!(
            "  sieve: {} candidates, {:?} discarded per prime, {} survivors\n",
            self.sieve.candidates, self.sieve.discarded_per_prime, self.sieve.survivors
        ));
        for b in &self.bounds {
            out.push_str(&format!(
                "  bound {}: computed {} (reference {}){}\n",
                b.name,
                b.computed,
                b.paper_value,
                match b.flag {
                    Some(StepFlag::Pass) => " PASS",
                    Some(StepFlag::Discrepancy) => " DISCREPANCY",
                    None => "",
                }
            ));
        }
        for f in &self.families {
            out.push_str(&format!("  family: {f}\n"));
        }
        if self.solutions.is_empty() {
            out.push_str("  solutions: none\n");
        } else {
            for r in &self.solutions {
                out.push_str(&format!(
                    "  solution: tuple {:?}, m = {}, value has {} digits\n",
                    r.tuple, r.m, r.value_digits
                ));
            }
        }
        out.push_str(&format!("  duration_ms: {}\n", self.duration_ms));
        out
    }
}

/// Verification record for one derivation chain.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct BoundChainReport {
    pub case: String,
    pub steps: Vec<BoundStep>,
}

impl BoundChainReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn all_passing(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.flag != Some(StepFlag::Discrepancy))
    }

    pub fn discrepancies(&self) -> Vec<&BoundStep> {
        self.steps
            .iter()
            .filter(|s| s.flag == Some(StepFlag::Discrepancy))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("chain: {}\n", self.case);
        for b in &self.steps {
            out.push_str(&format!(
                "  {}: computed {} (reference {}){}\n",
                b.name,
                b.computed,
                b.paper_value,
                match b.flag {
                    Some(StepFlag::Pass) => " PASS",
                    Some(StepFlag::Discrepancy) => " DISCREPANCY",
                    None => "",
                }
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_key_order_is_stable() {
        let rep = TheoremReport {
            equation: "two-powers".into(),
            ranges: BTreeMap::from([("n".into(), [1, 10]), ("d".into(), [1, 10])]),
            bounds: vec![BoundStep::new("cap", "57362", "58057", "s-cap").flagged(true)],
            sieve: SieveStats {
                candidates: 100,
                discarded_per_prime: vec![90, 8, 1, 0],
                survivors: 1,
            },
            solutions: vec![SolutionRow {
                tuple: vec![1, 2, 2],
                m: 5,
                value_digits: 1,
            }],
            families: vec!["(n, 1, 2n+1) at s = 2".into()],
            duration_ms: 0,
        };
        let json = rep.to_json();
        let eq_pos = json.find("\"equation\"").unwrap();
        let ranges_pos = json.find("\"ranges\"").unwrap();
        let bounds_pos = json.find("\"bounds\"").unwrap();
        let sieve_pos = json.find("\"sieve\"").unwrap();
        let sol_pos = json.find("\"solutions\"").unwrap();
        let fam_pos = json.find("\"families\"").unwrap();
        let dur_pos = json.find("\"duration_ms\"").unwrap();
        assert!(eq_pos < ranges_pos && ranges_pos < bounds_pos && bounds_pos < sieve_pos);
        assert!(sieve_pos < sol_pos && sol_pos < fam_pos && fam_pos < dur_pos);
        assert!(json.contains("\"PASS\""));
    }

    #[test]
    fn csv_covers_solutions_only() {
        let rep = TheoremReport {
            equation: "squares".into(),
            ranges: BTreeMap::new(),
            bounds: vec![],
            sieve: SieveStats::default(),
            solutions: vec![
                SolutionRow {
                    tuple: vec![1, 2],
                    m: 5,
                    value_digits: 1,
                },
                SolutionRow {
                    tuple: vec![1, 1, 7],
                    m: 3,
                    value_digits: 1,
                },
            ],
            families: vec!["ignored in csv".into()],
            duration_ms: 12,
        };
        assert_eq!(rep.to_csv(), "n,d,s,m\n1,2,,5\n1,1,7,3\n");
    }
}
