//! Exhaustive verification over every short period.
//!
//! The sweep walks all primitive binary words `u` with `2 ≤ |u| ≤ max_len`,
//! deduplicated up to rotation and letter swap (both leave the canonical
//! system, the forks and every significance untouched), runs a configurable
//! set of per-word checks, and aggregates the longest period seen for each
//! antidictionary size `n`. The headline invariant is `|u| ≤ F(n)` with
//! equality attained for every `n` with `F(n) ≤ max_len`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::Error;
use crate::canonical::{canonical_system, verify_prop_2_4};
use crate::forks::{ForkTable, all_forks, classify, verify_lemma_2_8, verify_theorem_3_16};
use crate::systems::from_table;
use crate::word::{PeriodicWord, Symbol, Word, fibonacci, is_primitive};

/// Default sweep cap: covers `n ≤ 7` since `F(7) = 21`.
pub const DEFAULT_MAX_LEN: usize = 21;

/// Hard cap: a sweep scans `2^max_len` masks per length, which stops being a
/// desk-scale job somewhere past this.
pub const BUDGET_MAX_LEN: usize = 28;

/// One per-word check. The names (`Display`/`FromStr`) match the library
/// functions they delegate to where one exists.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Check {
    /// `|u| ≤ F(|C(W)|)`.
    FibBound,
    /// `|u| ≤ F(f + 1)` for `f` the number of finite forks.
    ForkBound,
    /// `|C(W)| = f + 1` exactly.
    ForkCount,
    /// Avoiding `C(W)` coincides with being a factor of `W`, up to `|u| + 2`.
    Definition,
    /// Every clause of the significance calculus on the classified table.
    Calculus,
    /// The abstract recurrence majorizes the significance sequence.
    Majorization,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::FibBound,
        Check::ForkBound,
        Check::ForkCount,
        Check::Definition,
        Check::Calculus,
        Check::Majorization,
    ];

    fn name(self) -> &'static str {
        match self {
            Check::FibBound => "fib-bound",
            Check::ForkBound => "fork-bound",
            Check::ForkCount => "lemma-2-8",
            Check::Definition => "prop-2-4",
            Check::Calculus => "theorem-3-16",
            Check::Majorization => "prop-4-2",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Check, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
                format!("unknown check {s:?}; valid checks: {}", names.join(", "))
            })
    }
}

/// Longest period seen for one antidictionary size.
#[derive(Clone, Debug, Serialize)]
pub struct PerN {
    pub max_period: usize,
    pub witness: String,
    pub fib: u64,
    pub bound_met: bool,
}

/// One failed check on one word. A clean sweep has none.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub word: String,
    pub check: String,
    pub details: String,
}

/// Aggregate result of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub max_len: usize,
    pub per_n: BTreeMap<usize, PerN>,
    pub words_scanned: u64,
    pub failures: Vec<Failure>,
}

impl SweepReport {
    /// True when nothing failed and every aggregated maximum respects the
    /// Fibonacci bound.
    pub fn clean(&self) -> bool {
        self.failures.is_empty() && self.per_n.values().all(|row| row.bound_met)
    }
}

/// All symmetry-class representatives of primitive words of length exactly
/// `len`, in lexicographic order: the words equal to their own necklace form.
pub fn class_reps(len: usize) -> Vec<Word> {
    (0u32..1 << len)
        .into_par_iter()
        .filter_map(|mask| {
            // A representative always starts with `a`: some rotation of the
            // word or of its complement does, and it is lexicographically
            // smaller than anything starting with `b`.
            if mask >> (len - 1) & 1 == 1 {
                return None;
            }
            let u = Word::from_symbols(
                (0..len)
                    .map(|b| {
                        if mask >> (len - 1 - b) & 1 == 0 {
                            Symbol::A
                        } else {
                            Symbol::B
                        }
                    })
                    .collect(),
            );
            (is_primitive(&u) && u == u.necklace_rep()).then_some(u)
        })
        .collect()
}

struct WordOutcome {
    word: String,
    period_len: usize,
    n: usize,
    failures: Vec<Failure>,
}

fn check_word(u: Word, checks: &[Check]) -> WordOutcome {
    let word = PeriodicWord::new(u).expect("class representatives are primitive");
    let name = word.period().to_string();
    let period_len = word.period_len();
    let n = canonical_system(&word).len();
    let mut failures = Vec::new();
    let fail = |check: Check, details: String| Failure {
        word: name.clone(),
        check: check.to_string(),
        details,
    };

    let needs_forks = checks
        .iter()
        .any(|c| matches!(c, Check::ForkBound | Check::ForkCount));
    let fork_report = needs_forks.then(|| verify_lemma_2_8(&word));
    let needs_table = checks
        .iter()
        .any(|c| matches!(c, Check::Calculus | Check::Majorization));
    let mut table: Option<ForkTable> = None;
    if needs_table {
        match all_forks(&word).and_then(|t| classify(&t, &word)) {
            Ok(t) => table = Some(t),
            Err(e) => failures.push(fail(Check::Calculus, format!("classification failed: {e}"))),
        }
    }

    for &check in checks {
        let failure = match check {
            Check::FibBound => {
                let bound = fibonacci(n as i64);
                (period_len as i64 > bound)
                    .then(|| format!("period {period_len} exceeds F({n}) = {bound}"))
            }
            Check::ForkBound => {
                let f = fork_report.as_ref().expect("computed above").finite_forks;
                let bound = fibonacci(f as i64 + 1);
                (period_len as i64 > bound)
                    .then(|| format!("period {period_len} exceeds F({}) = {bound}", f + 1))
            }
            Check::ForkCount => {
                let r = fork_report.as_ref().expect("computed above");
                (!r.equality_holds).then(|| {
                    format!(
                        "|C(W)| = {} but {} finite forks",
                        r.canonical_size, r.finite_forks
                    )
                })
            }
            Check::Definition => (!verify_prop_2_4(&word, period_len + 2))
                .then(|| "avoiding C(W) differs from occurring in W".to_string()),
            Check::Calculus => table.as_ref().and_then(|t| {
                let report = verify_theorem_3_16(t).expect("table is classified");
                (!report.passed).then(|| {
                    let bad: Vec<&str> = report
                        .clauses
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| c.clause.as_str())
                        .collect();
                    format!("failing clauses: {}", bad.join(", "))
                })
            }),
            Check::Majorization => table.as_ref().and_then(|t| match from_table(t) {
                Err(e) => Some(format!("no majorizing system: {e}")),
                Ok(system) => {
                    let y = system.generate(1, 2);
                    t.z()
                        .iter()
                        .zip(y.values())
                        .position(|(&z, &yv)| z as u64 > yv)
                        .map(|r| format!("z_{r} = {} > y_{r} = {}", t.z()[r], y.values()[r]))
                }
            }),
        };
        if let Some(details) = failure {
            failures.push(fail(check, details));
        }
    }
    WordOutcome {
        word: name,
        period_len,
        n,
        failures,
    }
}

/// Runs `checks` on every symmetry class of primitive periods up to
/// `max_len`, in one deterministic pass: the aggregation order is fixed by
/// (length, lexicographic) regardless of how many workers map the classes.
pub fn sweep(max_len: usize, checks: &[Check]) -> Result<SweepReport, Error> {
    assert!(max_len >= 2, "sweep needs max_len >= 2");
    if max_len > BUDGET_MAX_LEN {
        return Err(Error::Budget(format!(
            "sweep caps at max_len = {BUDGET_MAX_LEN}, asked for {max_len}"
        )));
    }
    let mut report = SweepReport {
        max_len,
        per_n: BTreeMap::new(),
        words_scanned: 0,
        failures: Vec::new(),
    };
    for len in 2..=max_len {
        let outcomes: Vec<WordOutcome> = class_reps(len)
            .into_par_iter()
            .map(|u| check_word(u, checks))
            .collect();
        for outcome in outcomes {
            report.words_scanned += 1;
            report.failures.extend(outcome.failures);
            let fib = fibonacci(outcome.n as i64) as u64;
            let row = report.per_n.entry(outcome.n).or_insert(PerN {
                max_period: 0,
                witness: String::new(),
                fib,
                bound_met: true,
            });
            // Strict comparison keeps the first (lexicographically least)
            // witness of the final maximum.
            if outcome.period_len > row.max_period {
                row.max_period = outcome.period_len;
                row.witness = outcome.word;
                row.bound_met = outcome.period_len as u64 <= fib;
            }
        }
    }
    Ok(report)
}
