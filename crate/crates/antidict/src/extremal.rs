//! The family of words attaining the Fibonacci period bound.
//!
//! Starting from `s_0 = a`, `t_0 = b`, the rules `s_{i+1} = s_i s_i t_i` and
//! `t_{i+1} = s_i t_i` build periods with `|s_i| = F(2i+1)` and
//! `|t_i| = F(2i)`. The word `(t_i)^∞` needs exactly `2i` forbidden words and
//! `(s_i)^∞` exactly `2i + 1`, so both sit on the bound `|u| ≤ F(|C(W)|)`
//! with equality. Within the exhaustive sweep range they are also the *only*
//! periods (up to rotation and letter swap) that reach it.

use serde::Serialize;

use crate::canonical::canonical_system;
use crate::word::{PeriodicWord, Symbol, Word, fibonacci, is_primitive};

/// One generation of the extremal family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalPair {
    pub i: usize,
    pub s: Word,
    pub t: Word,
}

/// Default generation cap for reports and the CLI. `|s_6| = F(13) = 377`
/// keeps the canonical-system computation instant while reaching well past
/// the exhaustive-sweep range.
pub const DEFAULT_MAX_GENERATION: usize = 6;

/// Builds the `i`-th pair of the family.
pub fn gen_extremal(i: usize) -> ExtremalPair {
    let mut s = Word::from_symbols(vec![Symbol::A]);
    let mut t = Word::from_symbols(vec![Symbol::B]);
    for _ in 0..i {
        let next_s = s.concat(&s).concat(&t);
        t = s.concat(&t);
        s = next_s;
    }
    debug_assert!(is_primitive(&s) && is_primitive(&t));
    debug_assert_eq!(s.len() as i64, fibonacci(2 * i as i64 + 1));
    debug_assert_eq!(t.len() as i64, fibonacci(2 * i as i64));
    ExtremalPair { i, s, t }
}

/// Everything generation `i` promises, checked on the nose.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremalReport {
    pub i: usize,
    pub s: String,
    pub t: String,
    pub s_len: usize,
    pub t_len: usize,
    pub s_system_size: usize,
    pub t_system_size: usize,
    pub passed: bool,
}

/// Checks that generation `i ≥ 1` meets the period bound with equality:
/// `(t_i)^∞` takes `2i` forbidden words for a period of length `F(2i)`, and
/// `(s_i)^∞` takes `2i + 1` for a period of length `F(2i + 1)`.
pub fn verify_extremal(i: usize) -> ExtremalReport {
    assert!(i >= 1, "generation 0 is the single-letter seed pair");
    let pair = gen_extremal(i);
    let s_inf = PeriodicWord::new(pair.s.clone()).expect("s_i is primitive");
    let t_inf = PeriodicWord::new(pair.t.clone()).expect("t_i is primitive");
    let s_system_size = canonical_system(&s_inf).len();
    let t_system_size = canonical_system(&t_inf).len();
    let passed = t_system_size == 2 * i
        && s_system_size == 2 * i + 1
        && pair.t.len() as i64 == fibonacci(2 * i as i64)
        && pair.s.len() as i64 == fibonacci(2 * i as i64 + 1);
    ExtremalReport {
        i,
        s: pair.s.to_string(),
        t: pair.t.to_string(),
        s_len: pair.s.len(),
        t_len: pair.t.len(),
        s_system_size,
        t_system_size,
        passed,
    }
}
