//! Finite binary words and bi-infinite periodic words.
//!
//! A [`Word`] is a finite string over the two-letter alphabet `{a, b}`; the
//! empty word is written `Λ` in comments. A [`PeriodicWord`] is the
//! bi-infinite word `u^∞ = …uuu…` determined by a primitive period `u`.
//! All factor and occurrence queries on a periodic word are cyclic: a factor
//! may wrap around the period boundary, and occurrence counts are per period.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// One letter of the two-letter alphabet.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Symbol {
    A,
    B,
}

impl Symbol {
    pub const ALL: [Symbol; 2] = [Symbol::A, Symbol::B];

    /// The other letter.
    pub fn other(self) -> Symbol {
        match self {
            Symbol::A => Symbol::B,
            Symbol::B => Symbol::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::A => 'a',
            Symbol::B => 'b',
        }
    }

    pub fn from_char(c: char) -> Result<Symbol, Error> {
        match c {
            'a' => Ok(Symbol::A),
            'b' => Ok(Symbol::B),
            _ => Err(Error::InvalidSymbol(c)),
        }
    }
}

/// A finite word over `{a, b}`.
///
/// Words are ordered shortlex (by length, then lexicographically), which is
/// the order used everywhere a canonical listing is needed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Word {
        Word(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self` repeated `k` times.
    pub fn repeated(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// The contiguous piece `self[start..start + len]` (non-cyclic).
    pub fn slice(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    /// True iff `self` occurs as a contiguous block of `other`. Λ is a factor
    /// of everything.
    pub fn is_factor_of(&self, other: &Word) -> bool {
        self.is_empty() || other.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    pub fn is_proper_suffix_of(&self, other: &Word) -> bool {
        self.len() < other.len() && self.is_suffix_of(other)
    }

    /// Left rotation by `r`: `rotated(1)` maps `xw` to `wx`.
    pub fn rotated(&self, r: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let r = r % self.len();
        let mut v = self.0[r..].to_vec();
        v.extend_from_slice(&self.0[..r]);
        Word(v)
    }

    /// The word with `a` and `b` exchanged.
    pub fn complemented(&self) -> Word {
        Word(self.0.iter().map(|s| s.other()).collect())
    }

    /// Lexicographically least rotation.
    pub fn least_rotation(&self) -> Word {
        (0..self.len().max(1))
            .map(|r| self.rotated(r))
            .min()
            .unwrap_or_else(Word::empty)
    }

    /// Canonical representative of the equivalence class of `self` under
    /// rotation and letter exchange: the least among all rotations of the
    /// word and of its complement.
    pub fn necklace_rep(&self) -> Word {
        self.least_rotation()
            .min(self.complemented().least_rotation())
    }
}

impl From<Symbol> for Word {
    fn from(s: Symbol) -> Word {
        Word(vec![s])
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word, Error> {
        s.chars().map(Symbol::from_char).collect()
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Word, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff `w` is nonempty and not a proper power `v^k` with `k ≥ 2`.
pub fn is_primitive(w: &Word) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| w.0[i] == w.0[i - d]) {
            return false;
        }
    }
    true
}

/// The shortest `v` with `w = v^k`. For primitive `w` this is `w` itself.
pub fn primitive_root(w: &Word) -> Word {
    let n = w.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| w.0[i] == w.0[i - d]) {
            return w.slice(0, d);
        }
    }
    w.clone()
}

/// Fibonacci numbers with the convention `F(0) = F(1) = 1`, extended to
/// negative indices by running the recurrence backwards, so `F(-1) = 0`,
/// `F(-2) = 1`, `F(-3) = -1`.
pub fn fibonacci(k: i64) -> i64 {
    if k >= 0 {
        let (mut prev, mut cur) = (1i64, 1i64);
        for _ in 1..=k {
            let next = prev.checked_add(cur).expect("fibonacci overflow");
            prev = cur;
            cur = next;
        }
        prev
    } else {
        // Walking down: F(j - 1) = F(j + 1) - F(j).
        let (mut above, mut cur) = (1i64, 1i64); // F(1), F(0)
        for _ in 0..-k {
            let below = above - cur;
            above = cur;
            cur = below;
        }
        cur
    }
}

/// The bi-infinite word `u^∞` for a primitive period `u`.
///
/// Two values compare equal only if their periods are equal as strings; use
/// [`PeriodicWord::same_word_as`] for equality of the underlying bi-infinite
/// words (periods equal up to rotation).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicWord {
    period: Word,
}

impl PeriodicWord {
    /// Fails on an empty period and on proper powers: a period like `abab`
    /// denotes the same bi-infinite word as `ab` and is rejected so that the
    /// period length is well defined.
    pub fn new(period: Word) -> Result<PeriodicWord, Error> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        if !is_primitive(&period) {
            return Err(Error::NonPrimitivePeriod);
        }
        Ok(PeriodicWord { period })
    }

    pub fn parse(s: &str) -> Result<PeriodicWord, Error> {
        PeriodicWord::new(s.parse()?)
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn has_both_letters(&self) -> bool {
        let syms = self.period.symbols();
        syms.contains(&Symbol::A) && syms.contains(&Symbol::B)
    }

    pub fn symbol_at(&self, i: usize) -> Symbol {
        self.period.0[i % self.period.len()]
    }

    /// The factor of length `len` starting at position `start` (positions are
    /// taken modulo the period, so the window may wrap).
    pub fn window(&self, start: usize, len: usize) -> Word {
        (0..len).map(|j| self.symbol_at(start + j)).collect()
    }

    pub fn is_factor(&self, v: &Word) -> bool {
        self.significance(v) > 0 || v.is_empty()
    }

    /// Number of occurrences of `v` per period: the count of start positions
    /// `i ∈ [0, |u|)` with `u^∞[i .. i+|v|] = v`. Zero iff `v` is not a
    /// factor; `significance(Λ) = |u|`.
    pub fn significance(&self, v: &Word) -> usize {
        let n = self.period.len();
        (0..n)
            .filter(|&i| (0..v.len()).all(|j| self.symbol_at(i + j) == v.0[j]))
            .count()
    }

    /// All factors of length at most `max_len`, including Λ.
    pub fn factors_up_to(&self, max_len: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for level in self.factors_by_length(max_len) {
            out.extend(level);
        }
        out
    }

    /// Factors grouped by length: element `ℓ` of the result is the set of
    /// factors of length exactly `ℓ`, for `ℓ = 0..=max_len`.
    pub(crate) fn factors_by_length(&self, max_len: usize) -> Vec<HashSet<Word>> {
        let n = self.period.len();
        (0..=max_len)
            .map(|len| (0..n).map(|i| self.window(i, len)).collect())
            .collect()
    }

    /// The representative with the lexicographically least period among all
    /// rotations. Two periodic words denote the same bi-infinite word iff
    /// their canonical representatives are equal.
    pub fn canonical(&self) -> PeriodicWord {
        PeriodicWord {
            period: self.period.least_rotation(),
        }
    }

    pub fn same_word_as(&self, other: &PeriodicWord) -> bool {
        self.period.least_rotation() == other.period.least_rotation()
    }
}

impl fmt::Display for PeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^inf", self.period)
    }
}

impl fmt::Debug for PeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^inf", self.period)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn pw(s: &str) -> PeriodicWord {
        PeriodicWord::parse(s).unwrap()
    }

    /// All words of length exactly `len`, in lexicographic order.
    pub(crate) fn all_words(len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| {
                    Symbol::ALL.iter().map(move |&s| {
                        let mut v = w.clone();
                        v.push(s);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Oracle: factor test on the materialized string `u` repeated enough
    /// times, via plain substring search.
    fn is_factor_oracle(period: &str, v: &str) -> bool {
        let reps = v.len() / period.len() + 2;
        period.repeat(reps).contains(v)
    }

    /// Oracle: occurrence count over start positions in one period, on the
    /// materialized repeated string.
    fn significance_oracle(period: &str, v: &str) -> usize {
        let reps = v.len() / period.len() + 2;
        let s = period.repeat(reps).into_bytes();
        let vb = v.as_bytes();
        (0..period.len())
            .filter(|&i| &s[i..i + vb.len()] == vb)
            .count()
    }

    #[test]
    fn symbol_basics() {
        assert_eq!(Symbol::A.other(), Symbol::B);
        assert_eq!(Symbol::from_char('a').unwrap(), Symbol::A);
        assert_eq!(Symbol::from_char('x'), Err(Error::InvalidSymbol('x')));
    }

    #[test]
    fn word_parse_display_roundtrip() {
        for s in ["", "a", "b", "ab", "aabab", "ababbabbabbababbabbabba"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert!("abc".parse::<Word>().is_err());
    }

    #[test]
    fn shortlex_order() {
        let mut v = [w("b"), w("aa"), w(""), w("ab"), w("a"), w("aab")];
        v.sort();
        let got: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(got, vec!["", "a", "b", "aa", "ab", "aab"]);
    }

    #[test]
    fn factor_prefix_suffix() {
        let u = w("aabab");
        assert!(w("aba").is_factor_of(&u));
        assert!(!w("bb").is_factor_of(&u));
        assert!(w("").is_factor_of(&u));
        assert!(w("aa").is_prefix_of(&u));
        assert!(w("bab").is_suffix_of(&u));
        assert!(w("bab").is_proper_suffix_of(&u));
        assert!(!u.is_proper_suffix_of(&u));
    }

    #[test]
    fn rotation_and_complement() {
        assert_eq!(w("aabab").rotated(2), w("babaa"));
        assert_eq!(w("aabab").rotated(5), w("aabab"));
        assert_eq!(w("aabab").complemented(), w("bbaba"));
        assert_eq!(w("babaa").least_rotation(), w("aabab"));
        assert_eq!(w("bbaba").necklace_rep(), w("aabab"));
    }

    #[test]
    fn necklace_rep_is_class_invariant() {
        for u in all_words(7) {
            let rep = u.necklace_rep();
            for r in 0..u.len() {
                assert_eq!(u.rotated(r).necklace_rep(), rep);
                assert_eq!(u.rotated(r).complemented().necklace_rep(), rep);
            }
        }
    }

    #[test]
    fn primitivity_matches_distinct_rotation_count() {
        // Independent characterization: u of length n is primitive iff its
        // n rotations are pairwise distinct.
        for len in 1..=10 {
            for u in all_words(len) {
                let distinct: BTreeSet<Word> = (0..len).map(|r| u.rotated(r)).collect();
                assert_eq!(is_primitive(&u), distinct.len() == len, "u = {u}");
            }
        }
        assert!(!is_primitive(&Word::empty()));
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(&w("abab")), w("ab"));
        assert_eq!(primitive_root(&w("aabaab")), w("aab"));
        assert_eq!(primitive_root(&w("aabab")), w("aabab"));
        assert!(is_primitive(&w("ababbabbabbababbabbabba")));
    }

    #[test]
    fn fibonacci_values() {
        let expected = [
            (-3, -1),
            (-2, 1),
            (-1, 0),
            (0, 1),
            (1, 1),
            (2, 2),
            (3, 3),
            (4, 5),
            (5, 8),
            (6, 13),
            (7, 21),
            (8, 34),
            (9, 55),
            (10, 89),
        ];
        for (k, f) in expected {
            assert_eq!(fibonacci(k), f, "F({k})");
        }
        for k in -8..=40 {
            assert_eq!(fibonacci(k + 2), fibonacci(k + 1) + fibonacci(k));
        }
    }

    #[test]
    fn periodic_word_rejects_bad_periods() {
        assert_eq!(PeriodicWord::parse(""), Err(Error::EmptyPeriod));
        assert_eq!(PeriodicWord::parse("abab"), Err(Error::NonPrimitivePeriod));
        assert_eq!(PeriodicWord::parse("aa"), Err(Error::NonPrimitivePeriod));
        assert!(PeriodicWord::parse("a").is_ok());
    }

    #[test]
    fn cyclic_factor_and_significance_match_oracle() {
        for period in ["a", "ab", "aab", "aabab", "aabaabab", "babbab"] {
            // babbab is a proper power; significance still makes sense on any
            // word but the constructor rejects it, so skip non-primitive.
            let Ok(word) = PeriodicWord::parse(period) else {
                continue;
            };
            for len in 0..=period.len() + 3 {
                for v in all_words(len) {
                    let vs = v.to_string();
                    assert_eq!(
                        word.is_factor(&v),
                        is_factor_oracle(period, &vs),
                        "period {period}, v {vs}"
                    );
                    assert_eq!(
                        word.significance(&v),
                        significance_oracle(period, &vs),
                        "period {period}, v {vs}"
                    );
                }
            }
        }
    }

    #[test]
    fn significance_of_empty_word_is_period_length() {
        for period in ["a", "ab", "aabab", "aabaababaabab"] {
            let word = pw(period);
            assert_eq!(word.significance(&Word::empty()), period.len());
        }
    }

    #[test]
    fn significance_splits_over_right_extensions() {
        // Every cyclic occurrence of a factor v extends by exactly one letter,
        // so z(va) + z(vb) = z(v) for every factor v.
        for period in ["ab", "aab", "aabab", "aabaabab", "ababbabbabb"] {
            let word = pw(period);
            for v in word.factors_up_to(period.len() + 1) {
                let za: usize = Symbol::ALL
                    .iter()
                    .map(|&x| {
                        let mut vx = v.clone();
                        vx.push(x);
                        word.significance(&vx)
                    })
                    .sum();
                assert_eq!(za, word.significance(&v), "period {period}, v {v}");
            }
        }
    }

    #[test]
    fn windows_wrap_around() {
        let word = pw("aab");
        assert_eq!(word.window(2, 4), w("baab"));
        assert_eq!(word.window(1, 1), w("a"));
        assert!(word.is_factor(&w("abaa")));
        assert!(!word.is_factor(&w("bb")));
    }

    #[test]
    fn factors_by_length_has_all_windows() {
        let word = pw("aabab");
        let by_len = word.factors_by_length(6);
        assert_eq!(by_len[0].len(), 1);
        assert_eq!(by_len[1].len(), 2);
        for (len, level) in by_len.iter().enumerate() {
            for v in level {
                assert_eq!(v.len(), len);
                assert!(word.is_factor(v));
            }
        }
        // A primitive period has exactly |u| distinct factors of length |u|.
        assert_eq!(by_len[5].len(), 5);
        assert_eq!(by_len[6].len(), 5);
    }

    #[test]
    fn canonical_periodic_word() {
        assert!(pw("baa").same_word_as(&pw("aab")));
        assert_eq!(pw("baa").canonical(), pw("aab"));
        assert!(!pw("aab").same_word_as(&pw("ab")));
    }
}
