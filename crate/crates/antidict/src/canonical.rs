//! Canonical systems of forbidden words.
//!
//! The canonical system `C(W)` of a periodic word `W` is its antidictionary:
//! the set of minimal absent words. A word `v` is in `C(W)` iff `v` does not
//! occur in `W` but every proper factor of `v` does. `C(W)` is exactly the
//! information needed to reconstruct `W`: a word satisfies `C(W)` (avoids all
//! of its elements) iff it is a factor of `W`, and `W` is the unique
//! bi-infinite word satisfying `C(W)`.
//!
//! [`defines`] decides the converse direction for an arbitrary finite set of
//! forbidden words `V`: whether exactly one bi-infinite word avoids `V`. It
//! works on the transfer graph of order `m - 1` (`m` the longest word of
//! `V`): vertices are the `V`-avoiding words of length `m - 1`, and edges are
//! the avoiding words of length `m`, joining their length-`(m-1)` prefix to
//! their suffix. Bi-infinite avoiding words correspond to bi-infinite walks,
//! so after repeatedly deleting vertices with no predecessor or no successor,
//! `V` defines a unique word iff the remaining graph is a single simple
//! cycle.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;
use crate::word::{PeriodicWord, Symbol, Word, primitive_root};

/// Longest forbidden word accepted by [`defines`]; the transfer graph has up
/// to `2^(m-1)` vertices, so this caps memory and time on adversarial input.
pub const MAX_FORBIDDEN_LEN: usize = 20;

/// Subset-enumeration budget for [`check_minimality_tiny`].
pub const MINIMALITY_BUDGET: u128 = 1 << 14;

/// A finite set of forbidden words.
///
/// No minimality is assumed or enforced: [`defines`] accepts any set, and
/// redundant words are kept as-is. Canonical systems produced by
/// [`canonical_system`] are always antichains under the factor order, which
/// [`ForbiddenSystem::is_antichain`] can confirm.
///
/// Serializes as a JSON array of strings in shortlex order (by length, then
/// lexicographically).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ForbiddenSystem {
    words: BTreeSet<Word>,
}

impl ForbiddenSystem {
    pub fn new(words: impl IntoIterator<Item = Word>) -> ForbiddenSystem {
        ForbiddenSystem {
            words: words.into_iter().collect(),
        }
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, v: &Word) -> bool {
        self.words.contains(v)
    }

    pub fn max_word_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// True iff no element is a proper factor of another.
    pub fn is_antichain(&self) -> bool {
        self.words.iter().all(|v| {
            self.words
                .iter()
                .all(|w| v == w || !(v.is_factor_of(w) && v.len() < w.len()))
        })
    }
}

impl fmt::Display for ForbiddenSystem {
    /// Lists the words alphabetically (not shortlex), which reads better.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sorted: Vec<&Word> = self.words.iter().collect();
        sorted.sort_by(|v, w| v.symbols().cmp(w.symbols()));
        write!(f, "{{")?;
        for (i, w) in sorted.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}}")
    }
}

/// True iff `v` avoids every word of `system` (no element occurs in `v`).
pub fn satisfies(v: &Word, system: &ForbiddenSystem) -> bool {
    system.words().all(|f| !f.is_factor_of(v))
}

/// True iff appending landed a new forbidden occurrence: some element of
/// `system` is a suffix of `v`. For `v = wx` with `w` already avoiding, this
/// is the only way `v` can stop avoiding.
fn forbidden_suffix(v: &Word, system: &ForbiddenSystem) -> bool {
    system.words().any(|f| f.is_suffix_of(v))
}

/// The canonical system (antidictionary) of `W`.
///
/// Every canonical word of `W = u^∞` has length at most `|u| + 1`: a factor
/// of length `≥ |u|` occurs exactly once per period, hence extends uniquely
/// on both sides, so both one-sided extensions of a longer absent candidate
/// cannot both occur. Candidates are therefore scanned up to `|u| + 1` (and,
/// in builds with debug assertions, up to `2|u| + 2` to check that nothing
/// appears beyond the bound).
pub fn canonical_system(word: &PeriodicWord) -> ForbiddenSystem {
    let n = word.period_len();
    let scan_to = if cfg!(debug_assertions) {
        2 * n + 2
    } else {
        n + 1
    };
    let facs = word.factors_by_length(scan_to);
    let mut out = BTreeSet::new();
    for x in Symbol::ALL {
        if !facs[1].contains(&Word::from(x)) {
            out.insert(Word::from(x));
        }
    }
    // v = x·w·y of length ℓ is canonical iff x·w and w·y occur but v does
    // not: every proper factor of v is a factor of x·w or of w·y.
    for ell in 2..=scan_to {
        for w in &facs[ell - 2] {
            for x in Symbol::ALL {
                let xw = Word::from(x).concat(w);
                if !facs[ell - 1].contains(&xw) {
                    continue;
                }
                for y in Symbol::ALL {
                    let wy = w.concat(&Word::from(y));
                    if !facs[ell - 1].contains(&wy) {
                        continue;
                    }
                    let xwy = xw.concat(&Word::from(y));
                    if !facs[ell].contains(&xwy) {
                        assert!(
                            ell <= n + 1,
                            "canonical word {xwy} of length {ell} exceeds |u|+1 = {}",
                            n + 1
                        );
                        out.insert(xwy);
                    }
                }
            }
        }
    }
    ForbiddenSystem { words: out }
}

/// Outcome of [`defines`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Definition {
    /// Exactly one bi-infinite word avoids the system; its period is given in
    /// canonical form (lexicographically least rotation of the primitive
    /// root).
    Defines(PeriodicWord),
    /// No bi-infinite word avoids the system.
    NoWord,
    /// At least two distinct bi-infinite periodic words avoid the system; two
    /// witnesses in canonical form, in shortlex order.
    MultipleWords(PeriodicWord, PeriodicWord),
}

/// Transfer graph of order `m - 1` for a forbidden system.
struct TransferGraph {
    labels: Vec<Word>,
    /// `out[v] = (letter, target)` pairs, in letter order.
    out: Vec<Vec<(Symbol, usize)>>,
    incoming: Vec<Vec<usize>>,
    alive: Vec<bool>,
}

impl TransferGraph {
    fn build(system: &ForbiddenSystem) -> TransferGraph {
        let m = system.max_word_len();
        debug_assert!(m >= 1);
        // Grow the avoiding words level by level; a length-(ℓ+1) word whose
        // length-ℓ prefix avoids the system fails only via a forbidden
        // suffix.
        let mut level = vec![Word::empty()];
        for _ in 0..m - 1 {
            level = level
                .iter()
                .flat_map(|w| {
                    Symbol::ALL.iter().filter_map(|&x| {
                        let mut wx = w.clone();
                        wx.push(x);
                        (!forbidden_suffix(&wx, system)).then_some(wx)
                    })
                })
                .collect();
        }
        level.sort();
        let index: HashMap<Word, usize> = level
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut out = vec![Vec::new(); level.len()];
        let mut incoming = vec![Vec::new(); level.len()];
        for (i, w) in level.iter().enumerate() {
            for x in Symbol::ALL {
                let mut wx = w.clone();
                wx.push(x);
                if forbidden_suffix(&wx, system) {
                    continue;
                }
                let target = wx.slice(wx.len() - (m - 1), m - 1);
                let j = index[&target];
                out[i].push((x, j));
                incoming[j].push(i);
            }
        }
        TransferGraph {
            alive: vec![true; level.len()],
            labels: level,
            out,
            incoming,
        }
    }

    fn out_degree(&self, v: usize) -> usize {
        self.out[v].iter().filter(|&&(_, t)| self.alive[t]).count()
    }

    fn in_degree(&self, v: usize) -> usize {
        self.incoming[v].iter().filter(|&&s| self.alive[s]).count()
    }

    /// Delete vertices with no live predecessor or successor until none are
    /// left. The surviving set is the union of all bi-infinite walks, which
    /// is independent of deletion order; `reverse` only changes the sweep
    /// order and exists so tests can confirm that independence.
    fn trim(&mut self, reverse: bool) {
        loop {
            let mut removed = false;
            let order: Vec<usize> = if reverse {
                (0..self.labels.len()).rev().collect()
            } else {
                (0..self.labels.len()).collect()
            };
            for v in order {
                if self.alive[v] && (self.out_degree(v) == 0 || self.in_degree(v) == 0) {
                    self.alive[v] = false;
                    removed = true;
                }
            }
            if !removed {
                return;
            }
        }
    }

    fn live_vertices(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&v| self.alive[v]).collect()
    }

    /// The period spelled by walking `cycle` (as vertex list) once.
    fn cycle_word(&self, cycle: &[usize]) -> PeriodicWord {
        let letters: Word = cycle
            .iter()
            .enumerate()
            .map(|(idx, &v)| {
                let next = cycle[(idx + 1) % cycle.len()];
                self.out[v]
                    .iter()
                    .find(|&&(_, t)| t == next)
                    .expect("consecutive cycle vertices must share an edge")
                    .0
            })
            .collect();
        let root = primitive_root(&letters);
        debug_assert!(
            root.len() == letters.len(),
            "a simple cycle spells a primitive word"
        );
        PeriodicWord::new(root.least_rotation()).expect("canonical cycle label")
    }

    /// Shortest simple cycle through `v`, as a vertex list starting at `v`.
    fn shortest_cycle_through(&self, v: usize) -> Option<Vec<usize>> {
        // BFS forward from v; the first time an edge returns to v, the tree
        // path from v plus that edge is a shortest (hence simple) cycle.
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut queue = std::collections::VecDeque::from([v]);
        while let Some(p) = queue.pop_front() {
            for &(_, t) in &self.out[p] {
                if !self.alive[t] {
                    continue;
                }
                if t == v {
                    let mut path = vec![p];
                    let mut cur = p;
                    while cur != v {
                        cur = parent[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                if let Entry::Vacant(slot) = parent.entry(t) {
                    slot.insert(p);
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Shortest path from `from` to `to` over live vertices, if any.
    fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent: HashMap<usize, usize> = HashMap::from([(from, from)]);
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(p) = queue.pop_front() {
            if p == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &(_, t) in &self.out[p] {
                if self.alive[t] && !parent.contains_key(&t) {
                    parent.insert(t, p);
                    queue.push_back(t);
                }
            }
        }
        None
    }
}

/// Decides whether `system` pins down a unique bi-infinite word.
///
/// Returns an error only when the longest forbidden word exceeds
/// [`MAX_FORBIDDEN_LEN`] (resource guard for the transfer graph).
pub fn defines(system: &ForbiddenSystem) -> Result<Definition, Error> {
    defines_impl(system, false)
}

fn defines_impl(system: &ForbiddenSystem, reverse_trim: bool) -> Result<Definition, Error> {
    if system.contains(&Word::empty()) {
        // Λ occurs in every word, so nothing avoids the system.
        return Ok(Definition::NoWord);
    }
    if system.is_empty() {
        return Ok(Definition::MultipleWords(
            PeriodicWord::parse("a").unwrap(),
            PeriodicWord::parse("b").unwrap(),
        ));
    }
    let m = system.max_word_len();
    if m > MAX_FORBIDDEN_LEN {
        return Err(Error::Budget(format!(
            "forbidden word of length {m} exceeds the transfer-graph limit {MAX_FORBIDDEN_LEN}"
        )));
    }

    let mut graph = TransferGraph::build(system);
    graph.trim(reverse_trim);
    let live = graph.live_vertices();
    if live.is_empty() {
        return Ok(Definition::NoWord);
    }

    if live
        .iter()
        .all(|&v| graph.out_degree(v) == 1 && graph.in_degree(v) == 1)
    {
        // Disjoint simple cycles; walk out the components.
        let mut seen: HashSet<usize> = HashSet::new();
        let mut words: BTreeSet<PeriodicWord> = BTreeSet::new();
        for &start in &live {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            seen.insert(start);
            let mut cur = start;
            loop {
                let (_, next) = *graph.out[cur]
                    .iter()
                    .find(|&&(_, t)| graph.alive[t])
                    .expect("live vertex has a live successor");
                if next == start {
                    break;
                }
                cycle.push(next);
                seen.insert(next);
                cur = next;
            }
            words.insert(graph.cycle_word(&cycle));
        }
        let mut it = words.into_iter();
        let first = it.next().expect("at least one cycle");
        return Ok(match it.next() {
            None => Definition::Defines(first),
            Some(second) => Definition::MultipleWords(first, second),
        });
    }

    // Some vertex branches, so at least two distinct simple cycles exist.
    // Scan shortest cycles through each vertex until two distinct labels turn
    // up; if the scan only ever sees one cycle, close a second one through
    // any edge off that cycle.
    let mut found: BTreeSet<PeriodicWord> = BTreeSet::new();
    let mut first_cycle: Option<Vec<usize>> = None;
    for &v in &live {
        if let Some(cycle) = graph.shortest_cycle_through(v) {
            let word = graph.cycle_word(&cycle);
            if first_cycle.is_none() {
                first_cycle = Some(cycle);
            }
            found.insert(word);
            if found.len() == 2 {
                let mut it = found.into_iter();
                return Ok(Definition::MultipleWords(
                    it.next().unwrap(),
                    it.next().unwrap(),
                ));
            }
        }
    }
    let cycle = first_cycle.expect("trimmed nonempty graph contains a cycle");
    let on_cycle: HashSet<(usize, usize)> = cycle
        .iter()
        .enumerate()
        .map(|(idx, &v)| (v, cycle[(idx + 1) % cycle.len()]))
        .collect();
    let (p, q) = live
        .iter()
        .flat_map(|&v| {
            graph.out[v]
                .iter()
                .filter(|&&(_, t)| graph.alive[t])
                .map(move |&(_, t)| (v, t))
        })
        .find(|e| !on_cycle.contains(e))
        .expect("a non-cycle graph has an edge off the cycle");
    // The simple path q ⇝ p plus the edge p → q is a simple cycle, and it is
    // distinct from `cycle` because it uses that edge.
    let second = graph
        .shortest_path(q, p)
        .expect("edge endpoints reconnect through the live graph");
    let second_word = graph.cycle_word(&second);
    let first_word = graph.cycle_word(&cycle);
    debug_assert!(first_word != second_word);
    let (lo, hi) = if first_word < second_word {
        (first_word, second_word)
    } else {
        (second_word, first_word)
    };
    Ok(Definition::MultipleWords(lo, hi))
}

/// Checks, for all words up to length `max_len`, that avoiding `C(W)` is the
/// same as being a factor of `W`.
pub fn verify_prop_2_4(word: &PeriodicWord, max_len: usize) -> bool {
    let system = canonical_system(word);
    let factors = word.factors_up_to(max_len);
    if factors.iter().any(|f| !satisfies(f, &system)) {
        return false;
    }
    // Walk the tree of avoiding words; every node must be a factor. The walk
    // stays finite: nodes that pass are factors, of which there are at most
    // |u| per length, and the first failure returns immediately.
    let mut stack = vec![Word::empty()];
    while let Some(v) = stack.pop() {
        if !factors.contains(&v) {
            return false;
        }
        if v.len() == max_len {
            continue;
        }
        for x in Symbol::ALL {
            let mut vx = v.clone();
            vx.push(x);
            if !forbidden_suffix(&vx, &system) {
                stack.push(vx);
            }
        }
    }
    true
}

/// Exhaustively confirms that no forbidden system strictly smaller than
/// `C(W)`, drawn from the pool of nonempty words of length at most
/// `pool_max_len`, defines `W`.
///
/// The number of candidate subsets is `Σ_{s < |C(W)|} C(N, s)` for a pool of
/// size `N`; if that exceeds [`MINIMALITY_BUDGET`] the call fails rather than
/// silently taking forever.
pub fn check_minimality_tiny(word: &PeriodicWord, pool_max_len: usize) -> Result<bool, Error> {
    let system = canonical_system(word);
    let target_size = system.len();
    let pool: Vec<Word> = (1..=pool_max_len)
        .flat_map(|len| {
            let mut level = vec![Word::empty()];
            for _ in 0..len {
                level = level
                    .iter()
                    .flat_map(|w| {
                        Symbol::ALL.iter().map(move |&x| {
                            let mut wx = w.clone();
                            wx.push(x);
                            wx
                        })
                    })
                    .collect();
            }
            level
        })
        .collect();

    let n = pool.len() as u128;
    let mut subsets: u128 = 0;
    for s in 1..target_size {
        subsets = subsets.saturating_add(binomial(n, s as u128));
        if subsets > MINIMALITY_BUDGET {
            return Err(Error::Budget(format!(
                "minimality check needs more than {MINIMALITY_BUDGET} subsets \
                 (pool {n}, system size {target_size})"
            )));
        }
    }

    let mut chosen = Vec::new();
    for size in 1..target_size {
        if smaller_system_defines(word, &pool, &mut chosen, 0, size)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn smaller_system_defines(
    word: &PeriodicWord,
    pool: &[Word],
    chosen: &mut Vec<Word>,
    from: usize,
    size: usize,
) -> Result<bool, Error> {
    if chosen.len() == size {
        let candidate = ForbiddenSystem::new(chosen.iter().cloned());
        return Ok(match defines(&candidate)? {
            Definition::Defines(w) => w.same_word_as(word),
            _ => false,
        });
    }
    for i in from..pool.len() {
        chosen.push(pool[i].clone());
        if smaller_system_defines(word, pool, chosen, i + 1, size)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(s: &str) -> PeriodicWord {
        PeriodicWord::parse(s).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn system(words: &[&str]) -> ForbiddenSystem {
        ForbiddenSystem::new(words.iter().map(|s| w(s)))
    }

    /// Oracle: canonical words by the definition itself, checking absence and
    /// presence of all proper factors directly against the periodic word.
    fn brute_canonical(word: &PeriodicWord, max_len: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut level = vec![Word::empty()];
        for _ in 0..max_len {
            level = level
                .iter()
                .flat_map(|v| {
                    Symbol::ALL.iter().map(move |&x| {
                        let mut vx = v.clone();
                        vx.push(x);
                        vx
                    })
                })
                .collect();
            for v in &level {
                if word.is_factor(v) {
                    continue;
                }
                let all_proper_factors_occur = (0..v.len())
                    .flat_map(|i| (0..=v.len() - i).map(move |l| (i, l)))
                    .filter(|&(i, l)| l < v.len() || i > 0)
                    .all(|(i, l)| word.is_factor(&v.slice(i, l)));
                if all_proper_factors_occur {
                    out.insert(v.clone());
                }
            }
        }
        out
    }

    #[test]
    fn canonical_system_frozen_examples() {
        assert_eq!(canonical_system(&pw("ab")), system(&["aa", "bb"]));
        assert_eq!(canonical_system(&pw("aab")), system(&["bb", "aaa", "bab"]));
        assert_eq!(
            canonical_system(&pw("aabab")),
            system(&["bb", "aaa", "aabaa", "babab"])
        );
        assert_eq!(canonical_system(&pw("a")), system(&["b"]));
        assert_eq!(canonical_system(&pw("aabab")).len(), 4);
    }

    #[test]
    fn canonical_system_matches_brute_oracle_exhaustively() {
        for len in 1..=9 {
            for u in crate::word::tests::all_words(len) {
                let Ok(word) = PeriodicWord::new(u) else {
                    continue;
                };
                let got: BTreeSet<Word> = canonical_system(&word).words().cloned().collect();
                let want = brute_canonical(&word, len + 3);
                assert_eq!(got, want, "period {}", word.period());
            }
        }
    }

    #[test]
    fn canonical_system_is_antichain_with_bounded_lengths() {
        for len in 1..=10 {
            for u in crate::word::tests::all_words(len) {
                let Ok(word) = PeriodicWord::new(u) else {
                    continue;
                };
                let c = canonical_system(&word);
                assert!(c.is_antichain());
                assert!(c.max_word_len() <= len + 1);
                assert!(c.words().all(|v| !word.is_factor(v)));
            }
        }
    }

    #[test]
    fn satisfies_examples() {
        let c_ab = canonical_system(&pw("ab"));
        assert!(satisfies(&w("abab"), &c_ab));
        assert!(!satisfies(&w("aabb"), &system(&["aa"])));
        assert!(satisfies(&Word::empty(), &c_ab));
    }

    #[test]
    fn forbidden_system_serde_is_shortlex_sorted() {
        let c = canonical_system(&pw("aab"));
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"["bb","aaa","bab"]"#);
        let back: ForbiddenSystem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn defines_basic_outcomes() {
        assert_eq!(
            defines(&system(&["aa", "bb"])).unwrap(),
            Definition::Defines(pw("ab"))
        );
        assert_eq!(
            defines(&system(&["bb", "aaa", "bab"])).unwrap(),
            Definition::Defines(pw("aab"))
        );
        assert_eq!(
            defines(&system(&["a"])).unwrap(),
            Definition::Defines(pw("b"))
        );
        assert_eq!(defines(&system(&["a", "b"])).unwrap(), Definition::NoWord);
        assert_eq!(defines(&system(&[""])).unwrap(), Definition::NoWord);
        assert_eq!(defines(&system(&["", "aa"])).unwrap(), Definition::NoWord);
        assert_eq!(
            defines(&system(&[])).unwrap(),
            Definition::MultipleWords(pw("a"), pw("b"))
        );
    }

    #[test]
    fn defines_underdetermined_examples() {
        assert_eq!(
            defines(&system(&["aa"])).unwrap(),
            Definition::MultipleWords(pw("b"), pw("ab"))
        );
        // For {aab} the witness pair is not pinned down; any two distinct
        // avoiding periodic words are correct.
        let sys = system(&["aab"]);
        match defines(&sys).unwrap() {
            Definition::MultipleWords(x, y) => {
                assert!(!x.same_word_as(&y));
                for witness in [&x, &y] {
                    assert!(sys.words().all(|f| !witness.is_factor(f)));
                }
            }
            other => panic!("expected multiple words, got {other:?}"),
        }
    }

    #[test]
    fn defines_keeps_redundant_words() {
        // {aa, bb} defines (ab)^∞, but adding abab kills it: the only
        // candidate now contains a forbidden factor.
        assert_eq!(
            defines(&system(&["aa", "bb", "abab"])).unwrap(),
            Definition::NoWord
        );
    }

    #[test]
    fn defines_rejects_oversized_words() {
        let long = "a".repeat(MAX_FORBIDDEN_LEN + 1);
        assert!(matches!(
            defines(&ForbiddenSystem::new([long.parse::<Word>().unwrap()])),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn defines_result_is_independent_of_trim_order() {
        let cases: Vec<ForbiddenSystem> = vec![
            system(&["aa"]),
            system(&["aab"]),
            system(&["aa", "bb"]),
            system(&["aa", "bb", "abab"]),
            system(&["bb", "aaa", "bab"]),
            system(&["aba", "bab", "aabb"]),
            system(&["bb", "aaa", "abab", "aabaa"]),
        ];
        for sys in cases {
            assert_eq!(
                defines_impl(&sys, false).unwrap(),
                defines_impl(&sys, true).unwrap(),
                "system {sys}"
            );
        }
    }

    #[test]
    fn canonical_system_roundtrips_through_defines() {
        for len in 1..=8 {
            for u in crate::word::tests::all_words(len) {
                let Ok(word) = PeriodicWord::new(u) else {
                    continue;
                };
                let got = defines(&canonical_system(&word)).unwrap();
                match got {
                    Definition::Defines(v) => {
                        assert!(v.same_word_as(&word), "period {}", word.period())
                    }
                    other => panic!("period {}: got {other:?}", word.period()),
                }
            }
        }
    }

    #[test]
    fn prop_2_4_holds_on_small_words() {
        for len in 1..=8 {
            for u in crate::word::tests::all_words(len) {
                let Ok(word) = PeriodicWord::new(u) else {
                    continue;
                };
                assert!(verify_prop_2_4(&word, len + 2), "period {}", word.period());
            }
        }
    }

    #[test]
    fn minimality_of_tiny_canonical_systems() {
        assert_eq!(check_minimality_tiny(&pw("aab"), 3), Ok(true));
        assert_eq!(check_minimality_tiny(&pw("ab"), 2), Ok(true));
        assert_eq!(check_minimality_tiny(&pw("a"), 1), Ok(true));
    }

    #[test]
    fn minimality_budget_is_enforced() {
        assert!(matches!(
            check_minimality_tiny(&pw("aabab"), 5),
            Err(Error::Budget(_))
        ));
    }
}
