//! Forks of a periodic word and their classification.
//!
//! A factor `v` of `W` is a fork when it extends both ways by both letters:
//! `va`, `vb`, `av`, `bv` all occur in `W`. The whole word `W` itself counts
//! as a fork (the ROOT) with significance fixed at 1, and `Λ` is a fork
//! whenever both letters occur. Sorting all forks by significance gives the
//! table `v_0 = ROOT, v_1, …, v_n = Λ` with `z_0 = 1 ≤ z_1 ≤ … ≤ z_n = |u|`.
//!
//! The significance sequence almost satisfies a Fibonacci-style inequality
//! `z_i ≤ z_{i-1} + z_{i-2}`. Indices breaking it are *exceptional*; each
//! exceptional index `i` is charged to a *penalty* index `ψ(i) = j` (the
//! longest proper prefix of `v_{i-1}` that is a fork) and a *fine* index
//! `π(i) = k` strictly between them, both of which are forced to satisfy
//! compensating inequalities. [`verify_theorem_3_16`] checks every clause of
//! that bookkeeping on a classified table.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::Error;
use crate::canonical::canonical_system;
use crate::word::{PeriodicWord, Symbol, Word};

/// A fork: the sentinel ROOT (the bi-infinite word itself) or a finite
/// factor, possibly Λ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Fork {
    Root,
    Finite(Word),
}

impl Fork {
    pub fn as_finite(&self) -> Option<&Word> {
        match self {
            Fork::Root => None,
            Fork::Finite(w) => Some(w),
        }
    }
}

impl fmt::Display for Fork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fork::Root => write!(f, "<ROOT>"),
            Fork::Finite(w) => write!(f, "{w}"),
        }
    }
}

impl Serialize for Fork {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Role of a table index after classification.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Indices 0 and 1; never classified.
    Boundary,
    Ordinary,
    Exceptional,
    Penalty,
    Fine,
}

/// The fork table of a periodic word: entries sorted by significance
/// (ascending), ties broken by length (descending) then lexicographically.
///
/// Proper-factor order forces strict significance order (a longer fork
/// containing a shorter one has strictly smaller significance), so ties occur
/// only between factor-incomparable forks, where the ordering is a free
/// choice; the fixed tie-break makes runs reproducible.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ForkTable {
    period: Word,
    entries: Vec<Fork>,
    z: Vec<usize>,
    roles: Vec<Role>,
    psi: BTreeMap<usize, usize>,
    pi: BTreeMap<usize, usize>,
    #[serde(skip)]
    classified: bool,
}

impl ForkTable {
    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn entries(&self) -> &[Fork] {
        &self.entries
    }

    /// Largest index `n`; entries run `v_0..v_n`.
    pub fn max_index(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn z(&self) -> &[usize] {
        &self.z
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn psi(&self) -> &BTreeMap<usize, usize> {
        &self.psi
    }

    pub fn pi(&self) -> &BTreeMap<usize, usize> {
        &self.pi
    }

    pub fn is_classified(&self) -> bool {
        self.classified
    }

    pub fn exceptional_indices(&self) -> Vec<usize> {
        self.psi.keys().copied().collect()
    }

    fn index_of(&self, fork: &Fork) -> Option<usize> {
        self.entries.iter().position(|e| e == fork)
    }

    /// True iff the significance test marks index `m` exceptional.
    fn z_exceptional(&self, m: usize) -> bool {
        m >= 2 && self.z[m] > self.z[m - 1] + self.z[m - 2]
    }
}

/// True iff `v` is a fork of `word`: a factor whose four one-letter
/// extensions are all factors. Non-factors are simply not forks.
pub fn is_fork(word: &PeriodicWord, v: &Word) -> bool {
    if !word.is_factor(v) {
        return false;
    }
    Symbol::ALL.iter().all(|&x| {
        let mut right = v.clone();
        right.push(x);
        word.is_factor(&right) && word.is_factor(&Word::from(x).concat(v))
    })
}

/// All finite forks of `word` (Λ included when it qualifies), in no
/// particular order. Works for any primitive period.
fn finite_forks(word: &PeriodicWord) -> Vec<Word> {
    let n = word.period_len();
    let facs = word.factors_by_length(n + 2);
    let is_fork_fast = |v: &Word| {
        Symbol::ALL.iter().all(|&x| {
            let mut right = v.clone();
            right.push(x);
            facs[v.len() + 1].contains(&right)
                && facs[v.len() + 1].contains(&Word::from(x).concat(v))
        })
    };
    let mut out = Vec::new();
    for layer in facs.iter().take(n) {
        for v in layer {
            if is_fork_fast(v) {
                out.push(v.clone());
            }
        }
    }
    // A factor of length ≥ |u| occurs once per period, so it extends uniquely
    // and cannot be a fork; spot-check the first two lengths.
    for (len, layer) in facs.iter().enumerate().skip(n).take(2) {
        for v in layer {
            assert!(!is_fork_fast(v), "fork {v} of length {len} ≥ |u| = {n}");
        }
    }
    out
}

/// Builds the significance-sorted fork table of `word`.
///
/// Errors with [`Error::SingleLetterPeriod`] when the period uses one letter
/// only: then Λ is not a fork and the table shape `v_0 = ROOT, …, v_n = Λ`
/// does not exist.
pub fn all_forks(word: &PeriodicWord) -> Result<ForkTable, Error> {
    if !word.has_both_letters() {
        return Err(Error::SingleLetterPeriod);
    }
    let mut forks: Vec<(Word, usize)> = finite_forks(word)
        .into_iter()
        .map(|v| {
            let z = word.significance(&v);
            (v, z)
        })
        .collect();
    forks.sort_by(|(va, za), (vb, zb)| {
        za.cmp(zb)
            .then_with(|| vb.len().cmp(&va.len()))
            .then_with(|| va.symbols().cmp(vb.symbols()))
    });

    let mut entries = vec![Fork::Root];
    let mut z = vec![1usize];
    for (v, zv) in forks {
        assert!(zv >= 2, "finite fork {v} with significance {zv} < 2");
        entries.push(Fork::Finite(v));
        z.push(zv);
    }

    let n = entries.len() - 1;
    let period_len = word.period_len();
    assert!(
        entries[n] == Fork::Finite(Word::empty()) && z[n] == period_len,
        "table of ({})^inf must end with Λ at significance {period_len}",
        word.period()
    );
    for i in 1..=n {
        assert!(z[i] >= z[i - 1], "significances must be nondecreasing");
        assert!(z[i] <= 2 * z[i - 1], "z_{i} > 2 z_{}", i - 1);
    }

    let roles = (0..=n)
        .map(|i| {
            if i < 2 {
                Role::Boundary
            } else {
                Role::Ordinary
            }
        })
        .collect();
    Ok(ForkTable {
        period: word.period().clone(),
        entries,
        z,
        roles,
        psi: BTreeMap::new(),
        pi: BTreeMap::new(),
        classified: false,
    })
}

/// The least fork containing `v` as a factor: the finite forks containing `v`
/// are linearly ordered by the factor relation and `r(v)` is their minimum,
/// or ROOT when no finite fork contains `v`.
pub fn least_fork(word: &PeriodicWord, v: &Word) -> Result<Fork, Error> {
    if !word.is_factor(v) {
        return Err(Error::NotAFactor(v.to_string()));
    }
    least_fork_among(&finite_forks(word), v)
}

fn least_fork_among(forks: &[Word], v: &Word) -> Result<Fork, Error> {
    let containing: Vec<&Word> = forks
        .iter()
        .filter(|f| v.is_factor_of(f) && v.len() <= f.len())
        .collect();
    if containing.is_empty() {
        return Ok(Fork::Root);
    }
    containing
        .iter()
        .find(|c| containing.iter().all(|o| c.is_factor_of(o)))
        .map(|c| Fork::Finite((*c).clone()))
        .ok_or_else(|| {
            Error::Falsified(format!(
                "forks containing {v:?} have no least element: {containing:?}"
            ))
        })
}

/// Classifies a fork table: marks exceptional indices and computes their
/// penalty (`psi`) and fine (`pi`) assignments.
///
/// For each exceptional `i` (significance test `z_i > z_{i-1} + z_{i-2}`):
///
/// * `psi(i) = j`, the table index of the longest proper prefix of `v_{i-1}`
///   that is a fork;
/// * the letter `x` with the smaller `z(r(v_j x))` is the oriented letter,
///   and `r(v_j x) = v_{i-1}` must hold for it;
/// * `pi(i)` is the least `k` with `i < k < j`, `z_k ≤ z_{k-1} + z_{i-2}`,
///   `z_k < z_j`, `v_k` not exceptional, `v_j` a proper suffix of `v_k`, and
///   a canonical forbidden word `y·v_k·x` (oriented `x`) present.
///
/// Any failure of the structure that Theorem 3.16 guarantees (no candidate
/// `k`, ambiguous orientation, a penalty index hit twice, a penalty index
/// also picked as fine, …) is a hard [`Error::Falsified`] naming the indices,
/// since it would disprove the theorem on this word.
pub fn classify(table: &ForkTable, word: &PeriodicWord) -> Result<ForkTable, Error> {
    assert_eq!(
        &table.period,
        word.period(),
        "table was built from a different word"
    );
    let mut out = table.clone();
    out.psi.clear();
    out.pi.clear();
    let n = out.max_index();
    let forks = finite_forks(word);
    let system = canonical_system(word);

    for i in 2..=n {
        if !out.z_exceptional(i) {
            continue;
        }
        if out.z[i] != 2 * out.z[i - 1] || out.z[i - 1] <= out.z[i - 2] {
            return Err(Error::Falsified(format!(
                "exceptional index {i}: expected z_i = 2 z_(i-1) and z_(i-1) > z_(i-2), \
                 got z = ({}, {}, {})",
                out.z[i - 2],
                out.z[i - 1],
                out.z[i]
            )));
        }
        let vi = out.entries[i]
            .as_finite()
            .expect("exceptional entries are finite")
            .clone();
        let prev = out.entries[i - 1]
            .as_finite()
            .expect("v_(i-1) is finite for i ≤ n")
            .clone();
        for x in Symbol::ALL {
            let mut vix = vi.clone();
            vix.push(x);
            let r = least_fork_among(&forks, &vix)?;
            if r != out.entries[i - 1] {
                return Err(Error::Falsified(format!(
                    "exceptional index {i}: r(v_i·{}) = {r} but v_(i-1) = {prev}",
                    x.as_char()
                )));
            }
        }

        // ψ(i): longest proper prefix of v_(i-1) that is a fork. Λ is always
        // a fork here, so the search succeeds.
        let psi_word = (0..prev.len())
            .rev()
            .map(|len| prev.slice(0, len))
            .find(|p| is_fork(word, p))
            .expect("Λ is a fork of a two-letter word");
        let j = out
            .index_of(&Fork::Finite(psi_word.clone()))
            .expect("forks appear in the table");
        out.psi.insert(i, j);

        // Letter orientation at v_j: the side with smaller z(r(v_j·x)) plays
        // the distinguished letter, and it must lead back to v_(i-1).
        let vj = psi_word;
        let r_of = |x: Symbol| -> Result<(Fork, usize), Error> {
            let mut vjx = vj.clone();
            vjx.push(x);
            let r = least_fork_among(&forks, &vjx)?;
            let idx = out.index_of(&r).expect("forks appear in the table");
            Ok((r, out.z[idx]))
        };
        let (ra, za) = r_of(Symbol::A)?;
        let (rb, zb) = r_of(Symbol::B)?;
        if za == zb {
            return Err(Error::Falsified(format!(
                "exceptional index {i}: orientation at penalty {j} ambiguous, \
                 z(r(v_j·a)) = z(r(v_j·b)) = {za}"
            )));
        }
        let (oriented, r_small) = if za < zb {
            (Symbol::A, ra)
        } else {
            (Symbol::B, rb)
        };
        if r_small != out.entries[i - 1] {
            return Err(Error::Falsified(format!(
                "exceptional index {i}: r(v_j·{}) = {r_small} is not v_(i-1)",
                oriented.as_char()
            )));
        }

        // π(i): least qualifying fine index strictly between i and j.
        let fine = (i + 1..j).find(|&k| {
            let vk = match out.entries[k].as_finite() {
                Some(w) => w,
                None => return false,
            };
            out.z[k] <= out.z[k - 1] + out.z[i - 2]
                && out.z[k] < out.z[j]
                && !out.z_exceptional(k)
                && vj.is_proper_suffix_of(vk)
                && Symbol::ALL.iter().any(|&y| {
                    let mut cand = Word::from(y).concat(vk);
                    cand.push(oriented);
                    system.contains(&cand)
                })
        });
        match fine {
            Some(k) => {
                out.pi.insert(i, k);
            }
            None => {
                return Err(Error::Falsified(format!(
                    "exceptional index {i}: no fine index in ({i}, {j})"
                )));
            }
        }
    }

    // Role assignment, with the disjointness that Theorem 3.16 guarantees.
    let mut roles: Vec<Role> = (0..=n)
        .map(|i| {
            if i < 2 {
                Role::Boundary
            } else if out.psi.contains_key(&i) {
                Role::Exceptional
            } else {
                Role::Ordinary
            }
        })
        .collect();
    for (&i, &j) in &out.psi {
        match roles[j] {
            Role::Ordinary => roles[j] = Role::Penalty,
            other => {
                return Err(Error::Falsified(format!(
                    "penalty index {j} of exceptional {i} already has role {other:?}"
                )));
            }
        }
    }
    for (&i, &k) in &out.pi {
        match roles[k] {
            Role::Ordinary => roles[k] = Role::Fine,
            Role::Fine => {} // several exceptionals may share a fine index
            other => {
                return Err(Error::Falsified(format!(
                    "fine index {k} of exceptional {i} already has role {other:?}"
                )));
            }
        }
    }
    out.roles = roles;
    out.classified = true;
    Ok(out)
}

/// One checked clause of Theorem 3.16.
#[derive(Clone, Debug, Serialize)]
pub struct ClauseCheck {
    pub clause: String,
    pub passed: bool,
    pub details: String,
}

/// Pass/fail report over all clauses of Theorem 3.16 for one table.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub passed: bool,
    pub clauses: Vec<ClauseCheck>,
}

impl TheoremReport {
    fn push(&mut self, clause: &str, passed: bool, details: String) {
        self.passed &= passed;
        self.clauses.push(ClauseCheck {
            clause: clause.to_string(),
            passed,
            details,
        });
    }
}

/// Re-checks every clause of Theorem 3.16 on a classified table, returning a
/// per-clause report instead of failing fast.
pub fn verify_theorem_3_16(table: &ForkTable) -> Result<TheoremReport, Error> {
    if !table.classified {
        return Err(Error::UnclassifiedTable);
    }
    let word = PeriodicWord::new(table.period.clone()).expect("table period is valid");
    let forks = finite_forks(&word);
    let n = table.max_index();
    let z = &table.z;
    let mut report = TheoremReport {
        passed: true,
        clauses: Vec::new(),
    };

    let order_ok = z[0] == 1
        && z[1] == 2
        && z[n] == word.period_len()
        && (1..=n).all(|i| z[i - 1] <= z[i] && z[i] <= 2 * z[i - 1]);
    report.push(
        "table-order",
        order_ok,
        format!("z = {z:?}, |u| = {}", word.period_len()),
    );

    let mut between = true;
    let mut penalty_lower = true;
    let mut fine_lower = true;
    let mut forced = true;
    let mut regular = true;
    let mut details: Vec<String> = Vec::new();
    for (&i, &j) in &table.psi {
        let k = table.pi[&i];
        if !(i < k && k < j) {
            between = false;
            details.push(format!("i={i}, k={k}, j={j} not ordered"));
        }
        if z[j] > z[j - 1] + z[i - 1] {
            penalty_lower = false;
            details.push(format!("z_{j} > z_{} + z_{}", j - 1, i - 1));
        }
        if z[k] > z[k - 1] + z[i - 2] {
            fine_lower = false;
            details.push(format!("z_{k} > z_{} + z_{}", k - 1, i - 2));
        }
        let forced_i = z[i] == 2 * z[i - 1]
            && Symbol::ALL.iter().all(|&x| {
                let mut vix = table.entries[i]
                    .as_finite()
                    .expect("exceptional entries are finite")
                    .clone();
                vix.push(x);
                least_fork_among(&forks, &vix).ok() == Some(table.entries[i - 1].clone())
            });
        if !forced_i {
            forced = false;
            details.push(format!("exceptional {i}: doubling/r-closure failed"));
        }
        if table.z_exceptional(j) || table.z_exceptional(k) {
            regular = false;
            details.push(format!("penalty {j} or fine {k} is exceptional"));
        }
    }
    let detail_str = details.join("; ");
    report.push("i<k<j", between, detail_str.clone());
    report.push("penalty-inequality", penalty_lower, detail_str.clone());
    report.push("fine-inequality", fine_lower, detail_str.clone());
    report.push("exceptional-forcing", forced, detail_str.clone());
    report.push("penalty-fine-regular", regular, detail_str.clone());

    let psi_values: Vec<usize> = table.psi.values().copied().collect();
    let mut dedup = psi_values.clone();
    dedup.sort_unstable();
    dedup.dedup();
    report.push(
        "psi-injective",
        dedup.len() == psi_values.len(),
        format!("psi = {:?}", table.psi),
    );
    let disjoint = table.pi.values().all(|k| !psi_values.contains(k));
    report.push(
        "pi-psi-disjoint",
        disjoint,
        format!("psi = {:?}, pi = {:?}", table.psi, table.pi),
    );
    Ok(report)
}

/// Report for the antidictionary-size identity `|C(W)| = (finite forks) + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct ForkCountReport {
    pub canonical_size: usize,
    pub finite_forks: usize,
    /// `|C(W)| ≥ forks + 1`, the two-letter instance of the general bound.
    pub inequality_holds: bool,
    /// Equality, which the two-letter alphabet always attains.
    pub equality_holds: bool,
}

/// Counts canonical words against finite forks (Lemma 2.8 and the equality
/// remark for two-letter alphabets). Works for single-letter periods too,
/// where there are no forks and a single canonical word.
pub fn verify_lemma_2_8(word: &PeriodicWord) -> ForkCountReport {
    let canonical_size = canonical_system(word).len();
    let finite = finite_forks(word).len();
    ForkCountReport {
        canonical_size,
        finite_forks: finite,
        inequality_holds: canonical_size > finite,
        equality_holds: canonical_size == finite + 1,
    }
}
