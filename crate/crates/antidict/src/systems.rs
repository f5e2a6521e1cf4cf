//! Abstract index systems majorizing fork significances.
//!
//! A *system* `S = (n, I, J, K, ψ, π)` marks three pairwise disjoint subsets
//! of `{2..n}` — exceptional, penalty and fine indices — together with a
//! bijection `ψ : I → J` and a surjection `π : I → K` satisfying
//! `i < π(i) < ψ(i)`. A system drives the recurrence
//!
//! ```text
//! x_r = x_{r-1} + x_{θ(r)},   θ(r) = r-2        (ordinary)
//!                                    r-1        (exceptional)
//!                                    ψ⁻¹(r)-1   (penalty)
//!                                    d(r)-2     (fine, d(r) = min π⁻¹(r))
//! ```
//!
//! The sequence generated from `(1, 2)` by the system extracted from a fork
//! table majorizes the significance sequence of the word. The improvement
//! rewrites in this module ([`improve_shift_right`], [`improve_swap`],
//! [`improve_separate`], [`improve_reassign`], [`improve_select_fine`])
//! restructure a system without decreasing the final term, reducing every
//! system to the empty one; since the empty system generates the Fibonacci
//! numbers, `y_n ≤ F(n+1)` for every generated sequence
//! ([`verify_theorem_4_15`] checks this exhaustively for small `n`).

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Add;

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error as ThisError;

use crate::Error;
use crate::forks::{ForkTable, all_forks, classify};
use crate::word::{PeriodicWord, fibonacci};

/// What the recurrence does at one index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IndexKind {
    Ordinary,
    Exceptional,
    Penalty,
    Fine,
}

/// A rejected rewrite. Every improvement operation is total: it either
/// returns the rewritten system or says precisely why it refused.
#[derive(Clone, PartialEq, Eq, Debug, ThisError)]
pub enum RewriteError {
    #[error("index {0} is not exceptional")]
    NotExceptional(usize),
    #[error("index {0} is bad (it is the least preimage of a fine index)")]
    BadTarget(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("rewrite would not produce a system: {0}")]
    Invalid(String),
    #[error("pipeline invariant broke: {0}")]
    Pipeline(String),
}

/// `(n, I, J, K, ψ, π)` with `I = dom ψ = dom π`, `J = ran ψ`, `K = ran π`.
///
/// Always structurally valid: the constructor re-derives `J` and `K` from the
/// maps and rejects anything violating the definition, so rewrites cannot
/// leave an ill-formed value behind.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct System {
    n: usize,
    #[serde(rename = "I")]
    exceptional: BTreeSet<usize>,
    #[serde(rename = "J")]
    penalty: BTreeSet<usize>,
    #[serde(rename = "K")]
    fine: BTreeSet<usize>,
    psi: BTreeMap<usize, usize>,
    pi: BTreeMap<usize, usize>,
}

impl System {
    /// Builds and validates a system from its two maps.
    pub fn new(
        n: usize,
        psi: BTreeMap<usize, usize>,
        pi: BTreeMap<usize, usize>,
    ) -> Result<Self, Error> {
        let bad = |msg: String| Err(Error::InvalidSystem(msg));
        if n < 1 {
            return bad("n must be at least 1".into());
        }
        if psi.len() != pi.len() || psi.keys().ne(pi.keys()) {
            return bad("psi and pi must share the domain I".into());
        }
        let exceptional: BTreeSet<usize> = psi.keys().copied().collect();
        let penalty: BTreeSet<usize> = psi.values().copied().collect();
        let fine: BTreeSet<usize> = pi.values().copied().collect();
        if penalty.len() != psi.len() {
            return bad("psi is not injective".into());
        }
        if fine.len() > exceptional.len() {
            return bad("|K| exceeds |I|".into());
        }
        for (&i, &j) in &psi {
            let k = pi[&i];
            if !(i < k && k < j) {
                return bad(format!("need i < pi(i) < psi(i), got {i}, {k}, {j}"));
            }
        }
        for set in [&exceptional, &penalty, &fine] {
            if let Some(&x) = set.iter().next_back()
                && x > n
            {
                return bad(format!("index {x} out of range for n = {n}"));
            }
            if let Some(&x) = set.iter().next()
                && x < 2
            {
                return bad(format!("index {x} below 2"));
            }
        }
        if !exceptional.is_disjoint(&penalty)
            || !exceptional.is_disjoint(&fine)
            || !penalty.is_disjoint(&fine)
        {
            return bad("I, J, K must be pairwise disjoint".into());
        }
        Ok(System {
            n,
            exceptional,
            penalty,
            fine,
            psi,
            pi,
        })
    }

    /// The empty system `O_n`: every index ordinary, generating Fibonacci.
    pub fn empty(n: usize) -> Self {
        System::new(n, BTreeMap::new(), BTreeMap::new()).expect("empty system is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn exceptional(&self) -> &BTreeSet<usize> {
        &self.exceptional
    }

    pub fn penalty(&self) -> &BTreeSet<usize> {
        &self.penalty
    }

    pub fn fine(&self) -> &BTreeSet<usize> {
        &self.fine
    }

    pub fn psi(&self) -> &BTreeMap<usize, usize> {
        &self.psi
    }

    pub fn pi(&self) -> &BTreeMap<usize, usize> {
        &self.pi
    }

    pub fn kind(&self, r: usize) -> IndexKind {
        if self.exceptional.contains(&r) {
            IndexKind::Exceptional
        } else if self.penalty.contains(&r) {
            IndexKind::Penalty
        } else if self.fine.contains(&r) {
            IndexKind::Fine
        } else {
            IndexKind::Ordinary
        }
    }

    /// `d(k)`: the least exceptional index charged to the fine index `k`.
    pub fn d(&self, k: usize) -> Option<usize> {
        self.pi
            .iter()
            .filter(|&(_, &v)| v == k)
            .map(|(&i, _)| i)
            .min()
    }

    /// Bad indices are the least preimages `d(K) ⊆ I`.
    pub fn is_bad(&self, i: usize) -> bool {
        self.fine.iter().any(|&k| self.d(k) == Some(i))
    }

    /// All non-ordinary indices `L = I ∪ J ∪ K`.
    pub fn nonordinary(&self) -> BTreeSet<usize> {
        let mut l = self.exceptional.clone();
        l.extend(&self.penalty);
        l.extend(&self.fine);
        l
    }

    /// The recurrence offset: `x_r = x_{r-1} + x_{θ(r)}`.
    pub fn theta(&self, r: usize) -> Result<usize, Error> {
        if !(2..=self.n).contains(&r) {
            return Err(Error::InvalidSystem(format!(
                "theta index {r} out of 2..={}",
                self.n
            )));
        }
        Ok(match self.kind(r) {
            IndexKind::Ordinary => r - 2,
            IndexKind::Exceptional => r - 1,
            IndexKind::Penalty => {
                let (&i, _) = self
                    .psi
                    .iter()
                    .find(|&(_, &j)| j == r)
                    .expect("penalty index has a psi preimage");
                i - 1
            }
            IndexKind::Fine => self.d(r).expect("fine index has a pi preimage") - 2,
        })
    }

    fn gen_values<T: Clone + Add<Output = T>>(&self, x0: T, x1: T) -> Vec<T> {
        let mut xs = Vec::with_capacity(self.n + 1);
        xs.push(x0);
        xs.push(x1);
        for r in 2..=self.n {
            let t = self.theta(r).expect("r in range");
            let next = xs[r - 1].clone() + xs[t].clone();
            xs.push(next);
        }
        xs
    }

    /// Runs the recurrence from `(x0, x1)`.
    pub fn generate(&self, x0: u64, x1: u64) -> GeneratedSequence {
        GeneratedSequence {
            values: self.gen_values(x0, x1),
            system: self.clone(),
            start: (x0, x1),
        }
    }

    /// Same recurrence over exact rationals (the recurrence is linear, so
    /// sequences decompose over rational combinations of starts).
    pub fn generate_rational(&self, x0: Ratio<i64>, x1: Ratio<i64>) -> Vec<Ratio<i64>> {
        self.gen_values(x0, x1)
    }
}

/// A sequence produced by [`System::generate`], keeping its origin around.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratedSequence {
    values: Vec<u64>,
    system: System,
    start: (u64, u64),
}

impl GeneratedSequence {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn last(&self) -> u64 {
        *self.values.last().expect("sequence is nonempty")
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    /// `0 ≤ x0 ≤ x1 ≤ 2·x0`. Admissible starts keep the whole sequence
    /// doubling-bounded: `x_i ≤ x_{i+1} ≤ 2·x_i`.
    pub fn admissible_start(&self) -> bool {
        let (a, b) = self.start;
        a <= b && b <= 2 * a
    }
}

/// Extracts the system of a word: `I`, `ψ`, `π` straight from the classified
/// fork table. The sequence it generates from `(1, 2)` majorizes the
/// significance sequence term by term.
pub fn from_word(word: &PeriodicWord) -> Result<System, Error> {
    let table = classify(&all_forks(word)?, word)?;
    from_table(&table)
}

/// Same extraction when a classified table is already at hand.
pub fn from_table(table: &ForkTable) -> Result<System, Error> {
    let psi: BTreeMap<usize, usize> = table.psi().iter().map(|(&i, &j)| (i, j)).collect();
    let pi: BTreeMap<usize, usize> = table.pi().iter().map(|(&i, &k)| (i, k)).collect();
    System::new(table.max_index().max(1), psi, pi)
}

/// Closed form over an ordinary run: if `k..=k+t` are all ordinary then
/// `y_{k+t} = F(t+1)·y_{k-1} + F(t)·y_{k-2}`. Returns the closed-form value
/// after checking it against the recurrence.
pub fn run_length_formula(y: &GeneratedSequence, k: usize, t: i64) -> Result<u64, Error> {
    let n = y.system.n();
    let end = k as i64 + t;
    if k < 2 || t < -1 || end < 1 || end as usize > n {
        return Err(Error::InvalidSystem(format!(
            "run k={k}, t={t} out of range for n={n}"
        )));
    }
    for r in k as i64..=end {
        if y.system.kind(r as usize) != IndexKind::Ordinary {
            return Err(Error::InvalidSystem(format!("index {r} is not ordinary")));
        }
    }
    let f1 = u64::try_from(fibonacci(t + 1)).expect("F(t+1) >= 0 for t >= -1");
    let f0 = u64::try_from(fibonacci(t)).expect("F(t) >= 0 for t >= -1");
    let value = f1 * y.values[k - 1] + f0 * y.values[k - 2];
    if value != y.values[end as usize] {
        return Err(Error::Falsified(format!(
            "run formula gave {value}, sequence has {}",
            y.values[end as usize]
        )));
    }
    Ok(value)
}

fn rebuild(
    s: &System,
    psi: BTreeMap<usize, usize>,
    pi: BTreeMap<usize, usize>,
) -> Result<System, RewriteError> {
    System::new(s.n(), psi, pi).map_err(|e| RewriteError::Invalid(e.to_string()))
}

#[cfg(debug_assertions)]
fn debug_check_improves(before: &System, after: &System, op: &str) {
    let y = before.generate(1, 2);
    let y2 = after.generate(1, 2);
    debug_assert!(
        y2.last() >= y.last(),
        "{op} decreased the final term: {before:?} -> {after:?}"
    );
}

#[cfg(not(debug_assertions))]
fn debug_check_improves(_: &System, _: &System, _: &str) {}

/// Moves the exceptional index `r` right, to just before the next
/// non-ordinary index `ℓ` (which must not be bad). Never decreases `y_n`.
pub fn improve_shift_right(s: &System, r: usize) -> Result<System, RewriteError> {
    if !s.exceptional.contains(&r) {
        return Err(RewriteError::NotExceptional(r));
    }
    let Some(&l) = s.nonordinary().range(r + 1..).next() else {
        return Err(RewriteError::Precondition(format!(
            "no non-ordinary index after {r}"
        )));
    };
    if s.is_bad(l) {
        return Err(RewriteError::BadTarget(l));
    }
    if l == r + 1 {
        return Ok(s.clone());
    }
    let mut psi = s.psi.clone();
    let mut pi = s.pi.clone();
    let j = psi.remove(&r).expect("r is exceptional");
    let k = pi.remove(&r).expect("r is exceptional");
    psi.insert(l - 1, j);
    pi.insert(l - 1, k);
    let out = rebuild(s, psi, pi)?;
    debug_check_improves(s, &out, "improve_shift_right");
    Ok(out)
}

/// Swaps an exceptional index `r` with the penalty or fine index at `r + 1`.
/// When `r + 2` is ordinary the exceptional hops over it to `r + 2`;
/// otherwise the two neighbours trade places. Never decreases `y_n`.
pub fn improve_swap(s: &System, r: usize) -> Result<System, RewriteError> {
    if !s.exceptional.contains(&r) {
        return Err(RewriteError::NotExceptional(r));
    }
    if r + 2 > s.n {
        return Err(RewriteError::Precondition(format!(
            "need r + 2 <= n, got r = {r}"
        )));
    }
    let neighbour = s.kind(r + 1);
    if neighbour != IndexKind::Penalty && neighbour != IndexKind::Fine {
        return Err(RewriteError::Precondition(format!(
            "index {} is not penalty or fine",
            r + 1
        )));
    }
    if s.psi[&r] == r + 1 || s.pi[&r] == r + 1 {
        return Err(RewriteError::Precondition(format!(
            "index {} is charged to {r} itself",
            r + 1
        )));
    }
    if s.is_bad(r + 2) {
        return Err(RewriteError::BadTarget(r + 2));
    }
    let target = if s.kind(r + 2) == IndexKind::Ordinary {
        r + 2
    } else {
        r + 1
    };
    let mut psi = s.psi.clone();
    let mut pi = s.pi.clone();
    let j = psi.remove(&r).expect("r is exceptional");
    let k = pi.remove(&r).expect("r is exceptional");
    if neighbour == IndexKind::Penalty {
        let (&i, _) = s
            .psi
            .iter()
            .find(|&(_, &v)| v == r + 1)
            .expect("penalty has a preimage");
        psi.insert(i, r);
    } else {
        for v in pi.values_mut() {
            if *v == r + 1 {
                *v = r;
            }
        }
    }
    psi.insert(target, j);
    pi.insert(target, k);
    let out = rebuild(s, psi, pi)?;
    debug_check_improves(s, &out, "improve_swap");
    Ok(out)
}

/// Rearranges the segment `T = [p, q]` so that its exceptional indices all
/// sit to the right of its penalty indices, by repeated shift + swap. The
/// system is unchanged outside `T`. Never decreases `y_n`.
pub fn improve_separate(s: &System, p: usize, q: usize) -> Result<System, RewriteError> {
    if !(2 <= p && p <= q && q < s.n) {
        return Err(RewriteError::Precondition(format!(
            "need 2 <= p <= q < n, got [{p}, {q}], n = {}",
            s.n
        )));
    }
    if s.kind(q + 1) == IndexKind::Ordinary {
        return Err(RewriteError::Precondition(format!(
            "index {} must be non-ordinary",
            q + 1
        )));
    }
    if s.is_bad(q + 1) {
        return Err(RewriteError::BadTarget(q + 1));
    }
    if s.fine.range(p..=q).next().is_some() {
        return Err(RewriteError::Precondition(format!(
            "[{p}, {q}] contains a fine index"
        )));
    }
    let in_seg: Vec<usize> = s.exceptional.range(p..=q).copied().collect();
    for &i in in_seg.iter().skip(1) {
        if s.is_bad(i) {
            return Err(RewriteError::BadTarget(i));
        }
    }
    let mut cur = s.clone();
    loop {
        let exc: Vec<usize> = cur.exceptional.range(p..=q).copied().collect();
        let pen: Vec<usize> = cur.penalty.range(p..=q).copied().collect();
        let (Some(&i0), Some(&jmax)) = (exc.first(), pen.last()) else {
            break;
        };
        if jmax < i0 {
            break;
        }
        let j = *pen.iter().find(|&&j| j > i0).expect("jmax > i0");
        let i = *exc.iter().rev().find(|&&i| i < j).expect("i0 < j");
        cur = improve_shift_right(&cur, i)?;
        cur = improve_swap(&cur, j - 1)?;
    }
    debug_check_improves(s, &cur, "improve_separate");
    Ok(cur)
}

/// Crosses one pair of penalty assignments: for exceptionals `i1 < i2` with
/// `ψ(i1) < ψ(i2)` and `π(i2) < ψ(i1)`, gives the larger exceptional the
/// smaller penalty. Never decreases `y_n`.
pub fn improve_reassign(s: &System, i1: usize, i2: usize) -> Result<System, RewriteError> {
    for i in [i1, i2] {
        if !s.exceptional.contains(&i) {
            return Err(RewriteError::NotExceptional(i));
        }
    }
    if i1 >= i2 {
        return Err(RewriteError::Precondition(format!(
            "need i1 < i2, got {i1}, {i2}"
        )));
    }
    let (j1, j2) = (s.psi[&i1], s.psi[&i2]);
    if j1 > j2 {
        return Ok(s.clone());
    }
    if s.pi[&i2] >= j1 {
        return Err(RewriteError::Precondition(format!(
            "need pi(i2) < psi(i1), got {} >= {j1}",
            s.pi[&i2]
        )));
    }
    let mut psi = s.psi.clone();
    psi.insert(i1, j2);
    psi.insert(i2, j1);
    let out = rebuild(s, psi, s.pi.clone())?;
    debug_check_improves(s, &out, "improve_reassign");
    Ok(out)
}

/// Sorts the penalties of the given exceptionals so that larger exceptionals
/// get smaller penalties, by repeated pairwise crossings. The target
/// assignment must itself be a system. Never decreases `y_n`.
pub fn improve_reassign_chain(s: &System, indices: &[usize]) -> Result<System, RewriteError> {
    let mut is: Vec<usize> = indices.to_vec();
    is.sort_unstable();
    is.dedup();
    for &i in &is {
        if !s.exceptional.contains(&i) {
            return Err(RewriteError::NotExceptional(i));
        }
    }
    let mut js: Vec<usize> = is.iter().map(|i| s.psi[i]).collect();
    js.sort_unstable_by(|a, b| b.cmp(a));
    let mut psi = s.psi.clone();
    for (&i, &j) in is.iter().zip(&js) {
        psi.insert(i, j);
    }
    let out = rebuild(s, psi, s.pi.clone())?;
    debug_check_improves(s, &out, "improve_reassign_chain");
    Ok(out)
}

/// Strips one index off every set: `S⁻` on `n - 1` points. Requires index 2
/// to be ordinary (it never can be penalty or fine).
pub fn shift_left(s: &System) -> Result<System, RewriteError> {
    if s.exceptional.contains(&2) {
        return Err(RewriteError::Precondition("index 2 is exceptional".into()));
    }
    if s.n < 2 {
        return Err(RewriteError::Precondition("n too small to shift".into()));
    }
    let psi = s.psi.iter().map(|(&i, &j)| (i - 1, j - 1)).collect();
    let pi = s.pi.iter().map(|(&i, &k)| (i - 1, k - 1)).collect();
    System::new(s.n - 1, psi, pi).map_err(|e| RewriteError::Invalid(e.to_string()))
}

/// Result of [`improve_select_fine`]: either the number of fine indices
/// dropped, or a fine index `k0` became *selected* — no other fine index has
/// exceptional or penalty indices inside `k0`'s influence segment.
#[derive(Clone, Debug)]
pub enum SelectOutcome {
    Reduced(System),
    Selected { system: System, k0: usize },
}

impl SelectOutcome {
    pub fn system(&self) -> &System {
        match self {
            SelectOutcome::Reduced(s) => s,
            SelectOutcome::Selected { system, .. } => system,
        }
    }
}

/// Influence segment `A(k) = [d(k), max ψ(π⁻¹(k))]`.
pub fn influence(s: &System, k: usize) -> Option<(usize, usize)> {
    let lo = s.d(k)?;
    let hi =
        s.pi.iter()
            .filter(|&(_, &v)| v == k)
            .map(|(&i, _)| s.psi[&i])
            .max()?;
    Some((lo, hi))
}

/// A fine index is selected when its influence segment contains no index
/// charged to any other fine index.
pub fn is_selected(s: &System, k: usize) -> bool {
    let Some((lo, hi)) = influence(s, k) else {
        return false;
    };
    s.exceptional.range(lo..=hi).all(|i| s.pi[i] == k)
        && s.penalty.range(lo..=hi).all(|j| {
            let (&i, _) = s
                .psi
                .iter()
                .find(|&(_, &v)| v == *j)
                .expect("penalty preimage");
            s.pi[&i] == k
        })
        && s.fine.range(lo..=hi).all(|&kk| kk == k)
}

fn max_d(s: &System) -> Option<usize> {
    s.fine.iter().filter_map(|&k| s.d(k)).max()
}

/// The selection pipeline: given at least two fine indices, rewrites the
/// system (never decreasing `y_n`) until either some fine index disappears
/// or the rightmost-charged fine index `k0` is selected with
/// `d(K) ∩ [k0, n] = ∅`. Each intermediate state is a valid system.
pub fn improve_select_fine(s: &System) -> Result<SelectOutcome, RewriteError> {
    if s.fine.len() < 2 {
        return Err(RewriteError::Precondition(format!(
            "need at least two fine indices, have {}",
            s.fine.len()
        )));
    }
    let k_start = s.fine.len();
    let mut cur = s.clone();
    let guard = s.n * s.n + 16;

    // Step 1: while some fine index k lies strictly between i0 = max d(K)
    // and k0 = pi(i0), recharge the [i0, k] part of k0's preimages to k.
    for _ in 0..guard {
        let i0 = max_d(&cur).expect("fine nonempty");
        let k0 = cur.pi[&i0];
        let Some(&k) = cur.fine.range(i0 + 1..k0).next() else {
            break;
        };
        let mut pi = cur.pi.clone();
        for (&i, v) in pi.iter_mut() {
            if *v == k0 && (i0..=k).contains(&i) {
                *v = k;
            }
        }
        cur = rebuild(&cur, cur.psi.clone(), pi)?;
        if cur.fine.len() < k_start {
            debug_check_improves(s, &cur, "improve_select_fine");
            return Ok(SelectOutcome::Reduced(cur));
        }
    }

    // Step 2: recharge every exceptional in [i0, k0] to k0. No bad index
    // lies in (i0, k0], so the generated sequence is untouched.
    let i0 = max_d(&cur).expect("fine nonempty");
    let k0 = cur.pi[&i0];
    let mut pi = cur.pi.clone();
    for (&i, v) in pi.iter_mut() {
        if (i0..=k0).contains(&i) {
            *v = k0;
        }
    }
    cur = rebuild(&cur, cur.psi.clone(), pi)?;
    if cur.fine.len() < k_start {
        return Err(RewriteError::Pipeline(
            "recharging inside [i0, k0] emptied another fine index".into(),
        ));
    }

    // Step 3: separate [i0, k0 - 1] so penalties precede exceptionals there;
    // afterwards no penalty is left in [i0, k0] (i0 re-read, it only grows).
    if i0 < k0 - 1 || cur.penalty.range(i0..k0).next().is_some() {
        cur = improve_separate(&cur, i0, k0 - 1)?;
    }

    // Step 4: sort the penalties of k0's preimages decreasingly.
    let i0 = max_d(&cur).expect("fine nonempty");
    let k0 = cur.pi[&i0];
    let charged: Vec<usize> = cur
        .pi
        .iter()
        .filter(|&(_, &v)| v == k0)
        .map(|(&i, _)| i)
        .collect();
    cur = improve_reassign_chain(&cur, &charged)?;

    // Step 5: if an alien fine index k lands inside [i0, psi(i0)], recharge
    // to it every preimage of k0 whose penalty lies beyond k.
    for _ in 0..guard {
        let i0 = max_d(&cur).expect("fine nonempty");
        let k0 = cur.pi[&i0];
        let j0 = cur.psi[&i0];
        let Some(&k) = cur.fine.range(i0..=j0).find(|&&k| k != k0) else {
            break;
        };
        let mut pi = cur.pi.clone();
        for (&i, v) in pi.iter_mut() {
            if *v == k0 && cur.psi[&i] > k {
                *v = k;
            }
        }
        cur = rebuild(&cur, cur.psi.clone(), pi)?;
        if cur.fine.len() < k_start {
            debug_check_improves(s, &cur, "improve_select_fine");
            return Ok(SelectOutcome::Reduced(cur));
        }
    }

    // Step 6: pull alien penalties out of (k0, psi(i0)) by pairwise
    // crossings. Each alien crosses with the least own penalty above it, so
    // an own penalty trades strictly down every round and the loop stops.
    for _ in 0..guard * guard {
        let i0 = max_d(&cur).expect("fine nonempty");
        let k0 = cur.pi[&i0];
        let own: BTreeMap<usize, usize> = cur
            .pi
            .iter()
            .filter(|&(_, &v)| v == k0)
            .map(|(&i, _)| (cur.psi[&i], i))
            .collect();
        let &j0 = own.keys().next_back().expect("charged nonempty");
        let Some(&j) = cur.penalty.range(k0 + 1..j0).find(|j| !own.contains_key(j)) else {
            break;
        };
        let (&i, _) = cur
            .psi
            .iter()
            .find(|&(_, &v)| v == j)
            .expect("penalty preimage");
        let (_, &is) = own
            .range(j + 1..)
            .next()
            .expect("own penalty above the alien");
        cur = improve_reassign(&cur, i, is)?;
    }

    // Step 7: push alien exceptionals out of [k0, psi(i0)] by separating up
    // to the next non-ordinary index beyond the window.
    let i0 = max_d(&cur).expect("fine nonempty");
    let k0 = cur.pi[&i0];
    let j0 = cur.psi[&i0];
    if cur.exceptional.range(k0 + 1..=j0).next().is_some() {
        let Some(&f0) = cur.nonordinary().range(j0 + 1..).next() else {
            return Err(RewriteError::Pipeline(
                "alien exceptional in the window but nothing non-ordinary beyond it".into(),
            ));
        };
        cur = improve_separate(&cur, k0 + 1, f0 - 1)?;
    }

    let i0 = max_d(&cur).expect("fine nonempty");
    let k0 = cur.pi[&i0];
    if !is_selected(&cur, k0) {
        return Err(RewriteError::Pipeline(format!(
            "pipeline finished but {k0} is not selected in {cur:?}"
        )));
    }
    if cur.fine.iter().filter_map(|&k| cur.d(k)).any(|d| d >= k0) {
        return Err(RewriteError::Pipeline(
            "a least preimage survived at or beyond k0".into(),
        ));
    }
    debug_check_improves(s, &cur, "improve_select_fine");
    Ok(SelectOutcome::Selected { system: cur, k0 })
}

/// For a single-fine system and an admissible start, the empty system's
/// sequence dominates: `Π_{O_n}(a, b)` ends no lower than `Π_S(a, b)`.
pub fn verify_lemma_4_13(s: &System, a: u64, b: u64) -> Result<bool, Error> {
    if s.fine.len() != 1 {
        return Err(Error::InvalidSystem(format!(
            "need exactly one fine index, have {}",
            s.fine.len()
        )));
    }
    if !(a <= b && b <= 2 * a) {
        return Err(Error::InvalidSystem(format!(
            "start ({a}, {b}) is not admissible"
        )));
    }
    Ok(System::empty(s.n).generate(a, b).last() >= s.generate(a, b).last())
}

/// Report of one exhaustive maximum search over all systems of a given size.
#[derive(Clone, Debug, Serialize)]
pub struct EnumReport {
    pub n: usize,
    pub count_enumerated: u64,
    pub max_yn: u64,
    pub fib: u64,
    pub witness_system: System,
    pub bound_met: bool,
}

const ENUM_MAX_N: usize = 11;

#[allow(clippy::too_many_arguments)]
fn assignments(
    n: usize,
    members: &[usize],
    idx: usize,
    psi: &mut BTreeMap<usize, usize>,
    pi: &mut BTreeMap<usize, usize>,
    jvals: &mut BTreeSet<usize>,
    kvals: &mut BTreeSet<usize>,
    in_i: &BTreeSet<usize>,
    out: &mut Vec<System>,
) {
    if idx == members.len() {
        out.push(System::new(n, psi.clone(), pi.clone()).expect("enumerated system is valid"));
        return;
    }
    let i = members[idx];
    for k in i + 1..n {
        if in_i.contains(&k) || jvals.contains(&k) {
            continue;
        }
        let fresh_k = !kvals.contains(&k);
        for j in k + 1..=n {
            if in_i.contains(&j) || jvals.contains(&j) || kvals.contains(&j) || j == k {
                continue;
            }
            psi.insert(i, j);
            pi.insert(i, k);
            jvals.insert(j);
            if fresh_k {
                kvals.insert(k);
            }
            assignments(n, members, idx + 1, psi, pi, jvals, kvals, in_i, out);
            psi.remove(&i);
            pi.remove(&i);
            jvals.remove(&j);
            if fresh_k {
                kvals.remove(&k);
            }
        }
    }
}

/// Every valid system on `{2..n}`, including the empty one.
pub fn enumerate_systems(n: usize) -> Result<Vec<System>, Error> {
    if n > ENUM_MAX_N {
        return Err(Error::Budget(format!(
            "system enumeration capped at n = {ENUM_MAX_N}, asked for {n}"
        )));
    }
    if n < 2 {
        return Ok(vec![System::empty(n.max(1))]);
    }
    let idxs: Vec<usize> = (2..=n).collect();
    let masks: Vec<u32> = (0..1u32 << idxs.len()).collect();
    let mut all: Vec<System> = masks
        .par_iter()
        .flat_map_iter(|&mask| {
            let members: Vec<usize> = idxs
                .iter()
                .enumerate()
                .filter(|&(b, _)| mask >> b & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            let in_i: BTreeSet<usize> = members.iter().copied().collect();
            let mut out = Vec::new();
            assignments(
                n,
                &members,
                0,
                &mut BTreeMap::new(),
                &mut BTreeMap::new(),
                &mut BTreeSet::new(),
                &mut BTreeSet::new(),
                &in_i,
                &mut out,
            );
            out
        })
        .collect();
    all.sort_by(|a, b| {
        (
            a.psi.iter().collect::<Vec<_>>(),
            a.pi.iter().collect::<Vec<_>>(),
        )
            .cmp(&(
                b.psi.iter().collect::<Vec<_>>(),
                b.pi.iter().collect::<Vec<_>>(),
            ))
    });
    Ok(all)
}

/// Draws a random valid system on `{2..n}` with `pairs` exceptional indices;
/// fine indices are sometimes shared between them. Returns `None` when 64
/// placement attempts fail, which only happens for cramped `n`.
pub fn random_system<R: Rng>(rng: &mut R, n: usize, pairs: usize) -> Option<System> {
    'outer: for _ in 0..64 {
        let mut free: Vec<usize> = (2..=n).collect();
        let mut psi = BTreeMap::new();
        let mut pi = BTreeMap::new();
        let mut kvals: Vec<usize> = Vec::new();
        for _ in 0..pairs {
            if free.len() < 3 {
                continue 'outer;
            }
            // Draw i from the lower third so that k and j fit above it.
            let i = free.remove(rng.random_range(0..(free.len() / 3).max(1)));
            let reusable: Vec<usize> = kvals.iter().copied().filter(|&k| k > i).collect();
            let k = if !reusable.is_empty() && rng.random_bool(0.5) {
                reusable[rng.random_range(0..reusable.len())]
            } else {
                let opts: Vec<usize> = free.iter().copied().filter(|&k| k > i && k < n).collect();
                if opts.is_empty() {
                    continue 'outer;
                }
                let k = opts[rng.random_range(0..opts.len())];
                free.retain(|&x| x != k);
                kvals.push(k);
                k
            };
            let opts: Vec<usize> = free.iter().copied().filter(|&j| j > k).collect();
            if opts.is_empty() {
                continue 'outer;
            }
            let j = opts[rng.random_range(0..opts.len())];
            free.retain(|&x| x != j);
            psi.insert(i, j);
            pi.insert(i, k);
        }
        if let Ok(s) = System::new(n, psi, pi) {
            return Some(s);
        }
    }
    None
}

/// Exhaustively checks that over all systems of size `n`, the generated
/// sequence from `(1, 2)` tops out at exactly `F(n+1)`, attained by the
/// empty system.
pub fn verify_theorem_4_15(n: usize) -> Result<EnumReport, Error> {
    let all = enumerate_systems(n)?;
    let (max_yn, witness) = all
        .par_iter()
        .map(|s| (s.generate(1, 2).last(), s))
        .max_by(|a, b| {
            a.0.cmp(&b.0)
                .then_with(|| b.1.exceptional.len().cmp(&a.1.exceptional.len()))
        })
        .expect("at least the empty system");
    let fib = u64::try_from(fibonacci(n as i64 + 1)).expect("positive");
    Ok(EnumReport {
        n,
        count_enumerated: all.len() as u64,
        max_yn,
        fib,
        witness_system: witness.clone(),
        bound_met: max_yn == fib && witness.exceptional.is_empty(),
    })
}
