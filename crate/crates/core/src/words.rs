//! Digit words and their combinatorics.
//!
//! Finite words are compared as if padded with zeros on the right. Parry's
//! criterion is checked against an infinite digit stream [`Ceiling`], which
//! plays the role of the infinite expansion of one.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Deref;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Largest digit accepted by [`DigitWord::new`].
pub const DEFAULT_DIGIT_CEILING: u32 = (1 << 16) - 1;

/// A non-empty finite sequence of digits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitWord(Vec<u32>);

impl DigitWord {
    pub fn new(digits: Vec<u32>) -> Result<Self> {
        Self::with_ceiling(digits, DEFAULT_DIGIT_CEILING)
    }

    pub fn with_ceiling(digits: Vec<u32>, ceiling: u32) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::domain("digit words must be non-empty"));
        }
        if let Some(d) = digits.iter().find(|&&d| d > ceiling) {
            return Err(Error::domain(alloc::format!(
                "digit {d} exceeds the digit ceiling {ceiling}"
            )));
        }
        Ok(DigitWord(digits))
    }

    pub(crate) fn from_vec(digits: Vec<u32>) -> Self {
        debug_assert!(!digits.is_empty());
        DigitWord(digits)
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    /// `self` followed by `tail`.
    pub fn concat(&self, tail: &[u32]) -> DigitWord {
        let mut v = self.0.clone();
        v.extend_from_slice(tail);
        DigitWord(v)
    }

    /// The word with trailing zeros removed; `None` if every digit is zero.
    pub fn trim_zeros(&self) -> Option<DigitWord> {
        let end = self.0.iter().rposition(|&d| d != 0)? + 1;
        Some(DigitWord(self.0[..end].to_vec()))
    }
}

impl Deref for DigitWord {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for DigitWord {
    type Err = Error;

    /// Parses comma-separated decimal digits, e.g. `"1,0,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::domain(alloc::format!("bad digit {t:?} in word {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DigitWord::new(digits)
    }
}

/// Lexicographic order of `a·0^∞` against `b·0^∞`.
pub fn lex_compare(a: &[u32], b: &[u32]) -> Ordering {
    let n = a.len().max(b.len());
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// `σⁱ w`, dropping the first `i` digits.
pub fn shift(w: &[u32], i: usize) -> Result<DigitWord> {
    if i >= w.len() {
        return Err(Error::OutOfRange { index: i, len: w.len() });
    }
    Ok(DigitWord(w[i..].to_vec()))
}

/// Every proper shift is `≼` the prefix of the same length, and the leading
/// digit is non-zero.
pub fn is_self_admissible(w: &[u32]) -> bool {
    if w.first().is_none_or(|&d| d == 0) {
        return false;
    }
    let n = w.len();
    (1..n).all(|i| w[i..] <= w[..n - i])
}

/// An infinite digit stream used as the admissibility ceiling `ε*(1,β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ceiling {
    /// `prefix · period^∞`.
    Periodic { prefix: Vec<u32>, period: Vec<u32> },
    /// Only a finite prefix is known; reading past it is an error.
    Prefix(Vec<u32>),
}

impl Ceiling {
    /// `(w₁,…,w_{m−1}, w_m − 1)^∞` for a self-admissible `w` whose last
    /// non-zero digit is `w_m`: the infinite expansion of one at the simple
    /// Parry number named by `w`.
    pub fn from_parry_word(w: &[u32]) -> Result<Ceiling> {
        if !is_self_admissible(w) {
            return Err(Error::domain("ceiling word must be self-admissible"));
        }
        let end = w.iter().rposition(|&d| d != 0).expect("leading digit is non-zero") + 1;
        let mut period = w[..end].to_vec();
        period[end - 1] -= 1;
        Ok(Ceiling::periodic(Vec::new(), period))
    }

    /// `(b−1)^∞`, the ceiling of the integer base `b ≥ 2`.
    pub fn integer_base(b: u32) -> Result<Ceiling> {
        if b < 2 {
            return Err(Error::domain("integer base must be at least 2"));
        }
        Ok(Ceiling::periodic(Vec::new(), vec![b - 1]))
    }

    pub fn periodic(prefix: Vec<u32>, period: Vec<u32>) -> Ceiling {
        if period.iter().all(|&d| d == 0) {
            // 0^∞ is the only sensible reading of an all-zero period
            return Ceiling::Periodic { prefix, period: vec![0] };
        }
        Ceiling::Periodic { prefix, period }
    }

    /// Digit at 0-based position `i`.
    pub fn digit(&self, i: usize) -> Option<u32> {
        match self {
            Ceiling::Periodic { prefix, period } => Some(if i < prefix.len() {
                prefix[i]
            } else {
                period[(i - prefix.len()) % period.len()]
            }),
            Ceiling::Prefix(p) => p.get(i).copied(),
        }
    }

    pub fn prefix(&self, n: usize) -> Result<Vec<u32>> {
        (0..n)
            .map(|i| {
                self.digit(i).ok_or_else(|| {
                    Error::domain(alloc::format!("ceiling known only to depth {i}, need {n}"))
                })
            })
            .collect()
    }
}

/// Parry's criterion: `σⁱ w ≼ (ε*₁,…,ε*_{n−i})` for all `0 ≤ i < n`.
pub fn is_admissible(w: &[u32], ceiling: &Ceiling) -> Result<bool> {
    let star = ceiling.prefix(w.len())?;
    let n = w.len();
    Ok((0..n).all(|i| w[i..] <= star[..n - i]))
}

/// Exact number of admissible words of length `n`.
///
/// Runs the β-shift automaton: state `j` means the longest live comparison
/// has matched `ε*₁…ε*_j`. A digit below `ε*_{j+1}` resets to state 0, an
/// equal digit advances, a larger one is forbidden.
pub fn count_admissible(ceiling: &Ceiling, n: usize) -> Result<u128> {
    if n == 0 {
        return Err(Error::domain("count_admissible needs n >= 1"));
    }
    let star = ceiling.prefix(n)?;
    let mut states = vec![0u128; n + 1];
    states[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; n + 1];
        for (j, &count) in states.iter().enumerate() {
            if count == 0 || j >= n {
                continue;
            }
            let c = star[j] as u128;
            let smaller = count.checked_mul(c).ok_or(Error::Overflow)?;
            next[0] = next[0].checked_add(smaller).ok_or(Error::Overflow)?;
            next[j + 1] = next[j + 1].checked_add(count).ok_or(Error::Overflow)?;
        }
        states = next;
    }
    states
        .iter()
        .try_fold(0u128, |acc, &c| acc.checked_add(c))
        .ok_or(Error::Overflow)
}

/// For each position `p ≥ 1`, the largest digit that may follow the
/// self-admissible prefix `w[..p]`; entry 0 is `u32::MAX`.
///
/// A digit `d` may follow `w[..p]` iff `d ≤ w[b]` for every border length
/// `b` of `w[..p]` (including `b = 0`), which the prefix function gives in
/// linear time.
pub(crate) fn follower_bounds(w: &[u32]) -> Vec<u32> {
    let n = w.len();
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && w[i] != w[k] {
            k = pi[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        pi[i] = k;
    }
    // chain_min[b] = min{ w[c] : c in the border chain starting at b }
    let mut chain_min = vec![0u32; n];
    if n > 0 {
        chain_min[0] = w[0];
    }
    for b in 1..n {
        chain_min[b] = w[b].min(chain_min[pi[b - 1]]);
    }
    let mut bounds = vec![u32::MAX; n];
    for p in 1..n {
        bounds[p] = chain_min[pi[p - 1]];
    }
    bounds
}

/// Direction for [`adjacent_self_admissible`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Pred,
    Succ,
}

/// Immediate self-admissible neighbour of the same length.
pub fn adjacent_self_admissible(w: &[u32], direction: Direction) -> Result<Option<DigitWord>> {
    adjacent_with_ceiling(w, direction, DEFAULT_DIGIT_CEILING)
}

pub fn adjacent_with_ceiling(
    w: &[u32],
    direction: Direction,
    ceiling: u32,
) -> Result<Option<DigitWord>> {
    if !is_self_admissible(w) {
        return Err(Error::domain(alloc::format!(
            "({}) is not self-admissible",
            DigitWord(w.to_vec())
        )));
    }
    Ok(match direction {
        Direction::Succ => successor(w, ceiling),
        Direction::Pred => predecessor(w),
    })
}

pub(crate) fn successor(w: &[u32], ceiling: u32) -> Option<DigitWord> {
    let bounds = follower_bounds(w);
    for p in (0..w.len()).rev() {
        let limit = if p == 0 { ceiling } else { bounds[p] };
        if w[p] < limit {
            let mut v = w[..=p].to_vec();
            v[p] += 1;
            v.resize(w.len(), 0);
            return Some(DigitWord(v));
        }
    }
    None
}

pub(crate) fn predecessor(w: &[u32]) -> Option<DigitWord> {
    for p in (0..w.len()).rev() {
        let floor = if p == 0 { 1 } else { 0 };
        if w[p] > floor {
            let mut v = w[..=p].to_vec();
            v[p] -= 1;
            return Some(crate::recurrence::maximal_completion(&v, w.len()));
        }
    }
    None
}

/// Smallest self-admissible word of length `from.len()` that is `≽ from`.
fn ceil_self_admissible(from: &[u32], ceiling: u32) -> Option<DigitWord> {
    let n = from.len();
    if from[0] == 0 {
        let mut v = vec![0; n];
        v[0] = 1;
        return Some(DigitWord(v));
    }
    if from[0] > ceiling {
        return None;
    }
    let bounds = follower_bounds(from);
    // bounds[p] only describes prefixes that are themselves self-admissible,
    // which holds up to the first violation
    for p in 1..n {
        if from[p] > bounds[p] {
            for q in (0..p).rev() {
                let limit = if q == 0 { ceiling } else { bounds[q] };
                if from[q] < limit {
                    let mut v = from[..=q].to_vec();
                    v[q] += 1;
                    v.resize(n, 0);
                    return Some(DigitWord(v));
                }
            }
            return None;
        }
    }
    Some(DigitWord(from.to_vec()))
}

/// Every self-admissible word `w` of length `n` with `from ≼ w ≼ to`, in
/// increasing order.
pub fn enumerate_self_admissible(
    n: usize,
    from: &[u32],
    to: &[u32],
) -> Result<SelfAdmissibleRange> {
    enumerate_with_ceiling(n, from, to, DEFAULT_DIGIT_CEILING)
}

pub fn enumerate_with_ceiling(
    n: usize,
    from: &[u32],
    to: &[u32],
    ceiling: u32,
) -> Result<SelfAdmissibleRange> {
    if from.len() != n || to.len() != n || n == 0 {
        return Err(Error::domain("enumeration bounds must both have length n >= 1"));
    }
    let next = ceil_self_admissible(from, ceiling)
        .filter(|w| lex_compare(w, to) != Ordering::Greater);
    Ok(SelfAdmissibleRange { next, to: to.to_vec(), ceiling })
}

/// Iterator returned by [`enumerate_self_admissible`].
#[derive(Clone, Debug)]
pub struct SelfAdmissibleRange {
    next: Option<DigitWord>,
    to: Vec<u32>,
    ceiling: u32,
}

impl Iterator for SelfAdmissibleRange {
    type Item = DigitWord;

    fn next(&mut self) -> Option<DigitWord> {
        let current = self.next.take()?;
        self.next = successor(&current, self.ceiling)
            .filter(|w| lex_compare(w, &self.to) != Ordering::Greater);
        Some(current)
    }
}

/// All self-admissible words of length `n` whose digits are at most
/// `max_digit`, in increasing order.
pub fn self_admissible_words(n: usize, max_digit: u32) -> SelfAdmissibleRange {
    let mut from = vec![0u32; n];
    from[0] = 1;
    let to = vec![max_digit; n];
    enumerate_with_ceiling(n, &from, &to, max_digit).expect("bounds have length n")
}

pub(crate) fn render(w: &[u32]) -> String {
    alloc::format!("{}", DigitWord(w.to_vec()))
}
